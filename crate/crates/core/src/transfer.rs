//! Transfer of B-Weyl spectral structure from factors to products:
//! the combined set sigma(A)*bweyl(B) union bweyl(A)*sigma(B), its inclusion
//! in the product's B-Weyl spectrum, the always-valid reverse inclusion, the
//! exact delta when the forward inclusion fails, and the Weyl identity that
//! characterizes the transfer.

use serde::Serialize;

use crate::error::CalcError;
use crate::product::{product_profile, Mode};
use crate::profile::SpectralProfile;
use crate::scalar::GaussianRational;
use crate::sets::SymbolicSet;

/// Which case of the factor taxonomy a pair falls into. A nilpotent factor
/// takes precedence over the algebraic split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    NilpotentFactor,
    BothAlgebraic,
    AAlgebraicNotNilpotent,
    BAlgebraicNotNilpotent,
    BothNonAlgebraic,
}

/// The rule a scenario-specific prediction is based on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionRule {
    /// One factor algebraic and not nilpotent: the inclusion should hold
    /// exactly when the other factor is not Drazin invertible.
    PartnerNotDrazinInvertible,
    /// Both factors non-algebraic: the inclusion should hold exactly when
    /// zero is not a pole of the product.
    ZeroNotAProductPole,
}

/// A rule-based prediction of the inclusion verdict. The computation is
/// always the ground truth; `hypotheses_met` says whether the rule's
/// equivalence is asserted for this pair or merely reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransferPrediction {
    pub rule: PredictionRule,
    pub hypotheses_met: bool,
    pub predicted_inclusion: bool,
    pub agrees: bool,
}

/// How the combined set relates to the product's B-Weyl spectrum. Whenever
/// the two differ at all, they differ exactly by the point zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetDelta {
    Equal,
    EqualPlusZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub mode: Mode,
    pub scenario: Scenario,
    pub s_set: SymbolicSet,
    pub sigma_bw_product: SymbolicSet,
    /// Whether s_set is contained in the product's B-Weyl spectrum.
    pub inclusion_holds: bool,
    /// Points of s_set outside the product's B-Weyl spectrum.
    pub witnesses: Vec<GaussianRational>,
    /// The reverse inclusion (product B-Weyl spectrum inside s_set); holds
    /// on the whole model class.
    pub reverse_inclusion_holds: bool,
    pub prediction: Option<TransferPrediction>,
    pub delta: SetDelta,
    /// Whether this pair satisfies the hypotheses under which inclusion,
    /// set equality, and the Weyl identity are all equivalent and true.
    pub equality_hypotheses_met: bool,
    pub s_equals_bweyl_product: bool,
    /// Whether weyl(product) = weyl(A)*sigma(B) union sigma(A)*weyl(B).
    pub weyl_identity_holds: bool,
}

impl TransferReport {
    /// Field-by-field equality ignoring the mode tag, for cross-mode
    /// consistency checks.
    pub fn same_findings(&self, other: &TransferReport) -> bool {
        self.scenario == other.scenario
            && self.s_set == other.s_set
            && self.sigma_bw_product == other.sigma_bw_product
            && self.inclusion_holds == other.inclusion_holds
            && self.witnesses == other.witnesses
            && self.reverse_inclusion_holds == other.reverse_inclusion_holds
            && self.prediction == other.prediction
            && self.delta == other.delta
            && self.equality_hypotheses_met == other.equality_hypotheses_met
            && self.s_equals_bweyl_product == other.s_equals_bweyl_product
            && self.weyl_identity_holds == other.weyl_identity_holds
    }
}

/// The combined set sigma(A)*bweyl(B) union bweyl(A)*sigma(B).
pub fn s_set(
    pa: &SpectralProfile,
    pb: &SpectralProfile,
    depth: u32,
) -> Result<SymbolicSet, CalcError> {
    let da = pa.derived_sets(depth);
    let db = pb.derived_sets(depth);
    let left = da.sigma.product(&db.bweyl_spectrum)?;
    let right = da.bweyl_spectrum.product(&db.sigma)?;
    Ok(left.union(&right))
}

/// Inclusion verdict with every failing point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclusionVerdict {
    pub holds: bool,
    pub witnesses: Vec<GaussianRational>,
}

/// Tests s_set(A, B) against the B-Weyl spectrum of the product.
pub fn bweyl_inclusion(
    pa: &SpectralProfile,
    pb: &SpectralProfile,
    mode: Mode,
    depth: u32,
) -> Result<InclusionVerdict, CalcError> {
    let product = product_profile(pa, pb, mode, depth)?;
    let bw = product.derived_sets(depth).bweyl_spectrum;
    let s = s_set(pa, pb, depth)?;
    inclusion_verdict(&s, &bw, depth)
}

fn inclusion_verdict(
    s: &SymbolicSet,
    bw: &SymbolicSet,
    depth: u32,
) -> Result<InclusionVerdict, CalcError> {
    let diff = s.difference(bw, depth);
    if !diff.families().is_empty() {
        return Err(CalcError::Internal(format!(
            "the combined set exceeds the product B-Weyl spectrum by a whole family: {diff}"
        )));
    }
    Ok(InclusionVerdict { holds: diff.is_empty(), witnesses: diff.points().to_vec() })
}

/// The reverse inclusion: the product's B-Weyl spectrum inside s_set.
/// Expected to hold for every representable pair.
pub fn reverse_inclusion_holds(
    pa: &SpectralProfile,
    pb: &SpectralProfile,
    mode: Mode,
    depth: u32,
) -> Result<bool, CalcError> {
    let product = product_profile(pa, pb, mode, depth)?;
    let bw = product.derived_sets(depth).bweyl_spectrum;
    let s = s_set(pa, pb, depth)?;
    bw.is_subset(&s, depth)
}

/// Computes the full transfer verdict for one pair in one mode.
pub fn transfer_report(
    pa: &SpectralProfile,
    pb: &SpectralProfile,
    mode: Mode,
    depth: u32,
) -> Result<TransferReport, CalcError> {
    let product = product_profile(pa, pb, mode, depth)?;
    let dprod = product.derived_sets(depth);
    let da = pa.derived_sets(depth);
    let db = pb.derived_sets(depth);
    let fa = pa.flags();
    let fb = pb.flags();
    let zero = GaussianRational::zero();

    let s = s_set(pa, pb, depth)?;
    let bw = dprod.bweyl_spectrum.clone();

    let verdict = inclusion_verdict(&s, &bw, depth)?;
    let reverse = bw.is_subset(&s, depth)?;

    let s_equals_bw = s.set_eq(&bw, depth)?;
    let delta = if s_equals_bw {
        SetDelta::Equal
    } else {
        let mut bw_zero = bw.clone();
        bw_zero.insert(zero.clone());
        if s.set_eq(&bw_zero, depth)? {
            SetDelta::EqualPlusZero
        } else {
            return Err(CalcError::Internal(format!(
                "combined set {s} differs from the product B-Weyl spectrum {bw} \
                 by more than the point zero"
            )));
        }
    };

    let scenario = if fa.nilpotent || fb.nilpotent {
        Scenario::NilpotentFactor
    } else {
        match (fa.algebraic, fb.algebraic) {
            (true, true) => Scenario::BothAlgebraic,
            (true, false) => Scenario::AAlgebraicNotNilpotent,
            (false, true) => Scenario::BAlgebraicNotNilpotent,
            (false, false) => Scenario::BothNonAlgebraic,
        }
    };

    let prediction = match scenario {
        Scenario::AAlgebraicNotNilpotent => Some(TransferPrediction {
            rule: PredictionRule::PartnerNotDrazinInvertible,
            hypotheses_met: da.poles.contains(&zero),
            predicted_inclusion: !fb.drazin_invertible,
            agrees: (!fb.drazin_invertible) == verdict.holds,
        }),
        Scenario::BAlgebraicNotNilpotent => Some(TransferPrediction {
            rule: PredictionRule::PartnerNotDrazinInvertible,
            hypotheses_met: db.poles.contains(&zero),
            predicted_inclusion: !fa.drazin_invertible,
            agrees: (!fa.drazin_invertible) == verdict.holds,
        }),
        Scenario::BothNonAlgebraic => {
            let predicted = !dprod.poles.contains(&zero);
            Some(TransferPrediction {
                rule: PredictionRule::ZeroNotAProductPole,
                hypotheses_met: true,
                predicted_inclusion: predicted,
                agrees: predicted == verdict.holds,
            })
        }
        Scenario::NilpotentFactor | Scenario::BothAlgebraic => None,
    };

    let equality_hypotheses_met = match scenario {
        Scenario::BothNonAlgebraic => !dprod.poles.contains(&zero),
        Scenario::AAlgebraicNotNilpotent => !fb.drazin_invertible,
        Scenario::BAlgebraicNotNilpotent => !fa.drazin_invertible,
        Scenario::NilpotentFactor | Scenario::BothAlgebraic => false,
    };

    let weyl_rhs = da
        .weyl_spectrum
        .product(&db.sigma)?
        .union(&da.sigma.product(&db.weyl_spectrum)?);
    let weyl_identity_holds = dprod.weyl_spectrum.set_eq(&weyl_rhs, depth)?;

    Ok(TransferReport {
        mode,
        scenario,
        s_set: s,
        sigma_bw_product: bw,
        inclusion_holds: verdict.holds,
        witnesses: verdict.witnesses,
        reverse_inclusion_holds: reverse,
        prediction,
        delta,
        equality_hypotheses_met,
        s_equals_bweyl_product: s_equals_bw,
        weyl_identity_holds,
    })
}
