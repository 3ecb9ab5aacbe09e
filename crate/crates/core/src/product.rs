//! The classification path: computes the spectral profile of a tensor or
//! two-sided multiplication product directly from the factor profiles.
//!
//! Zero is classified by a decision table over the factors' zero classes and
//! global flags; each nonzero isolated candidate is classified from its full
//! factorization with dominance acc > iso_nonpole > pole; clusters are scaled
//! by the partner's nonzero isolated points. Both product modes have the same
//! spectral theory, so one computation serves both and the mode only tags
//! reports.

use serde::{Deserialize, Serialize};

use crate::error::CalcError;
use crate::merge::{resolve, FamilyC, PointC};
use crate::profile::{PointClass, Rank, SpectralAtom, SpectralProfile, ZeroClass};
use crate::scalar::GaussianRational;
use crate::sets::GeomFamily;

/// Which product operator is being modeled. The two have identical spectral
/// structure here; the flag is carried through for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Tensor,
    Elementary,
}

/// How a described spectrum point participates in a factorization pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Pole,
    #[serde(rename = "iso_nonpole")]
    IsoNonPole,
    /// A cluster limit: products through it accumulate.
    Limit,
}

/// One described point of a factor spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorPoint {
    pub value: GaussianRational,
    pub kind: FactorKind,
    pub rank: Rank,
}

/// All ways a nonzero product point factors through described points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub lambda: GaussianRational,
    pub pairs: Vec<(FactorPoint, FactorPoint)>,
}

/// Classification of a nonzero product point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NonzeroClass {
    #[serde(rename = "pole")]
    Pole,
    #[serde(rename = "iso_nonpole")]
    IsoNonPole,
    #[serde(rename = "acc")]
    Acc,
}

/// Which zero rule decided the product's zero class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroCase {
    /// Zero is in neither factor spectrum.
    Absent,
    /// A factor accumulates at zero and the partner contributes a nonzero
    /// point, so zero accumulates in the product.
    AccLimit,
    /// A nilpotent factor makes the whole product nilpotent.
    NilpotentFactor,
    /// A quasi-nilpotent non-nilpotent factor survives against a
    /// non-nilpotent partner.
    QuasinilpotentFactor,
    /// Both zero classes are isolated or absent: pole iff neither side
    /// contributes an iso-non-pole part.
    IsolatedTable,
}

/// Why a nonzero isolated candidate got its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonzeroCase {
    AllPolePairs,
    IsoNonPoleFactor,
    /// The candidate coincides with a scaled cluster limit and is not
    /// isolated at all.
    AccDominated,
}

/// Per-point provenance of a product classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonzeroProvenance {
    pub point: GaussianRational,
    pub case: NonzeroCase,
}

/// A product profile together with its classification provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub mode: Mode,
    pub profile: SpectralProfile,
    pub zero_class: ZeroClass,
    pub zero_case: ZeroCase,
    pub nonzero: Vec<NonzeroProvenance>,
}

fn whole_rank(atom: &SpectralAtom) -> Rank {
    match atom {
        SpectralAtom::Pole { rank, .. } => *rank,
        // Quasi-nilpotent parts and clusters act on infinite-dimensional
        // subspaces as wholes.
        SpectralAtom::IsoNonPole { .. } | SpectralAtom::Cluster { .. } => Rank::Infinite,
    }
}

fn has_nonzero_described_point(p: &SpectralProfile) -> bool {
    p.atoms().iter().any(|a| match a.isolated_point() {
        Some(point) => !point.is_zero(),
        // A cluster sequence passes through zero at most once.
        None => true,
    })
}

/// The zero class of the product, together with the rule that decided it.
pub fn classify_zero_case(pa: &SpectralProfile, pb: &SpectralProfile) -> (ZeroClass, ZeroCase) {
    let za = pa.zero_class();
    let zb = pb.zero_class();
    if za == ZeroClass::Absent && zb == ZeroClass::Absent {
        return (ZeroClass::Absent, ZeroCase::Absent);
    }
    // Zero accumulates only if the accumulating factor gets multiplied by
    // something nonzero; a partner with spectrum {0} flattens everything.
    if (za == ZeroClass::Acc && has_nonzero_described_point(pb))
        || (zb == ZeroClass::Acc && has_nonzero_described_point(pa))
    {
        return (ZeroClass::Acc, ZeroCase::AccLimit);
    }
    let fa = pa.flags();
    let fb = pb.flags();
    if fa.nilpotent || fb.nilpotent {
        return (ZeroClass::Pole, ZeroCase::NilpotentFactor);
    }
    if fa.quasinilpotent || fb.quasinilpotent {
        return (ZeroClass::IsoNonPole, ZeroCase::QuasinilpotentFactor);
    }
    debug_assert!(za != ZeroClass::Acc && zb != ZeroClass::Acc);
    let pole = matches!(za, ZeroClass::Absent | ZeroClass::Pole)
        && matches!(zb, ZeroClass::Absent | ZeroClass::Pole);
    let class = if pole { ZeroClass::Pole } else { ZeroClass::IsoNonPole };
    (class, ZeroCase::IsolatedTable)
}

/// The zero class of the product spectrum.
pub fn classify_zero(pa: &SpectralProfile, pb: &SpectralProfile) -> ZeroClass {
    classify_zero_case(pa, pb).0
}

/// Classifies a nonzero product point from its factorization pairs:
/// acc dominates iso_nonpole dominates pole.
pub fn classify_nonzero(f: &Factorization) -> Result<NonzeroClass, CalcError> {
    if f.pairs.is_empty() {
        return Err(CalcError::EmptyFactorization);
    }
    debug_assert!(!f.lambda.is_zero());
    let kinds = f.pairs.iter().flat_map(|(a, b)| [a.kind, b.kind]);
    let mut seen_iso = false;
    for kind in kinds {
        match kind {
            FactorKind::Limit => return Ok(NonzeroClass::Acc),
            FactorKind::IsoNonPole => seen_iso = true,
            FactorKind::Pole => {}
        }
    }
    Ok(if seen_iso { NonzeroClass::IsoNonPole } else { NonzeroClass::Pole })
}

/// Described points of a profile with finite enumeration: isolated atoms and
/// cluster limits (sequence points are handled through membership queries).
fn finite_values(p: &SpectralProfile) -> Vec<FactorPoint> {
    let mut out = Vec::new();
    for atom in p.atoms() {
        match atom {
            SpectralAtom::Pole { point, rank, .. } => out.push(FactorPoint {
                value: point.clone(),
                kind: FactorKind::Pole,
                rank: *rank,
            }),
            SpectralAtom::IsoNonPole { point } => out.push(FactorPoint {
                value: point.clone(),
                kind: FactorKind::IsoNonPole,
                rank: Rank::Infinite,
            }),
            SpectralAtom::Cluster { limit, .. } => out.push(FactorPoint {
                value: limit.clone(),
                kind: FactorKind::Limit,
                rank: Rank::Infinite,
            }),
        }
    }
    out
}

/// Finds how `v` is described in `p`, if at all.
fn locate(p: &SpectralProfile, v: &GaussianRational) -> Option<(FactorKind, Rank)> {
    for atom in p.atoms() {
        match atom {
            SpectralAtom::Pole { point, rank, .. } if point == v => {
                return Some((FactorKind::Pole, *rank))
            }
            SpectralAtom::IsoNonPole { point } if point == v => {
                return Some((FactorKind::IsoNonPole, Rank::Infinite))
            }
            SpectralAtom::Cluster { limit, seq_class, seq_rank, .. } => {
                if limit == v {
                    return Some((FactorKind::Limit, Rank::Infinite));
                }
                if atom.family().expect("cluster").contains(v) {
                    let kind = match seq_class {
                        PointClass::Pole => FactorKind::Pole,
                        PointClass::IsoNonPole => FactorKind::IsoNonPole,
                    };
                    return Some((kind, *seq_rank));
                }
            }
            _ => {}
        }
    }
    None
}

/// Every factorization of a nonzero `lambda` through described points of the
/// two profiles, exact including cluster sequence points.
pub fn factorization(
    pa: &SpectralProfile,
    pb: &SpectralProfile,
    lambda: &GaussianRational,
) -> Factorization {
    debug_assert!(!lambda.is_zero());
    let mut pairs = Vec::new();
    for fp in finite_values(pa) {
        if fp.value.is_zero() {
            continue;
        }
        let nu = lambda.checked_div(&fp.value).expect("nonzero");
        if let Some((kind, rank)) = locate(pb, &nu) {
            pairs.push((fp, FactorPoint { value: nu, kind, rank }));
        }
    }
    // Sequence points of A against finitely described points of B; the
    // sequence-sequence case cannot occur (only one factor has clusters).
    for atom in pa.clusters() {
        let fam = atom.family().expect("cluster");
        let (seq_class, seq_rank) = match atom {
            SpectralAtom::Cluster { seq_class, seq_rank, .. } => (*seq_class, *seq_rank),
            _ => unreachable!(),
        };
        for fp in finite_values(pb) {
            if fp.value.is_zero() {
                continue;
            }
            let mu = lambda.checked_div(&fp.value).expect("nonzero");
            if fam.contains(&mu) {
                let kind = match seq_class {
                    PointClass::Pole => FactorKind::Pole,
                    PointClass::IsoNonPole => FactorKind::IsoNonPole,
                };
                pairs.push((FactorPoint { value: mu, kind, rank: seq_rank }, fp));
            }
        }
    }
    Factorization { lambda: lambda.clone(), pairs }
}

/// Rank of the product's zero point: zero's subspace in one factor collapses
/// the partner atom by atom, with clusters counting as infinite wholes.
fn zero_product_rank(pa: &SpectralProfile, pb: &SpectralProfile) -> Rank {
    let mut out: Option<Rank> = None;
    let mut fold = |r: Rank| out = Some(out.map_or(r, |acc| acc.combine(r)));
    if let Some(ra) = pa.zero_rank() {
        for atom in pb.atoms() {
            fold(ra.combine(whole_rank(atom)));
        }
    }
    if let Some(rb) = pb.zero_rank() {
        for atom in pa.atoms() {
            fold(rb.combine(whole_rank(atom)));
        }
    }
    out.expect("zero is described in at least one factor")
}

/// Computes the product profile with per-point provenance.
pub fn product_report(
    pa: &SpectralProfile,
    pb: &SpectralProfile,
    mode: Mode,
    depth: u32,
) -> Result<ProductReport, CalcError> {
    if pa.has_clusters() && pb.has_clusters() {
        return Err(CalcError::NotFinitelyRepresentable);
    }
    let mut points: Vec<PointC> = Vec::new();
    let mut families: Vec<FamilyC> = Vec::new();
    let mut nonzero = Vec::new();

    // Nonzero isolated candidates: pairwise products of isolated points.
    let iso_a: Vec<&SpectralAtom> = pa.isolated_atoms().collect();
    let iso_b: Vec<&SpectralAtom> = pb.isolated_atoms().collect();
    let mut candidates: Vec<GaussianRational> = Vec::new();
    for a in &iso_a {
        for b in &iso_b {
            let lambda = a.isolated_point().unwrap() * b.isolated_point().unwrap();
            if !lambda.is_zero() && !candidates.contains(&lambda) {
                candidates.push(lambda);
            }
        }
    }
    candidates.sort();
    for lambda in candidates {
        let f = factorization(pa, pb, &lambda);
        let class = classify_nonzero(&f)?;
        match class {
            NonzeroClass::Acc => {
                nonzero.push(NonzeroProvenance { point: lambda, case: NonzeroCase::AccDominated });
            }
            NonzeroClass::Pole | NonzeroClass::IsoNonPole => {
                let rank = f
                    .pairs
                    .iter()
                    .map(|(x, y)| x.rank.combine(y.rank))
                    .fold(Rank::Finite, Rank::combine);
                let (class, case) = if class == NonzeroClass::IsoNonPole {
                    (PointClass::IsoNonPole, NonzeroCase::IsoNonPoleFactor)
                } else {
                    (PointClass::Pole, NonzeroCase::AllPolePairs)
                };
                let rank = if class == PointClass::IsoNonPole { Rank::Infinite } else { rank };
                nonzero.push(NonzeroProvenance { point: lambda.clone(), case });
                points.push(PointC { point: lambda, class, rank, order: None });
            }
        }
    }

    // Zero.
    let (zero_class, zero_case) = classify_zero_case(pa, pb);
    match zero_class {
        ZeroClass::Absent | ZeroClass::Acc => {}
        ZeroClass::Pole | ZeroClass::IsoNonPole => {
            let rank = zero_product_rank(pa, pb);
            let class = match zero_class {
                ZeroClass::Pole => PointClass::Pole,
                _ => PointClass::IsoNonPole,
            };
            points.push(PointC { point: GaussianRational::zero(), class, rank, order: None });
        }
    }

    // Clusters scaled by the partner's nonzero isolated points. Zero cells
    // are exact zero operators, classified globally above, so a scaled
    // sequence crossing zero is split around the crossing here.
    let (cluster_side, point_side) =
        if pa.has_clusters() { (pa, pb) } else { (pb, pa) };
    for atom in cluster_side.clusters() {
        let (seq_class, seq_rank) = match atom {
            SpectralAtom::Cluster { seq_class, seq_rank, .. } => (*seq_class, *seq_rank),
            _ => unreachable!(),
        };
        let fam = atom.family().expect("cluster");
        for partner in point_side.isolated_atoms() {
            let nu = partner.isolated_point().unwrap();
            if nu.is_zero() {
                continue;
            }
            let nu_class = partner.isolated_class().unwrap();
            let nu_rank = partner.isolated_rank().unwrap();
            let class = if nu_class == PointClass::IsoNonPole
                || seq_class == PointClass::IsoNonPole
            {
                PointClass::IsoNonPole
            } else {
                PointClass::Pole
            };
            let rank = if class == PointClass::IsoNonPole {
                Rank::Infinite
            } else {
                nu_rank.combine(seq_rank)
            };
            let scaled = GeomFamily::new(nu * &fam.limit, nu * &fam.scale, fam.ratio.clone());
            match scaled.index_of(&GaussianRational::zero()) {
                None => families.push(FamilyC { fam: scaled, class, rank }),
                Some(n) => {
                    for m in 1..n {
                        points.push(PointC {
                            point: scaled.at(m),
                            class,
                            rank,
                            order: None,
                        });
                    }
                    families.push(FamilyC { fam: scaled.advance(n), class, rank });
                }
            }
        }
    }

    let profile = resolve(points, families, depth)?;
    Ok(ProductReport { mode, profile, zero_class, zero_case, nonzero })
}

/// The canonical product profile; identical for both modes.
pub fn product_profile(
    pa: &SpectralProfile,
    pb: &SpectralProfile,
    mode: Mode,
    depth: u32,
) -> Result<SpectralProfile, CalcError> {
    product_report(pa, pb, mode, depth).map(|r| r.profile)
}
