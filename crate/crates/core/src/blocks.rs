//! The construction path: operators given as formal direct sums of primitive
//! blocks whose spectra are known in closed form. Products distribute over
//! the blocks, so pairwise block products give an independent oracle for the
//! classification path.

use serde::{Deserialize, Serialize};

use crate::error::CalcError;
use crate::merge::{resolve, FamilyC, PointC};
use crate::product::{product_profile, Mode};
use crate::profile::{validate_atoms, PointClass, Rank, SpectralAtom, SpectralProfile, Violation};
use crate::scalar::GaussianRational;
use crate::sets::GeomFamily;

/// A building block with fully understood spectral behavior.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "block", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum PrimitiveBlock {
    /// lambda plus a nilpotent of the given order; lambda is a pole of the
    /// resolvent with the block's dimension as rank.
    JordanPole {
        lambda: GaussianRational,
        order: u32,
        rank: Rank,
    },
    /// lambda plus a quasi-nilpotent that is not nilpotent; lambda is
    /// isolated but no power collapses the block.
    QuasiNil { lambda: GaussianRational },
    /// A diagonal with entries limit + scale * ratio^n for n >= 1, each an
    /// eigenvalue of the stated rank; the entries accumulate at the limit.
    ClusterDiag {
        limit: GaussianRational,
        scale: GaussianRational,
        ratio: GaussianRational,
        rank_each: Rank,
    },
}

impl PrimitiveBlock {
    fn check(&self, index: usize) -> Option<Violation> {
        match self {
            PrimitiveBlock::JordanPole { order: 0, .. } => {
                Some(Violation::ZeroPoleOrder { index })
            }
            PrimitiveBlock::ClusterDiag { scale, .. } if scale.is_zero() => {
                Some(Violation::ClusterScaleZero { index })
            }
            PrimitiveBlock::ClusterDiag { ratio, .. }
                if ratio.is_zero() || !ratio.abs_sq_lt_one() =>
            {
                Some(Violation::ClusterRatioOutOfRange { index })
            }
            _ => None,
        }
    }
}

/// A formal direct sum of primitive blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockModel {
    blocks: Vec<PrimitiveBlock>,
}

impl BlockModel {
    /// Builds a model, rejecting malformed blocks and block combinations
    /// whose induced profile is inconsistent (for example a sum of finite
    /// Jordan blocks with no infinite-dimensional part).
    pub fn new(blocks: Vec<PrimitiveBlock>, depth: u32) -> Result<Self, CalcError> {
        if blocks.is_empty() {
            return Err(CalcError::InvalidProfile(vec![Violation::EmptyProfile]));
        }
        let mut violations: Vec<Violation> = blocks
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.check(i))
            .collect();
        // Two cluster blocks describing the same sequence collide at every
        // point; the merge would silently fold them, so reject the
        // description outright.
        for (i, a) in blocks.iter().enumerate() {
            if let PrimitiveBlock::ClusterDiag { limit, scale, ratio, .. } = a {
                let twin = blocks[..i].iter().any(|b| match b {
                    PrimitiveBlock::ClusterDiag { limit: l, scale: s, ratio: r, .. } => {
                        l == limit && s == scale && r == ratio
                    }
                    _ => false,
                });
                if twin {
                    violations.push(Violation::SequenceCollision {
                        point: GeomFamily::new(limit.clone(), scale.clone(), ratio.clone()).at(1),
                    });
                }
            }
        }
        if !violations.is_empty() {
            return Err(CalcError::InvalidProfile(violations));
        }
        let model = BlockModel { blocks };
        model.profile(depth)?;
        Ok(model)
    }

    pub fn blocks(&self) -> &[PrimitiveBlock] {
        &self.blocks
    }

    /// The spectral profile of the direct sum: one contribution per block,
    /// merged with the usual dominance rules.
    pub fn profile(&self, depth: u32) -> Result<SpectralProfile, CalcError> {
        let mut points = Vec::new();
        let mut families = Vec::new();
        for block in &self.blocks {
            match block {
                PrimitiveBlock::JordanPole { lambda, order, rank } => points.push(PointC {
                    point: lambda.clone(),
                    class: PointClass::Pole,
                    rank: *rank,
                    order: Some(*order),
                }),
                PrimitiveBlock::QuasiNil { lambda } => points.push(PointC {
                    point: lambda.clone(),
                    class: PointClass::IsoNonPole,
                    rank: Rank::Infinite,
                    order: None,
                }),
                PrimitiveBlock::ClusterDiag { limit, scale, ratio, rank_each } => {
                    families.push(FamilyC {
                        fam: GeomFamily::new(limit.clone(), scale.clone(), ratio.clone()),
                        class: PointClass::Pole,
                        rank: *rank_each,
                    })
                }
            }
        }
        let profile = resolve(points, families, depth)?;
        let violations = validate_atoms(profile.atoms(), depth);
        if !violations.is_empty() {
            return Err(CalcError::InvalidProfile(violations));
        }
        Ok(profile)
    }
}

/// The scaled cluster mu * (limit + scale q^n) as atoms. A cell hitting zero
/// is the zero operator there, hence an explicit pole; the cells before it
/// become isolated points of the sequence's class.
fn scaled_cluster_atoms(
    mu: &GaussianRational,
    mu_rank: Rank,
    fam: &GeomFamily,
    rank_each: Rank,
    class: PointClass,
) -> Vec<SpectralAtom> {
    debug_assert!(!mu.is_zero());
    let cell_rank = mu_rank.combine(rank_each);
    let seq_rank = if class == PointClass::IsoNonPole { Rank::Infinite } else { cell_rank };
    let scaled = GeomFamily::new(mu * &fam.limit, mu * &fam.scale, fam.ratio.clone());
    let make_point = |value: GaussianRational| match class {
        PointClass::Pole => SpectralAtom::pole(value, None, cell_rank),
        PointClass::IsoNonPole => SpectralAtom::iso_non_pole(value),
    };
    let make_cluster = |f: GeomFamily| {
        SpectralAtom::cluster(f.limit, f.scale, f.ratio, class, seq_rank)
    };
    match scaled.index_of(&GaussianRational::zero()) {
        None => vec![make_cluster(scaled)],
        Some(n) => {
            let mut out: Vec<SpectralAtom> = (1..n).map(|m| make_point(scaled.at(m))).collect();
            out.push(SpectralAtom::pole(GaussianRational::zero(), None, cell_rank));
            out.push(make_cluster(scaled.advance(n)));
            out
        }
    }
}

/// Spectral atoms contributed by the product of two primitive blocks.
///
/// Two diagonals with accumulation points multiply to a doubly indexed
/// family that this calculus cannot describe, so that pairing errors out.
pub fn primitive_product(
    p: &PrimitiveBlock,
    s: &PrimitiveBlock,
) -> Result<Vec<SpectralAtom>, CalcError> {
    use PrimitiveBlock::{ClusterDiag, JordanPole, QuasiNil};
    Ok(match (p, s) {
        (ClusterDiag { .. }, ClusterDiag { .. }) => {
            return Err(CalcError::NotFinitelyRepresentable)
        }
        (
            JordanPole { lambda: mu, rank: rp, .. },
            JordanPole { lambda: nu, rank: rs, .. },
        ) => vec![SpectralAtom::pole(mu * nu, None, rp.combine(*rs))],
        (QuasiNil { lambda: mu }, JordanPole { lambda: nu, .. })
        | (JordanPole { lambda: nu, .. }, QuasiNil { lambda: mu }) => {
            if nu.is_zero() {
                // The Jordan factor's power kills the whole product block.
                vec![SpectralAtom::pole(GaussianRational::zero(), None, Rank::Infinite)]
            } else if mu.is_zero() {
                vec![SpectralAtom::iso_non_pole(GaussianRational::zero())]
            } else {
                vec![SpectralAtom::iso_non_pole(mu * nu)]
            }
        }
        (QuasiNil { lambda: mu }, QuasiNil { lambda: nu }) => {
            // Powers of the product never vanish, whatever mu and nu are.
            vec![SpectralAtom::iso_non_pole(mu * nu)]
        }
        (
            JordanPole { lambda: mu, rank: rp, .. },
            ClusterDiag { limit, scale, ratio, rank_each },
        )
        | (
            ClusterDiag { limit, scale, ratio, rank_each },
            JordanPole { lambda: mu, rank: rp, .. },
        ) => {
            if mu.is_zero() {
                vec![SpectralAtom::pole(GaussianRational::zero(), None, Rank::Infinite)]
            } else {
                let fam = GeomFamily::new(limit.clone(), scale.clone(), ratio.clone());
                scaled_cluster_atoms(mu, *rp, &fam, *rank_each, PointClass::Pole)
            }
        }
        (QuasiNil { lambda: mu }, ClusterDiag { limit, scale, ratio, rank_each })
        | (ClusterDiag { limit, scale, ratio, rank_each }, QuasiNil { lambda: mu }) => {
            if mu.is_zero() {
                vec![SpectralAtom::iso_non_pole(GaussianRational::zero())]
            } else {
                let fam = GeomFamily::new(limit.clone(), scale.clone(), ratio.clone());
                scaled_cluster_atoms(mu, Rank::Infinite, &fam, *rank_each, PointClass::IsoNonPole)
            }
        }
    })
}

/// The product profile obtained purely by distributing over block pairs,
/// with no reference to the classification rules.
pub fn oracle_product(
    a: &BlockModel,
    b: &BlockModel,
    depth: u32,
) -> Result<SpectralProfile, CalcError> {
    let mut points = Vec::new();
    let mut families = Vec::new();
    for pa in a.blocks() {
        for pb in b.blocks() {
            for atom in primitive_product(pa, pb)? {
                match atom {
                    SpectralAtom::Pole { point, order, rank } => {
                        points.push(PointC { point, class: PointClass::Pole, rank, order })
                    }
                    SpectralAtom::IsoNonPole { point } => points.push(PointC {
                        point,
                        class: PointClass::IsoNonPole,
                        rank: Rank::Infinite,
                        order: None,
                    }),
                    SpectralAtom::Cluster { limit, scale, ratio, seq_class, seq_rank } => {
                        families.push(FamilyC {
                            fam: GeomFamily::new(limit, scale, ratio),
                            class: seq_class,
                            rank: seq_rank,
                        })
                    }
                }
            }
        }
    }
    resolve(points, families, depth)
}

/// Side-by-side result of the two product paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub mode: Mode,
    pub equal: bool,
    pub oracle: SpectralProfile,
    pub calculus: SpectralProfile,
    /// Atoms the block oracle produced that the calculus did not.
    pub only_oracle: Vec<SpectralAtom>,
    /// Atoms the calculus produced that the block oracle did not.
    pub only_calculus: Vec<SpectralAtom>,
}

/// Runs both product paths on the same pair of models and compares the
/// canonical outcomes structurally.
pub fn oracle_agreement(
    a: &BlockModel,
    b: &BlockModel,
    mode: Mode,
    depth: u32,
) -> Result<AgreementReport, CalcError> {
    let oracle = oracle_product(a, b, depth)?;
    let pa = a.profile(depth)?;
    let pb = b.profile(depth)?;
    let calculus = product_profile(&pa, &pb, mode, depth)?;
    let only_oracle: Vec<SpectralAtom> = oracle
        .atoms()
        .iter()
        .filter(|at| !calculus.atoms().contains(at))
        .cloned()
        .collect();
    let only_calculus: Vec<SpectralAtom> = calculus
        .atoms()
        .iter()
        .filter(|at| !oracle.atoms().contains(at))
        .cloned()
        .collect();
    let equal = oracle == calculus;
    debug_assert_eq!(equal, only_oracle.is_empty() && only_calculus.is_empty());
    Ok(AgreementReport { mode, equal, oracle, calculus, only_oracle, only_calculus })
}
