//! Shared contribution merge: turns raw point and cluster contributions
//! (from a direct sum of blocks or from a distributed product) into one
//! canonical spectral profile.
//!
//! Collisions are resolved by dominance (acc > iso_nonpole > pole) with
//! infinite rank absorbing. Families are split, advanced, or fused until no
//! two descriptions overlap; zero is always left explicit when it is an
//! isolated point of the result, never hidden inside a sequence.

use crate::error::CalcError;
use crate::profile::{validate_atoms, PointClass, Rank, SpectralAtom, SpectralProfile, Violation};
use crate::scalar::GaussianRational;
use crate::sets::{
    common_refinement, cover_from, cover_params, sequences_intersect, GeomFamily, REFINEMENT_CAP,
};
use crate::scalar::ratio_power;

/// One isolated-point contribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PointC {
    pub point: GaussianRational,
    pub class: PointClass,
    pub rank: Rank,
    pub order: Option<u32>,
}

/// One cluster contribution: every sequence point shares class and rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FamilyC {
    pub fam: GeomFamily,
    pub class: PointClass,
    pub rank: Rank,
}

fn combined_meta(
    ca: PointClass,
    ra: Rank,
    cb: PointClass,
    rb: Rank,
) -> (PointClass, Rank) {
    let class = ca.max(cb);
    let rank = if class == PointClass::IsoNonPole {
        Rank::Infinite
    } else {
        ra.combine(rb)
    };
    (class, rank)
}

fn merge_point_into(target: &mut PointC, other: &PointC) {
    debug_assert_eq!(target.point, other.point);
    let (class, rank) = combined_meta(target.class, target.rank, other.class, other.rank);
    target.order = if class == PointClass::Pole {
        match (target.order, other.order) {
            (Some(x), Some(y)) => Some(x.max(y)),
            _ => None,
        }
    } else {
        None
    };
    target.class = class;
    target.rank = rank;
}

fn family_point(fam: &FamilyC, n: u32) -> PointC {
    PointC { point: fam.fam.at(n), class: fam.class, rank: fam.rank, order: None }
}

const MAX_ROUNDS: u32 = 4096;

/// Resolves all contributions into a canonical profile.
pub(crate) fn resolve(
    mut points: Vec<PointC>,
    mut families: Vec<FamilyC>,
    depth: u32,
) -> Result<SpectralProfile, CalcError> {
    let zero = GaussianRational::zero();
    let mut rounds = 0u32;
    'fixpoint: loop {
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(CalcError::Internal(format!(
                "contribution merge did not converge within {MAX_ROUNDS} rounds"
            )));
        }

        points.sort_by(|a, b| a.point.cmp(&b.point));
        let mut merged: Vec<PointC> = Vec::with_capacity(points.len());
        for p in points.drain(..) {
            match merged.last_mut() {
                Some(last) if last.point == p.point => merge_point_into(last, &p),
                _ => merged.push(p),
            }
        }
        points = merged;

        families.sort_by(|a, b| a.fam.cmp(&b.fam));
        let mut merged: Vec<FamilyC> = Vec::with_capacity(families.len());
        for f in families.drain(..) {
            match merged.last_mut() {
                Some(last) if last.fam == f.fam => {
                    let (class, rank) = combined_meta(last.class, last.rank, f.class, f.rank);
                    last.class = class;
                    last.rank = rank;
                }
                _ => merged.push(f),
            }
        }
        families = merged;

        // A point sitting at a cluster limit is not isolated: acc dominates.
        for pi in 0..points.len() {
            if families.iter().any(|f| f.fam.limit == points[pi].point) {
                points.remove(pi);
                continue 'fixpoint;
            }
        }

        // A point on a cluster sequence: split the family around it and fold
        // the cell's class and rank into the point.
        for pi in 0..points.len() {
            for fi in 0..families.len() {
                if let Some(n) = families[fi].fam.index_of(&points[pi].point) {
                    let fc = families.remove(fi);
                    for m in 1..n {
                        points.push(family_point(&fc, m));
                    }
                    let (class, rank) =
                        combined_meta(points[pi].class, points[pi].rank, fc.class, fc.rank);
                    points[pi].class = class;
                    points[pi].rank = rank;
                    if class != PointClass::Pole {
                        points[pi].order = None;
                    } else if points[pi].order.is_some() {
                        // The cell joining this point has unknown order.
                        points[pi].order = None;
                    }
                    families.push(FamilyC { fam: fc.fam.advance(n), ..fc });
                    continue 'fixpoint;
                }
            }
        }

        // Power-related families: drop, upgrade, or split by residue.
        for i in 0..families.len() {
            for k in 0..families.len() {
                if i == k {
                    continue;
                }
                let Some((j, t)) = cover_params(&families[i].fam, &families[k].fam) else {
                    continue;
                };
                let n0 = cover_from(&families[i].fam, &families[k].fam).expect("params exist");
                if n0 > 1 {
                    let fc = families[i].clone();
                    for n in 1..n0 {
                        points.push(family_point(&fc, n));
                    }
                    families[i].fam = fc.fam.advance(n0 - 1);
                    continue 'fixpoint;
                }
                let (class, rank) = combined_meta(
                    families[i].class,
                    families[i].rank,
                    families[k].class,
                    families[k].rank,
                );
                if (class, rank) == (families[k].class, families[k].rank) {
                    families.remove(i);
                    continue 'fixpoint;
                }
                if j == 1 {
                    debug_assert!(t >= 1, "identical families were merged above");
                    let covered = families[i].fam.clone();
                    let host = families[k].clone();
                    for n in 1..=(t as u32) {
                        points.push(family_point(&host, n));
                    }
                    families.retain(|f| f.fam != covered && f.fam != host.fam);
                    families.push(FamilyC { fam: covered, class, rank });
                    continue 'fixpoint;
                }
                let host = families.remove(k);
                for sub in host.fam.residue_split(j as u32) {
                    families.push(FamilyC { fam: sub, class: host.class, rank: host.rank });
                }
                continue 'fixpoint;
            }
        }

        // A sequence passing through another cluster's limit skips it: that
        // point stays described as an accumulation point.
        for i in 0..families.len() {
            for k in 0..families.len() {
                if i == k {
                    continue;
                }
                let limit = families[k].fam.limit.clone();
                if let Some(n) = families[i].fam.index_of(&limit) {
                    let fc = families[i].clone();
                    for m in 1..n {
                        points.push(family_point(&fc, m));
                    }
                    families[i].fam = fc.fam.advance(n);
                    continue 'fixpoint;
                }
            }
        }

        // Zero crossings become explicit: zero's classification is the one
        // distinguished value of the calculus and never hides in a sequence.
        for fi in 0..families.len() {
            if let Some(n) = families[fi].fam.index_of(&zero) {
                let fc = families.remove(fi);
                for m in 1..n {
                    points.push(family_point(&fc, m));
                }
                points.push(PointC {
                    point: zero.clone(),
                    class: fc.class,
                    rank: fc.rank,
                    order: None,
                });
                families.push(FamilyC { fam: fc.fam.advance(n), ..fc });
                continue 'fixpoint;
            }
        }

        // Same-limit families with unrelated ratios: reduce to a common
        // ratio where possible, otherwise scan for sporadic overlap.
        for i in 0..families.len() {
            for k in (i + 1)..families.len() {
                let (fa, fb) = (&families[i], &families[k]);
                if fa.fam.limit == fb.fam.limit {
                    let related = ratio_power(&fa.fam.ratio, &fb.fam.ratio).is_some()
                        || ratio_power(&fb.fam.ratio, &fa.fam.ratio).is_some();
                    if related {
                        // Power-related without a cover: provably disjoint.
                        continue;
                    }
                    if let Some((a, b)) =
                        common_refinement(&fa.fam.ratio, &fb.fam.ratio, REFINEMENT_CAP)
                    {
                        let fb = families.remove(k);
                        let fa = families.remove(i);
                        for sub in fa.fam.residue_split(a) {
                            families.push(FamilyC { fam: sub, class: fa.class, rank: fa.rank });
                        }
                        for sub in fb.fam.residue_split(b) {
                            families.push(FamilyC { fam: sub, class: fb.class, rank: fb.rank });
                        }
                        continue 'fixpoint;
                    }
                }
                if let Some(p) = sequences_intersect(&fa.fam, &fb.fam, depth) {
                    let n = fa.fam.index_of(&p).expect("intersection point");
                    let m = fb.fam.index_of(&p).expect("intersection point");
                    let (fa, fb) = (families[i].clone(), families[k].clone());
                    for x in 1..n {
                        points.push(family_point(&fa, x));
                    }
                    for x in 1..m {
                        points.push(family_point(&fb, x));
                    }
                    let (class, rank) = combined_meta(fa.class, fa.rank, fb.class, fb.rank);
                    points.push(PointC { point: p, class, rank, order: None });
                    families[i].fam = fa.fam.advance(n);
                    families[k].fam = fb.fam.advance(m);
                    continue 'fixpoint;
                }
            }
        }

        // Fold a loose point that extends a family's front, when the
        // descriptions agree. Zero stays explicit.
        for entry in families.iter_mut() {
            let front = &entry.fam.limit + &entry.fam.scale;
            if front.is_zero() {
                continue;
            }
            if let Some(pi) = points.iter().position(|p| {
                p.point == front
                    && p.class == entry.class
                    && p.rank == entry.rank
                    && p.order.is_none()
            }) {
                points.remove(pi);
                entry.fam = entry.fam.extend_front();
                continue 'fixpoint;
            }
        }

        break;
    }

    let mut atoms: Vec<SpectralAtom> = Vec::with_capacity(points.len() + families.len());
    for p in points {
        match p.class {
            PointClass::Pole => atoms.push(SpectralAtom::Pole {
                point: p.point,
                order: p.order,
                rank: p.rank,
            }),
            PointClass::IsoNonPole => {
                debug_assert_eq!(p.rank, Rank::Infinite);
                atoms.push(SpectralAtom::IsoNonPole { point: p.point });
            }
        }
    }
    for f in families {
        debug_assert!(
            f.class == PointClass::Pole || f.rank == Rank::Infinite,
            "iso_nonpole sequences are infinite rank"
        );
        atoms.push(SpectralAtom::Cluster {
            limit: f.fam.limit,
            scale: f.fam.scale,
            ratio: f.fam.ratio,
            seq_class: f.class,
            seq_rank: f.rank,
        });
    }
    let profile = SpectralProfile::from_atoms_unchecked(atoms);
    // Structural canonicality is the engine's job; whether the result spans
    // an infinite-dimensional space is a property of the caller's inputs.
    debug_assert!(
        validate_atoms(profile.atoms(), depth)
            .iter()
            .all(|v| matches!(v, Violation::NoInfiniteDimensionalAtom)),
        "merge produced an invalid profile: {profile}"
    );
    Ok(profile)
}
