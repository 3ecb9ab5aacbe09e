//! Symbolic sets of spectral points.
//!
//! A [`SymbolicSet`] is a finite list of explicit points together with a
//! finite list of geometric families `{limit + scale * ratio^n : n >= 1}`.
//! Derived spectra (poles, B-Weyl, Weyl) are reported in this form so that
//! cluster sequences stay exact instead of being truncated. Membership,
//! inclusion and equality are decided exactly whenever the families involved
//! are power-related; otherwise scans are depth-limited and ambiguity is
//! reported as an error rather than guessed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CalcError;
use crate::scalar::{geom_member, ratio_power, GaussianRational};

/// The geometric point family `{limit + scale * ratio^n : n >= 1}`.
///
/// The limit itself is not a member. Invariants: `scale != 0` and
/// `0 < |ratio|^2 < 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeomFamily {
    pub limit: GaussianRational,
    pub scale: GaussianRational,
    pub ratio: GaussianRational,
}

impl GeomFamily {
    pub fn new(limit: GaussianRational, scale: GaussianRational, ratio: GaussianRational) -> Self {
        debug_assert!(!scale.is_zero() && !ratio.is_zero() && ratio.abs_sq_lt_one());
        GeomFamily { limit, scale, ratio }
    }

    /// The `n`-th sequence point, `n >= 1`.
    pub fn at(&self, n: u32) -> GaussianRational {
        &self.limit + &(&self.scale * &self.ratio.pow(n))
    }

    /// Index of `p` on this family, if it lies on it.
    pub fn index_of(&self, p: &GaussianRational) -> Option<u32> {
        geom_member(&self.limit, &self.scale, &self.ratio, p)
    }

    pub fn contains(&self, p: &GaussianRational) -> bool {
        self.index_of(p).is_some()
    }

    /// The family with its first `k` points dropped.
    pub fn advance(&self, k: u32) -> GeomFamily {
        GeomFamily {
            limit: self.limit.clone(),
            scale: &self.scale * &self.ratio.pow(k),
            ratio: self.ratio.clone(),
        }
    }

    /// The family extended by one extra leading point `limit + scale`.
    pub(crate) fn extend_front(&self) -> GeomFamily {
        GeomFamily {
            limit: self.limit.clone(),
            scale: self.scale.checked_div(&self.ratio).expect("ratio nonzero"),
            ratio: self.ratio.clone(),
        }
    }

    /// Splits into `j` subfamilies of ratio `ratio^j`, one per index residue.
    /// Their union is exactly this family.
    pub(crate) fn residue_split(&self, j: u32) -> Vec<GeomFamily> {
        debug_assert!(j >= 2);
        let big_ratio = self.ratio.pow(j);
        (1..=j)
            .map(|i| GeomFamily {
                limit: self.limit.clone(),
                // Scale chosen so the m-th point is the original index i + j*(m-1).
                scale: &self.scale
                    * &self
                        .ratio
                        .pow(i)
                        .checked_div(&big_ratio)
                        .expect("ratio nonzero"),
                ratio: big_ratio.clone(),
            })
            .collect()
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    (a + b - 1).div_euclid(b)
}

/// Exponent bound for the common-ratio refinement search.
pub(crate) const REFINEMENT_CAP: u32 = 8;

/// Exponents of the cover relation between families sharing a limit: when
/// `f`'s ratio is an integer power `j >= 1` of `g`'s and the scale quotient
/// is a power `t` of `g`'s ratio, `f`'s n-th point sits at `g`-index
/// `t + j*n`. `None` means no such power relation; the families may still
/// intersect sporadically.
pub(crate) fn cover_params(f: &GeomFamily, g: &GeomFamily) -> Option<(i64, i64)> {
    if f.limit != g.limit {
        return None;
    }
    let j = if f.ratio == g.ratio {
        1
    } else {
        let j = ratio_power(&f.ratio, &g.ratio)?;
        if j < 1 {
            return None;
        }
        j
    };
    let quot = f.scale.checked_div(&g.scale).expect("scale nonzero");
    let t = ratio_power(&quot, &g.ratio)?;
    Some((j, t))
}

/// First index of `f` whose tail `{f.at(n) : n >= n0}` lies entirely in `g`
/// (`1` means `f` is a full subset of `g`); `None` when no power relation
/// certifies a cover.
pub(crate) fn cover_from(f: &GeomFamily, g: &GeomFamily) -> Option<u32> {
    let (j, t) = cover_params(f, g)?;
    // f's n-th point is a g member iff t + j*n >= 1.
    Some(ceil_div(1 - t, j).max(1) as u32)
}

/// Smallest exponents `(a, b)` with `rf^a == rg^b`, searched up to `cap`.
/// Splitting two families by these residues reduces them to a common ratio,
/// making their intersection exactly decidable.
pub(crate) fn common_refinement(
    rf: &GaussianRational,
    rg: &GaussianRational,
    cap: u32,
) -> Option<(u32, u32)> {
    let mut pf = rf.clone();
    for a in 1..=cap {
        let mut pg = rg.clone();
        for b in 1..=cap {
            if pg == pf {
                return Some((a, b));
            }
            if pg.abs_sq() < pf.abs_sq() {
                break;
            }
            pg = &pg * rg;
        }
        pf = &pf * rf;
    }
    None
}

/// First shared point of two families, if any. Exact when the limits differ
/// (solutions are confined to a computable prefix of each sequence) or when
/// the ratios are power-related; only same-limit families with unrelated
/// ratios fall back to a scan of the first `depth` points.
pub(crate) fn sequences_intersect(
    f: &GeomFamily,
    g: &GeomFamily,
    depth: u32,
) -> Option<GaussianRational> {
    if f.limit == g.limit {
        if let Some(n0) = cover_from(f, g) {
            return Some(f.at(n0));
        }
        if let Some(n0) = cover_from(g, f) {
            return Some(g.at(n0));
        }
        let related = f.ratio == g.ratio
            || ratio_power(&f.ratio, &g.ratio).is_some()
            || ratio_power(&g.ratio, &f.ratio).is_some();
        if related {
            // Power-related ratios with no cover relation: a shared point
            // would force the scale quotient to be a ratio power, which
            // cover_from already ruled out.
            return None;
        }
        if let Some((a, b)) = common_refinement(&f.ratio, &g.ratio, REFINEMENT_CAP) {
            // Residue subfamilies share one ratio, so covers decide exactly.
            let mut hits = Vec::new();
            for sf in f.residue_split(a) {
                for sg in g.residue_split(b) {
                    if let Some(n0) = cover_from(&sf, &sg) {
                        hits.push(sf.at(n0));
                    }
                    if let Some(m0) = cover_from(&sg, &sf) {
                        hits.push(sg.at(m0));
                    }
                }
            }
            return hits.into_iter().min();
        }
        for n in 1..=depth {
            let p = f.at(n);
            if g.contains(&p) {
                return Some(p);
            }
        }
        return None;
    }
    // Distinct limits: a shared point needs one of the deviation terms to
    // reach at least half the limit gap, which pins it to a finite prefix.
    let threshold = {
        let delta = (&g.limit - &f.limit).abs_sq();
        delta / num::BigRational::from_integer(4.into())
    };
    let scan = |from: &GeomFamily, into: &GeomFamily| -> Option<GaussianRational> {
        let rr = from.ratio.abs_sq();
        let mut term = from.scale.abs_sq() * &rr;
        let mut n = 1u32;
        while term >= threshold {
            let p = from.at(n);
            if into.contains(&p) {
                return Some(p);
            }
            term *= &rr;
            n += 1;
        }
        None
    };
    scan(f, g).or_else(|| scan(g, f))
}

/// A finite union of explicit points and geometric families, kept canonical:
/// points are sorted and deduplicated, no point lies on a family, no family
/// is (a tail of) another, and families absorb points that extend them.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SymbolicSet {
    points: Vec<GaussianRational>,
    families: Vec<GeomFamily>,
}

impl SymbolicSet {
    pub fn empty() -> Self {
        SymbolicSet::default()
    }

    pub fn from_points<I: IntoIterator<Item = GaussianRational>>(points: I) -> Self {
        let mut set = SymbolicSet { points: points.into_iter().collect(), families: Vec::new() };
        set.canonicalize();
        set
    }

    pub fn new<I, J>(points: I, families: J) -> Self
    where
        I: IntoIterator<Item = GaussianRational>,
        J: IntoIterator<Item = GeomFamily>,
    {
        let mut set = SymbolicSet {
            points: points.into_iter().collect(),
            families: families.into_iter().collect(),
        };
        set.canonicalize();
        set
    }

    pub fn points(&self) -> &[GaussianRational] {
        &self.points
    }

    pub fn families(&self) -> &[GeomFamily] {
        &self.families
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.families.is_empty()
    }

    pub fn has_families(&self) -> bool {
        !self.families.is_empty()
    }

    pub fn contains(&self, p: &GaussianRational) -> bool {
        self.points.binary_search(p).is_ok() || self.families.iter().any(|f| f.contains(p))
    }

    pub fn union(&self, other: &SymbolicSet) -> SymbolicSet {
        let mut out = self.clone();
        out.points.extend(other.points.iter().cloned());
        out.families.extend(other.families.iter().cloned());
        out.canonicalize();
        out
    }

    pub fn insert(&mut self, p: GaussianRational) {
        self.points.push(p);
        self.canonicalize();
    }

    /// Elementwise product `{s * t}`. Fails when both sets carry families:
    /// the products of two infinite sequences accumulate at points that are
    /// not representable in this form.
    pub fn product(&self, other: &SymbolicSet) -> Result<SymbolicSet, CalcError> {
        if self.has_families() && other.has_families() {
            return Err(CalcError::NotFinitelyRepresentable);
        }
        let mut out = SymbolicSet::default();
        for p in &self.points {
            for q in &other.points {
                out.points.push(p * q);
            }
        }
        let scale_in = |families: &[GeomFamily], pts: &[GaussianRational], out: &mut SymbolicSet| {
            for f in families {
                for v in pts {
                    if v.is_zero() {
                        out.points.push(GaussianRational::zero());
                    } else {
                        out.families.push(GeomFamily {
                            limit: v * &f.limit,
                            scale: v * &f.scale,
                            ratio: f.ratio.clone(),
                        });
                    }
                }
            }
        };
        scale_in(&self.families, &other.points, &mut out);
        scale_in(&other.families, &self.points, &mut out);
        out.canonicalize();
        Ok(out)
    }

    /// First element of `self` not contained in `other`, in canonical order;
    /// `None` means `self` is a subset of `other`. Errors when a family has
    /// no covering family in `other` yet all scanned points are members, so
    /// the answer cannot be certified within `depth`.
    pub fn subset_witness(
        &self,
        other: &SymbolicSet,
        depth: u32,
    ) -> Result<Option<GaussianRational>, CalcError> {
        for p in &self.points {
            if !other.contains(p) {
                return Ok(Some(p.clone()));
            }
        }
        for f in &self.families {
            let best_cover = other.families.iter().filter_map(|g| cover_from(f, g)).min();
            match best_cover {
                Some(n0) => {
                    for n in 1..n0 {
                        let p = f.at(n);
                        if !other.contains(&p) {
                            return Ok(Some(p));
                        }
                    }
                }
                None => {
                    for n in 1..=depth {
                        let p = f.at(n);
                        if !other.contains(&p) {
                            return Ok(Some(p));
                        }
                    }
                    return Err(CalcError::CollisionDepthExceeded(depth));
                }
            }
        }
        Ok(None)
    }

    pub fn is_subset(&self, other: &SymbolicSet, depth: u32) -> Result<bool, CalcError> {
        Ok(self.subset_witness(other, depth)?.is_none())
    }

    /// Set equality decided by mutual inclusion (exact on power-related
    /// families, depth-certified otherwise).
    pub fn set_eq(&self, other: &SymbolicSet, depth: u32) -> Result<bool, CalcError> {
        Ok(self.is_subset(other, depth)? && other.is_subset(self, depth)?)
    }

    /// Set difference `self \ other`. Family overlaps without a power
    /// relation are scanned up to `depth` and treated as disjoint beyond it.
    pub fn difference(&self, other: &SymbolicSet, depth: u32) -> SymbolicSet {
        let mut out = SymbolicSet::default();
        let mut loose_points: Vec<GaussianRational> = self.points.clone();
        let mut stack: Vec<(GeomFamily, u32)> =
            self.families.iter().map(|f| (f.clone(), depth)).collect();
        while let Some((f, budget)) = stack.pop() {
            // Tail covered by one of other's families?
            if let Some(n0) = other.families.iter().filter_map(|g| cover_from(&f, g)).min() {
                for n in 1..n0 {
                    loose_points.push(f.at(n));
                }
                continue;
            }
            // A family of `other` covering an index progression inside f?
            if let Some((j, t)) = other
                .families
                .iter()
                .filter_map(|g| {
                    if g.limit != f.limit {
                        return None;
                    }
                    let j = if g.ratio == f.ratio {
                        1
                    } else {
                        let j = ratio_power(&g.ratio, &f.ratio)?;
                        if j < 1 {
                            return None;
                        }
                        j
                    };
                    let quot = g.scale.checked_div(&f.scale).expect("scale nonzero");
                    let t = ratio_power(&quot, &f.ratio)?;
                    Some((j, t))
                })
                .next()
            {
                if j == 1 {
                    // g occupies all f-indices >= t+1: only a prefix survives.
                    let last = (t.max(0)) as u32;
                    for n in 1..=last {
                        loose_points.push(f.at(n));
                    }
                    continue;
                }
                for sub in f.residue_split(j as u32) {
                    stack.push((sub, budget));
                }
                continue;
            }
            // Explicit points of `other` sitting on f.
            if let Some(n) = other.points.iter().filter_map(|p| f.index_of(p)).min() {
                for m in 1..n {
                    loose_points.push(f.at(m));
                }
                stack.push((f.advance(n), budget.saturating_sub(n)));
                continue;
            }
            // Sporadic overlap with an unrelated family: depth-limited scan.
            let mut hit = None;
            for n in 1..=budget {
                let p = f.at(n);
                if other.families.iter().any(|g| g.contains(&p)) {
                    hit = Some(n);
                    break;
                }
            }
            match hit {
                Some(n) => {
                    for m in 1..n {
                        loose_points.push(f.at(m));
                    }
                    stack.push((f.advance(n), budget - n));
                }
                None => out.families.push(f),
            }
        }
        out.points = loose_points.into_iter().filter(|p| !other.contains(p)).collect();
        out.canonicalize();
        out
    }

    /// Restores the canonical form. Terminates because every step removes a
    /// point or a family (absorption trades a point for a larger family).
    fn canonicalize(&mut self) {
        loop {
            self.points.sort();
            self.points.dedup();
            self.families.sort();
            self.families.dedup();
            let mut changed = false;

            // Families fully or cofinally covered by other families.
            'family_scan: for i in 0..self.families.len() {
                for k in 0..self.families.len() {
                    if i == k {
                        continue;
                    }
                    if let Some(n0) = cover_from(&self.families[i], &self.families[k]) {
                        let f = self.families.remove(i);
                        for n in 1..n0 {
                            self.points.push(f.at(n));
                        }
                        changed = true;
                        break 'family_scan;
                    }
                }
            }
            if changed {
                continue;
            }

            // Points already described by a family.
            let families = std::mem::take(&mut self.families);
            let before = self.points.len();
            self.points.retain(|p| !families.iter().any(|f| f.contains(p)));
            self.families = families;
            if self.points.len() != before {
                continue;
            }

            // Points extending a family by one leading step.
            'absorb: for fi in 0..self.families.len() {
                let front = &self.families[fi].limit + &self.families[fi].scale;
                if let Ok(pi) = self.points.binary_search(&front) {
                    self.points.remove(pi);
                    self.families[fi] = self.families[fi].extend_front();
                    changed = true;
                    break 'absorb;
                }
            }
            if !changed {
                break;
            }
        }
    }
}

impl fmt::Display for SymbolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let mut parts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        parts.extend(self.families.iter().map(|fam| {
            format!("geom(limit={}, scale={}, ratio={})", fam.limit, fam.scale, fam.ratio)
        }));
        write!(f, "{{{}}}", parts.join(", "))
    }
}
