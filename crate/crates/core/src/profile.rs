//! Spectral profiles: the symbolic operator model.
//!
//! A profile describes the spectrum of a bounded operator as a finite set of
//! atoms: isolated points (poles of the resolvent, or isolated points that
//! are not poles) and geometric clusters whose sequence points are isolated
//! spectrum points converging to a limit. Ranks record whether the spectral
//! subspace at a point is finite-dimensional. Everything downstream (product
//! classification, B-Weyl and Weyl spectra, transfer checks) is derived from
//! this data.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CalcError;
use crate::scalar::GaussianRational;
use crate::sets::{GeomFamily, SymbolicSet};

/// Classification of an isolated spectrum point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PointClass {
    /// A pole of the resolvent: finite ascent and descent.
    #[serde(rename = "pole")]
    Pole,
    /// Isolated in the spectrum but not a pole (e.g. a quasi-nilpotent
    /// non-nilpotent part). Its spectral subspace is infinite-dimensional.
    #[serde(rename = "iso_nonpole")]
    IsoNonPole,
}

/// Dimension flag of a spectral subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rank {
    #[serde(rename = "fin")]
    Finite,
    #[serde(rename = "inf")]
    Infinite,
}

impl Rank {
    /// Infinite absorbs: a point is finite-rank only if every contribution is.
    pub fn combine(self, other: Rank) -> Rank {
        if self == Rank::Infinite || other == Rank::Infinite {
            Rank::Infinite
        } else {
            Rank::Finite
        }
    }
}

/// Classification of zero relative to a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroClass {
    #[serde(rename = "absent")]
    Absent,
    #[serde(rename = "pole")]
    Pole,
    #[serde(rename = "iso_nonpole")]
    IsoNonPole,
    #[serde(rename = "acc")]
    Acc,
}

/// One atom of a spectral profile.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum SpectralAtom {
    /// An isolated pole. `order` is optional metadata (ascent = descent);
    /// `rank` flags the dimension of the spectral subspace.
    Pole {
        point: GaussianRational,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        order: Option<u32>,
        rank: Rank,
    },
    /// An isolated spectrum point that is not a pole; always infinite rank.
    #[serde(rename = "iso_nonpole")]
    IsoNonPole { point: GaussianRational },
    /// The geometric cluster `{limit + scale * ratio^n : n >= 1}` together
    /// with its limit. Every sequence point is isolated with class
    /// `seq_class` and rank `seq_rank`; the limit is an accumulation point.
    Cluster {
        limit: GaussianRational,
        scale: GaussianRational,
        ratio: GaussianRational,
        seq_class: PointClass,
        seq_rank: Rank,
    },
}

impl SpectralAtom {
    pub fn pole(point: GaussianRational, order: Option<u32>, rank: Rank) -> Self {
        SpectralAtom::Pole { point, order, rank }
    }

    pub fn iso_non_pole(point: GaussianRational) -> Self {
        SpectralAtom::IsoNonPole { point }
    }

    pub fn cluster(
        limit: GaussianRational,
        scale: GaussianRational,
        ratio: GaussianRational,
        seq_class: PointClass,
        seq_rank: Rank,
    ) -> Self {
        SpectralAtom::Cluster { limit, scale, ratio, seq_class, seq_rank }
    }

    /// The point of an isolated atom.
    pub fn isolated_point(&self) -> Option<&GaussianRational> {
        match self {
            SpectralAtom::Pole { point, .. } | SpectralAtom::IsoNonPole { point } => Some(point),
            SpectralAtom::Cluster { .. } => None,
        }
    }

    /// Class of an isolated atom (`Pole`/`IsoNonPole`).
    pub fn isolated_class(&self) -> Option<PointClass> {
        match self {
            SpectralAtom::Pole { .. } => Some(PointClass::Pole),
            SpectralAtom::IsoNonPole { .. } => Some(PointClass::IsoNonPole),
            SpectralAtom::Cluster { .. } => None,
        }
    }

    /// Rank of an isolated atom; `IsoNonPole` is infinite by definition.
    pub fn isolated_rank(&self) -> Option<Rank> {
        match self {
            SpectralAtom::Pole { rank, .. } => Some(*rank),
            SpectralAtom::IsoNonPole { .. } => Some(Rank::Infinite),
            SpectralAtom::Cluster { .. } => None,
        }
    }

    /// The sequence-point family of a cluster atom.
    pub fn family(&self) -> Option<GeomFamily> {
        match self {
            SpectralAtom::Cluster { limit, scale, ratio, .. } => {
                Some(GeomFamily::new(limit.clone(), scale.clone(), ratio.clone()))
            }
            _ => None,
        }
    }

    /// True when the atom carries an infinite-dimensional part.
    fn is_infinite_dimensional(&self) -> bool {
        match self {
            SpectralAtom::Pole { rank, .. } => *rank == Rank::Infinite,
            SpectralAtom::IsoNonPole { .. } => true,
            // A cluster has infinitely many points; its total subspace is
            // infinite-dimensional even when each point has finite rank.
            SpectralAtom::Cluster { .. } => true,
        }
    }
}

impl fmt::Display for SpectralAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralAtom::Pole { point, order, rank } => {
                write!(f, "pole({point}")?;
                if let Some(o) = order {
                    write!(f, ", ord={o}")?;
                }
                write!(f, ", rank={})", rank_str(*rank))
            }
            SpectralAtom::IsoNonPole { point } => write!(f, "iso_nonpole({point})"),
            SpectralAtom::Cluster { limit, scale, ratio, seq_class, seq_rank } => write!(
                f,
                "cluster(limit={limit}, scale={scale}, ratio={ratio}, class={}, rank={})",
                class_str(*seq_class),
                rank_str(*seq_rank)
            ),
        }
    }
}

fn rank_str(r: Rank) -> &'static str {
    match r {
        Rank::Finite => "fin",
        Rank::Infinite => "inf",
    }
}

fn class_str(c: PointClass) -> &'static str {
    match c {
        PointClass::Pole => "pole",
        PointClass::IsoNonPole => "iso_nonpole",
    }
}

/// A reason a profile is not well-formed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyProfile,
    ClusterScaleZero { index: usize },
    ClusterRatioOutOfRange { index: usize },
    ZeroPoleOrder { index: usize },
    IsoNonPoleClusterFiniteRank { index: usize },
    NoInfiniteDimensionalAtom,
    DuplicatePoint { point: GaussianRational },
    LimitCollidesIsolated { point: GaussianRational },
    SequenceCollidesIsolated { point: GaussianRational },
    SequenceCollidesLimit { point: GaussianRational },
    SequenceCollision { point: GaussianRational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyProfile => write!(f, "profile has no atoms"),
            Violation::ClusterScaleZero { index } => {
                write!(f, "cluster atom {index} has zero scale")
            }
            Violation::ClusterRatioOutOfRange { index } => {
                write!(f, "cluster atom {index} needs 0 < |ratio|^2 < 1")
            }
            Violation::ZeroPoleOrder { index } => {
                write!(f, "pole atom {index} has order 0; orders start at 1")
            }
            Violation::IsoNonPoleClusterFiniteRank { index } => write!(
                f,
                "cluster atom {index} has iso_nonpole sequence class but finite rank"
            ),
            Violation::NoInfiniteDimensionalAtom => write!(
                f,
                "profile describes a finite-dimensional operator: no cluster, iso_nonpole, or infinite-rank pole"
            ),
            Violation::DuplicatePoint { point } => {
                write!(f, "point {point} is described twice")
            }
            Violation::LimitCollidesIsolated { point } => {
                write!(f, "cluster limit {point} collides with an isolated point")
            }
            Violation::SequenceCollidesIsolated { point } => {
                write!(f, "cluster sequence passes through isolated point {point}")
            }
            Violation::SequenceCollidesLimit { point } => {
                write!(f, "cluster sequence passes through cluster limit {point}")
            }
            Violation::SequenceCollision { point } => {
                write!(f, "two cluster sequences share the point {point}")
            }
        }
    }
}

/// Derived spectral sets of a profile, all exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedSets {
    /// The full spectrum: isolated points, cluster sequences, cluster limits.
    pub sigma: SymbolicSet,
    /// Isolated points of the spectrum.
    pub isolated: SymbolicSet,
    /// Accumulation points (cluster limits).
    pub acc: SymbolicSet,
    /// Poles of the resolvent.
    pub poles: SymbolicSet,
    /// Poles of finite rank.
    pub finite_rank_poles: SymbolicSet,
    /// Isolated points that are not poles.
    pub iso_non_poles: SymbolicSet,
    /// Drazin spectrum: points where no Drazin inverse exists locally.
    pub drazin_spectrum: SymbolicSet,
    /// B-Weyl spectrum; on this model class it equals the Drazin spectrum.
    pub bweyl_spectrum: SymbolicSet,
    /// Weyl spectrum: the spectrum minus its finite-rank poles.
    pub weyl_spectrum: SymbolicSet,
}

/// Global predicates of an operator read off its profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OperatorFlags {
    pub nilpotent: bool,
    pub quasinilpotent: bool,
    pub algebraic: bool,
    pub drazin_invertible: bool,
    pub zero_in_spectrum: bool,
    pub zero_class: ZeroClass,
}

/// A validated spectral profile with canonically ordered atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SpectralProfile {
    atoms: Vec<SpectralAtom>,
}

impl SpectralProfile {
    /// Validates and canonically orders the atoms. Sequence collisions
    /// between clusters are decided exactly whenever the ratios are
    /// power-related or the limits differ; otherwise they are scanned up to
    /// `depth`.
    pub fn new(atoms: Vec<SpectralAtom>, depth: u32) -> Result<Self, CalcError> {
        let violations = validate_atoms(&atoms, depth);
        if !violations.is_empty() {
            return Err(CalcError::InvalidProfile(violations));
        }
        Ok(Self::from_atoms_unchecked(atoms))
    }

    /// Builds a profile from atoms already known to satisfy the invariants
    /// (used by the product constructors, whose merge establishes them).
    pub(crate) fn from_atoms_unchecked(mut atoms: Vec<SpectralAtom>) -> Self {
        atoms.sort();
        SpectralProfile { atoms }
    }

    pub fn atoms(&self) -> &[SpectralAtom] {
        &self.atoms
    }

    pub fn has_clusters(&self) -> bool {
        self.atoms.iter().any(|a| matches!(a, SpectralAtom::Cluster { .. }))
    }

    pub fn clusters(&self) -> impl Iterator<Item = &SpectralAtom> {
        self.atoms.iter().filter(|a| matches!(a, SpectralAtom::Cluster { .. }))
    }

    pub fn isolated_atoms(&self) -> impl Iterator<Item = &SpectralAtom> {
        self.atoms.iter().filter(|a| a.isolated_point().is_some())
    }

    /// How zero relates to this spectrum.
    pub fn zero_class(&self) -> ZeroClass {
        let zero = GaussianRational::zero();
        for atom in &self.atoms {
            if let SpectralAtom::Cluster { limit, .. } = atom {
                if limit.is_zero() {
                    return ZeroClass::Acc;
                }
            }
        }
        for atom in &self.atoms {
            match atom {
                SpectralAtom::Pole { point, .. } if point.is_zero() => return ZeroClass::Pole,
                SpectralAtom::IsoNonPole { point } if point.is_zero() => {
                    return ZeroClass::IsoNonPole
                }
                SpectralAtom::Cluster { seq_class, .. }
                    if atom.family().expect("cluster").contains(&zero) =>
                {
                    return match seq_class {
                        PointClass::Pole => ZeroClass::Pole,
                        PointClass::IsoNonPole => ZeroClass::IsoNonPole,
                    };
                }
                _ => {}
            }
        }
        ZeroClass::Absent
    }

    /// Rank of zero when it is an isolated spectrum point.
    pub fn zero_rank(&self) -> Option<Rank> {
        let zero = GaussianRational::zero();
        for atom in &self.atoms {
            match atom {
                SpectralAtom::Pole { point, rank, .. } if point.is_zero() => return Some(*rank),
                SpectralAtom::IsoNonPole { point } if point.is_zero() => {
                    return Some(Rank::Infinite)
                }
                SpectralAtom::Cluster { seq_rank, .. }
                    if atom.family().expect("cluster").contains(&zero) =>
                {
                    return Some(*seq_rank);
                }
                _ => {}
            }
        }
        None
    }

    pub fn flags(&self) -> OperatorFlags {
        let zero_class = self.zero_class();
        let single_zero_isolated = self.atoms.len() == 1
            && self.atoms[0]
                .isolated_point()
                .map(|p| p.is_zero())
                .unwrap_or(false);
        OperatorFlags {
            nilpotent: single_zero_isolated
                && matches!(self.atoms[0], SpectralAtom::Pole { .. }),
            quasinilpotent: single_zero_isolated,
            algebraic: self.atoms.iter().all(|a| matches!(a, SpectralAtom::Pole { .. })),
            drazin_invertible: matches!(zero_class, ZeroClass::Absent | ZeroClass::Pole),
            zero_in_spectrum: zero_class != ZeroClass::Absent,
            zero_class,
        }
    }

    /// Computes every derived spectral set.
    pub fn derived_sets(&self, depth: u32) -> DerivedSets {
        let mut sigma_pts = Vec::new();
        let mut sigma_fams = Vec::new();
        let mut acc_pts = Vec::new();
        let mut pole_pts = Vec::new();
        let mut pole_fams = Vec::new();
        let mut pi0_pts = Vec::new();
        let mut pi0_fams = Vec::new();
        let mut inp_pts = Vec::new();
        let mut inp_fams = Vec::new();
        for atom in &self.atoms {
            match atom {
                SpectralAtom::Pole { point, rank, .. } => {
                    sigma_pts.push(point.clone());
                    pole_pts.push(point.clone());
                    if *rank == Rank::Finite {
                        pi0_pts.push(point.clone());
                    }
                }
                SpectralAtom::IsoNonPole { point } => {
                    sigma_pts.push(point.clone());
                    inp_pts.push(point.clone());
                }
                SpectralAtom::Cluster { limit, seq_class, seq_rank, .. } => {
                    let fam = atom.family().expect("cluster");
                    sigma_pts.push(limit.clone());
                    acc_pts.push(limit.clone());
                    sigma_fams.push(fam.clone());
                    match seq_class {
                        PointClass::Pole => {
                            pole_fams.push(fam.clone());
                            if *seq_rank == Rank::Finite {
                                pi0_fams.push(fam);
                            }
                        }
                        PointClass::IsoNonPole => inp_fams.push(fam),
                    }
                }
            }
        }
        let sigma = SymbolicSet::new(sigma_pts, sigma_fams);
        let acc = SymbolicSet::from_points(acc_pts);
        let poles = SymbolicSet::new(pole_pts, pole_fams);
        let finite_rank_poles = SymbolicSet::new(pi0_pts, pi0_fams);
        let iso_non_poles = SymbolicSet::new(inp_pts, inp_fams);
        let isolated = poles.union(&iso_non_poles);
        let drazin_spectrum = acc.union(&iso_non_poles);
        let bweyl_spectrum = drazin_spectrum.clone();
        let weyl_spectrum = sigma.difference(&finite_rank_poles, depth);
        DerivedSets {
            sigma,
            isolated,
            acc,
            poles,
            finite_rank_poles,
            iso_non_poles,
            drazin_spectrum,
            bweyl_spectrum,
            weyl_spectrum,
        }
    }
}

impl fmt::Display for SpectralProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Checks every profile invariant, reporting all violations found.
pub fn validate_atoms(atoms: &[SpectralAtom], depth: u32) -> Vec<Violation> {
    let mut out = Vec::new();
    if atoms.is_empty() {
        out.push(Violation::EmptyProfile);
        return out;
    }
    for (index, atom) in atoms.iter().enumerate() {
        match atom {
            SpectralAtom::Pole { order: Some(0), .. } => {
                out.push(Violation::ZeroPoleOrder { index });
            }
            SpectralAtom::Cluster { scale, ratio, seq_class, seq_rank, .. } => {
                if scale.is_zero() {
                    out.push(Violation::ClusterScaleZero { index });
                }
                if ratio.is_zero() || !ratio.abs_sq_lt_one() {
                    out.push(Violation::ClusterRatioOutOfRange { index });
                }
                if *seq_class == PointClass::IsoNonPole && *seq_rank == Rank::Finite {
                    out.push(Violation::IsoNonPoleClusterFiniteRank { index });
                }
            }
            _ => {}
        }
    }
    if !out.is_empty() {
        // Malformed cluster parameters make the collision scans below
        // meaningless; report the structural problems alone.
        return out;
    }
    if !atoms.iter().any(|a| a.is_infinite_dimensional()) {
        out.push(Violation::NoInfiniteDimensionalAtom);
    }

    let iso_points: Vec<&GaussianRational> =
        atoms.iter().filter_map(|a| a.isolated_point()).collect();
    for (i, p) in iso_points.iter().enumerate() {
        if iso_points[..i].contains(p) {
            out.push(Violation::DuplicatePoint { point: (*p).clone() });
        }
    }
    let families: Vec<GeomFamily> = atoms.iter().filter_map(|a| a.family()).collect();
    for fam in &families {
        for p in &iso_points {
            if fam.limit == **p {
                out.push(Violation::LimitCollidesIsolated { point: (*p).clone() });
            }
            if fam.contains(p) {
                out.push(Violation::SequenceCollidesIsolated { point: (*p).clone() });
            }
        }
    }
    for (i, f) in families.iter().enumerate() {
        for (k, g) in families.iter().enumerate() {
            if i == k {
                continue;
            }
            if f.contains(&g.limit) {
                out.push(Violation::SequenceCollidesLimit { point: g.limit.clone() });
            }
            if i < k {
                if let Some(p) = crate::sets::sequences_intersect(f, g, depth) {
                    out.push(Violation::SequenceCollision { point: p });
                }
            }
        }
    }
    out
}
