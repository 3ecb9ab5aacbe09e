//! Exact finite-dimensional lab: Gaussian-rational matrices realize the pole
//! and nilpotent fragments of the calculus. Provides Kronecker and two-sided
//! multiplication representations, rank chains for ascent and descent, and
//! Drazin inverses checked against their defining identities, all over the
//! exact scalar field.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::product::Mode;
use crate::scalar::GaussianRational;

/// Largest allowed factor dimension; products then stay within
/// `DIM_CAP * DIM_CAP` rows, the limit of comfortable exact elimination.
pub const DIM_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix must be square")]
    NonSquare,
    #[error("operand shapes {0}x{1} and {2}x{3} do not match")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("result would exceed the {DIM_CAP}x{DIM_CAP} factor dimension cap")]
    SizeOverflow,
    #[error("matrix is not triangular")]
    NotTriangular,
    #[error("matrix is singular")]
    Singular,
    #[error("computed inverse failed its defining identities")]
    VerificationFailed,
    #[error("bad matrix text: {0}")]
    Parse(String),
}

/// A dense matrix of Gaussian rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

fn one() -> GaussianRational {
    GaussianRational::from_int(1)
}

impl ExactMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        entries: Vec<GaussianRational>,
    ) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Parse("dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::Parse(format!(
                "{} entries given, {}x{} needs {}",
                entries.len(),
                rows,
                cols,
                rows * cols
            )));
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, one());
        }
        m
    }

    /// The size x size Jordan block with eigenvalue lambda.
    pub fn jordan_block(lambda: &GaussianRational, size: usize) -> Self {
        let mut m = ExactMatrix::zeros(size, size);
        for i in 0..size {
            m.set(i, i, lambda.clone());
            if i + 1 < size {
                m.set(i, i + 1, one());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch(self.rows, self.cols, rhs.rows, rhs.cols));
        }
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + &(a * b);
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<ExactMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NonSquare);
        }
        let mut out = ExactMatrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// self - lambda * I.
    pub fn shift(&self, lambda: &GaussianRational) -> Result<ExactMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NonSquare);
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i) - lambda;
            out.set(i, i, v);
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns the pivot column indices.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.entries.swap(p * self.cols + j, row * self.cols + j);
            }
            let inv = one().checked_div(self.get(row, col)).expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..self.cols {
                    let v = self.get(r, j) - &(&factor * self.get(row, j));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Exact rank over the Gaussian-rational field.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref_in_place().len()
    }

    pub fn inverse(&self) -> Result<ExactMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NonSquare);
        }
        let n = self.rows;
        let mut aug = ExactMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() != n || pivots.iter().enumerate().any(|(k, &c)| k != c) {
            return Err(MatrixError::Singular);
        }
        let mut out = ExactMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// A basis of the column space: the original columns at pivot positions.
    fn column_space_basis(&self) -> Vec<Vec<GaussianRational>> {
        let mut work = self.clone();
        let pivots = work.rref_in_place();
        pivots
            .iter()
            .map(|&c| (0..self.rows).map(|i| self.get(i, c).clone()).collect())
            .collect()
    }

    /// A basis of the null space read off the reduced echelon form.
    fn null_space_basis(&self) -> Vec<Vec<GaussianRational>> {
        let mut work = self.clone();
        let pivots = work.rref_in_place();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[free] = one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -work.get(k, free);
            }
            basis.push(v);
        }
        basis
    }

    fn from_columns(
        rows: usize,
        columns: Vec<Vec<GaussianRational>>,
    ) -> Result<ExactMatrix, MatrixError> {
        let cols = columns.len();
        let mut out = ExactMatrix::zeros(rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            if col.len() != rows {
                return Err(MatrixError::ShapeMismatch(col.len(), 1, rows, 1));
            }
            for (i, v) in col.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<GaussianRational> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// The Kronecker product in standard block layout.
pub fn kron(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
    if a.rows * b.rows > DIM_CAP * DIM_CAP || a.cols * b.cols > DIM_CAP * DIM_CAP {
        return Err(MatrixError::SizeOverflow);
    }
    let mut out = ExactMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i1 in 0..a.rows {
        for j1 in 0..a.cols {
            let v = a.get(i1, j1);
            if v.is_zero() {
                continue;
            }
            for i2 in 0..b.rows {
                for j2 in 0..b.cols {
                    out.set(i1 * b.rows + i2, j1 * b.cols + j2, v * b.get(i2, j2));
                }
            }
        }
    }
    Ok(out)
}

/// The matrix of U -> A U B under column-stacking vectorization, namely
/// transpose(B) kron A. The vec convention stacks columns left to right.
pub fn elementary_rep(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
    if !a.is_square() || !b.is_square() {
        return Err(MatrixError::NonSquare);
    }
    kron(&b.transpose(), a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AscentDescent {
    pub ascent: u32,
    pub descent: u32,
    /// The common value; 0 exactly when lambda is not an eigenvalue.
    pub pole_order: u32,
}

/// Rank chain of (m - lambda I)^k together with the rank it stabilizes at.
/// In finite dimensions the kernel and range chains stabilize at the same
/// exponent as the rank chain, so ascent and descent coincide.
fn rank_chain(
    m: &ExactMatrix,
    lambda: &GaussianRational,
) -> Result<(u32, usize), MatrixError> {
    let shifted = m.shift(lambda)?;
    let mut power = shifted.clone();
    let mut prev_rank = m.rows;
    let mut k = 0u32;
    loop {
        let r = power.rank();
        if r == prev_rank {
            return Ok((k, r));
        }
        prev_rank = r;
        k += 1;
        power = power.mul(&shifted)?;
    }
}

/// Ascent, descent, and pole order of lambda for m via the rank chain.
pub fn ascent_descent(
    m: &ExactMatrix,
    lambda: &GaussianRational,
) -> Result<AscentDescent, MatrixError> {
    let (k, _) = rank_chain(m, lambda)?;
    Ok(AscentDescent { ascent: k, descent: k, pole_order: k })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drazin {
    pub d: ExactMatrix,
    pub index: u32,
}

/// The Drazin inverse via core-nilpotent splitting. The three defining
/// identities (m^index = m^index d m, d m d = d, m d = d m) are verified
/// exactly before returning.
pub fn drazin_inverse(m: &ExactMatrix) -> Result<Drazin, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NonSquare);
    }
    let n = m.rows;
    let index = ascent_descent(m, &GaussianRational::zero())?.pole_order;
    let d = if index == 0 {
        m.inverse()?
    } else {
        let mk = m.pow(index)?;
        let mut columns = mk.column_space_basis();
        let r = columns.len();
        columns.extend(mk.null_space_basis());
        if columns.len() != n {
            return Err(MatrixError::VerificationFailed);
        }
        let p = ExactMatrix::from_columns(n, columns)?;
        let p_inv = p.inverse().map_err(|_| MatrixError::VerificationFailed)?;
        // In the adapted basis m is block diagonal: an invertible core on the
        // range part, a nilpotent on the kernel part. Invert the core, zero
        // the rest. A nilpotent m has an empty core and a zero inverse.
        let mut block = ExactMatrix::zeros(n, n);
        if r > 0 {
            let in_basis = p_inv.mul(m)?.mul(&p)?;
            let mut core = ExactMatrix::zeros(r, r);
            for i in 0..r {
                for j in 0..r {
                    core.set(i, j, in_basis.get(i, j).clone());
                }
            }
            let core_inv = core.inverse().map_err(|_| MatrixError::VerificationFailed)?;
            for i in 0..r {
                for j in 0..r {
                    block.set(i, j, core_inv.get(i, j).clone());
                }
            }
        }
        p.mul(&block)?.mul(&p_inv)?
    };
    let ad = m.mul(&d)?;
    let da = d.mul(m)?;
    let mk = m.pow(index)?;
    if ad != da || d.mul(&ad)? != d || mk.mul(&da)? != mk {
        return Err(MatrixError::VerificationFailed);
    }
    Ok(Drazin { d, index })
}

/// Diagonal multiset of a triangular matrix, in diagonal order.
pub fn triangular_spectrum(m: &ExactMatrix) -> Result<Vec<GaussianRational>, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NonSquare);
    }
    if m.is_upper_triangular() || m.is_lower_triangular() {
        Ok(m.diagonal())
    } else {
        Err(MatrixError::NotTriangular)
    }
}

/// Builds p t p^-1 for a declared conjugation of a triangular t and returns
/// it with its spectrum (the diagonal of t; similarity preserves spectra).
pub fn conjugated_spectrum(
    p: &ExactMatrix,
    t: &ExactMatrix,
) -> Result<(ExactMatrix, Vec<GaussianRational>), MatrixError> {
    let spectrum = triangular_spectrum(t)?;
    if !p.is_square() || p.rows != t.rows {
        return Err(MatrixError::ShapeMismatch(p.rows, p.cols, t.rows, t.cols));
    }
    let m = p.mul(t)?.mul(&p.inverse()?)?;
    Ok((m, spectrum))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoleAt {
    pub point: GaussianRational,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Outcome of the finite-dimensional validation of one matrix pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixPairReport {
    pub mode: Mode,
    pub product_dim: usize,
    /// Distinct product eigenvalues with their pole orders in the
    /// representation selected by `mode`.
    pub spectrum: Vec<PoleAt>,
    pub checks: Vec<PairCheck>,
    pub all_passed: bool,
}

/// Checks one representation against the expected eigenvalue set: every
/// expected point must be an eigenvalue, and the generalized eigenspace
/// dimensions must exhaust the whole space (so nothing else is in the
/// spectrum). Returns per-point pole orders.
fn check_spectrum(
    rep: &ExactMatrix,
    expected: &[GaussianRational],
) -> Result<(Vec<PoleAt>, bool, Option<String>), MatrixError> {
    let dim = rep.rows;
    let mut total_multiplicity = 0usize;
    let mut poles = Vec::new();
    let mut witness = None;
    for lambda in expected {
        let (order, stable_rank) = rank_chain(rep, lambda)?;
        if order == 0 && witness.is_none() {
            witness = Some(format!("{lambda} expected in the spectrum but is not"));
        }
        total_multiplicity += dim - stable_rank;
        poles.push(PoleAt { point: lambda.clone(), order });
    }
    if witness.is_none() && total_multiplicity != dim {
        witness = Some(format!(
            "generalized eigenspaces cover {total_multiplicity} of {dim} dimensions; \
             the spectrum has unexpected points"
        ));
    }
    let passed = witness.is_none();
    Ok((poles, passed, witness))
}

/// Validates a pair of triangular matrices against the product theory: the
/// spectra of both representations are exactly the pairwise products of the
/// factor eigenvalues, every spectral point is a pole with ascent equal to
/// descent, and the Drazin identities hold for the factors and the product.
pub fn validate_matrix_pair(
    a: &ExactMatrix,
    b: &ExactMatrix,
    mode: Mode,
) -> Result<MatrixPairReport, MatrixError> {
    if a.rows > DIM_CAP || b.rows > DIM_CAP {
        return Err(MatrixError::SizeOverflow);
    }
    let sa = triangular_spectrum(a)?;
    let sb = triangular_spectrum(b)?;
    let mut expected: Vec<GaussianRational> = Vec::new();
    for alpha in &sa {
        for beta in &sb {
            let p = alpha * beta;
            if !expected.contains(&p) {
                expected.push(p);
            }
        }
    }
    expected.sort();

    let kr = kron(a, b)?;
    let el = elementary_rep(a, b)?;
    let (primary, other) = match mode {
        Mode::Tensor => (&kr, &el),
        Mode::Elementary => (&el, &kr),
    };

    let mut checks = Vec::new();
    let (poles, spectrum_ok, spectrum_witness) = check_spectrum(primary, &expected)?;
    checks.push(PairCheck {
        name: "pairwise_spectrum".into(),
        passed: spectrum_ok,
        witness: spectrum_witness,
    });

    let not_pole = poles.iter().find(|p| p.order == 0);
    checks.push(PairCheck {
        name: "all_points_are_poles".into(),
        passed: not_pole.is_none(),
        witness: not_pole.map(|p| format!("{} has pole order 0", p.point)),
    });

    let mut asc_witness = None;
    for p in &poles {
        let ad = ascent_descent(primary, &p.point)?;
        if ad.ascent != ad.descent {
            asc_witness = Some(format!(
                "ascent {} != descent {} at {}",
                ad.ascent, ad.descent, p.point
            ));
            break;
        }
    }
    checks.push(PairCheck {
        name: "ascent_equals_descent".into(),
        passed: asc_witness.is_none(),
        witness: asc_witness,
    });

    let mut drazin_witness = None;
    for (label, m) in [("left factor", a), ("right factor", b), ("product", primary)] {
        if let Err(e) = drazin_inverse(m) {
            drazin_witness = Some(format!("{label}: {e}"));
            break;
        }
    }
    checks.push(PairCheck {
        name: "drazin_identities".into(),
        passed: drazin_witness.is_none(),
        witness: drazin_witness,
    });

    let (_, other_ok, other_witness) = check_spectrum(other, &expected)?;
    checks.push(PairCheck {
        name: "modes_agree".into(),
        passed: other_ok,
        witness: other_witness.map(|w| format!("other representation: {w}")),
    });

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(MatrixPairReport {
        mode,
        product_dim: primary.rows,
        spectrum: poles,
        checks,
        all_passed,
    })
}

/// Parses the on-disk format: a `rows cols` header line, then row-major
/// whitespace-separated entries in the canonical scalar syntax.
pub fn parse_matrix(text: &str) -> Result<ExactMatrix, MatrixError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| MatrixError::Parse("empty input".into()))?;
    let mut parts = header.split_whitespace();
    let rows: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| MatrixError::Parse("header must be `rows cols`".into()))?;
    let cols: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| MatrixError::Parse("header must be `rows cols`".into()))?;
    if parts.next().is_some() {
        return Err(MatrixError::Parse("header must be exactly `rows cols`".into()));
    }
    let mut entries = Vec::new();
    for token in lines.flat_map(|l| l.split_whitespace()) {
        let v = GaussianRational::from_str(token)
            .map_err(|e| MatrixError::Parse(format!("entry {}: {e}", entries.len() + 1)))?;
        entries.push(v);
    }
    ExactMatrix::new(rows, cols, entries)
}

/// Renders a matrix in the same format `parse_matrix` accepts.
pub fn render_matrix(m: &ExactMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows, m.cols);
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols).map(|j| m.get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn m(rows: usize, cols: usize, vals: &[i64]) -> ExactMatrix {
        ExactMatrix::new(rows, cols, vals.iter().map(|&v| int(v)).collect()).unwrap()
    }

    #[test]
    fn kron_follows_the_block_layout() {
        let n = m(2, 2, &[0, 1, 0, 0]);
        let two = m(1, 1, &[2]);
        assert_eq!(kron(&n, &two).unwrap(), m(2, 2, &[0, 2, 0, 0]));

        let b = m(2, 2, &[1, 2, 3, 4]);
        let id2 = ExactMatrix::identity(2);
        let k = kron(&id2, &b).unwrap();
        assert_eq!(
            k,
            m(4, 4, &[1, 2, 0, 0, 3, 4, 0, 0, 0, 0, 1, 2, 0, 0, 3, 4])
        );

        let j = ExactMatrix::jordan_block(&int(1), 2);
        let jj = kron(&j, &j).unwrap();
        let spectrum = triangular_spectrum(&jj).unwrap();
        assert_eq!(spectrum, vec![int(1); 4]);

        let big = ExactMatrix::identity(13);
        assert_eq!(kron(&big, &big), Err(MatrixError::SizeOverflow));
    }

    #[test]
    fn elementary_representation_matches_direct_evaluation() {
        assert_eq!(
            elementary_rep(&m(1, 1, &[2]), &m(1, 1, &[3])).unwrap(),
            m(1, 1, &[6])
        );
        let id2 = ExactMatrix::identity(2);
        assert_eq!(elementary_rep(&id2, &id2).unwrap(), ExactMatrix::identity(4));
        let n = m(2, 2, &[0, 1, 0, 0]);
        assert_eq!(elementary_rep(&n, &m(1, 1, &[1])).unwrap(), n);

        // Column-stacked vec convention: column j*rows+i of the
        // representation is vec(A E_ij B) for the matrix unit E_ij.
        let a = m(2, 2, &[1, 2, 3, 4]);
        let b = m(2, 2, &[5, 6, 7, 8]);
        let rep = elementary_rep(&a, &b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut unit = ExactMatrix::zeros(2, 2);
                unit.set(i, j, int(1));
                let image = a.mul(&unit).unwrap().mul(&b).unwrap();
                for (row, col) in [(0usize, 0usize), (1, 0), (0, 1), (1, 1)] {
                    let vec_index = col * 2 + row;
                    assert_eq!(
                        rep.get(vec_index, j * 2 + i),
                        image.get(row, col),
                        "vec convention broken at unit ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn rank_is_exact() {
        assert_eq!(ExactMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(ExactMatrix::identity(4).rank(), 4);
        assert_eq!(m(2, 2, &[0, 1, 0, 0]).rank(), 1);
        // A rank-1 matrix with fractions surviving elimination exactly.
        let half = GaussianRational::from_parts(1, 2, 0, 1);
        let mut f = ExactMatrix::zeros(2, 2);
        f.set(0, 0, half.clone());
        f.set(0, 1, int(1));
        f.set(1, 0, GaussianRational::from_parts(1, 4, 0, 1));
        f.set(1, 1, half);
        assert_eq!(f.rank(), 1);
    }

    #[test]
    fn rank_chains_give_ascent_descent_and_pole_order() {
        // J2(0) + [1]: ranks of powers are 2, 1, 1.
        let mut j = ExactMatrix::zeros(3, 3);
        j.set(0, 1, int(1));
        j.set(2, 2, int(1));
        let ad = ascent_descent(&j, &GaussianRational::zero()).unwrap();
        assert_eq!((ad.ascent, ad.descent, ad.pole_order), (2, 2, 2));

        let ad = ascent_descent(&ExactMatrix::identity(3), &int(1)).unwrap();
        assert_eq!((ad.ascent, ad.descent, ad.pole_order), (1, 1, 1));

        // Off the spectrum the order is 0.
        let ad = ascent_descent(&ExactMatrix::identity(3), &int(2)).unwrap();
        assert_eq!(ad.pole_order, 0);

        // J2(1) kron J2(1) has Jordan structure J3 + J1 at 1: order 3.
        let j2 = ExactMatrix::jordan_block(&int(1), 2);
        let jj = kron(&j2, &j2).unwrap();
        let ad = ascent_descent(&jj, &int(1)).unwrap();
        assert_eq!(ad.pole_order, 3);
    }

    #[test]
    fn drazin_inverse_satisfies_the_identities() {
        // Nilpotent: inverse is zero, index is the nilpotency order.
        let n = m(2, 2, &[0, 1, 0, 0]);
        let dz = drazin_inverse(&n).unwrap();
        assert_eq!(dz.d, ExactMatrix::zeros(2, 2));
        assert_eq!(dz.index, 2);

        // Invertible: the ordinary inverse, index 0.
        let inv = m(2, 2, &[1, 1, 0, 1]);
        let dz = drazin_inverse(&inv).unwrap();
        assert_eq!(dz.index, 0);
        assert_eq!(dz.d.mul(&inv).unwrap(), ExactMatrix::identity(2));

        // Idempotent: its own Drazin inverse.
        let e = m(2, 2, &[1, 0, 0, 0]);
        let dz = drazin_inverse(&e).unwrap();
        assert_eq!(dz.d, e);
        assert_eq!(dz.index, 1);

        // A mixed core-nilpotent example: identities checked internally.
        let mixed = m(3, 3, &[2, 1, 0, 0, 0, 1, 0, 0, 0]);
        let dz = drazin_inverse(&mixed).unwrap();
        let da = dz.d.mul(&mixed).unwrap();
        assert_eq!(mixed.mul(&dz.d).unwrap(), da);
    }

    #[test]
    fn spectra_come_only_from_triangular_or_declared_forms() {
        let d = m(3, 3, &[1, 0, 0, 0, 2, 0, 0, 0, 2]);
        assert_eq!(triangular_spectrum(&d).unwrap(), vec![int(1), int(2), int(2)]);

        let j = ExactMatrix::jordan_block(&int(5), 3);
        assert_eq!(triangular_spectrum(&j).unwrap(), vec![int(5); 3]);

        let full = m(2, 2, &[1, 1, 1, 1]);
        assert_eq!(triangular_spectrum(&full), Err(MatrixError::NotTriangular));

        let p = m(2, 2, &[1, 1, 0, 1]);
        let t = m(2, 2, &[2, 0, 0, 3]);
        let (conj, spectrum) = conjugated_spectrum(&p, &t).unwrap();
        assert_eq!(spectrum, vec![int(2), int(3)]);
        assert_eq!(conj, m(2, 2, &[2, 1, 0, 3]));
    }

    #[test]
    fn pair_validation_passes_on_the_standard_examples() {
        let report = validate_matrix_pair(
            &ExactMatrix::jordan_block(&GaussianRational::zero(), 2),
            &m(1, 1, &[2]),
            Mode::Tensor,
        )
        .unwrap();
        assert!(report.all_passed, "{:?}", report.checks);
        assert_eq!(report.spectrum, vec![PoleAt { point: int(0), order: 2 }]);

        let report = validate_matrix_pair(
            &m(2, 2, &[1, 0, 0, 2]),
            &m(2, 2, &[3, 0, 0, 5]),
            Mode::Elementary,
        )
        .unwrap();
        assert!(report.all_passed);
        let points: Vec<_> = report.spectrum.iter().map(|p| p.point.clone()).collect();
        assert_eq!(points, vec![int(3), int(5), int(6), int(10)]);

        let j2 = ExactMatrix::jordan_block(&int(1), 2);
        for mode in [Mode::Tensor, Mode::Elementary] {
            let report = validate_matrix_pair(&j2, &j2, mode).unwrap();
            assert!(report.all_passed);
            assert_eq!(report.spectrum, vec![PoleAt { point: int(1), order: 3 }]);
        }
    }

    #[test]
    fn pole_orders_of_products_respect_the_additive_bound() {
        for (oa, ob) in [(1u32, 1u32), (1, 2), (2, 2), (3, 2)] {
            let a = ExactMatrix::jordan_block(&int(2), oa as usize);
            let b = ExactMatrix::jordan_block(&int(3), ob as usize);
            let prod = kron(&a, &b).unwrap();
            let ad = ascent_descent(&prod, &int(6)).unwrap();
            assert!(ad.pole_order < oa + ob);
            assert!(ad.pole_order >= oa.max(ob));
        }
    }

    #[test]
    fn matrix_text_round_trips() {
        let text = "2 2\n0 1/2\n-3+2i 1\n";
        let parsed = parse_matrix(text).unwrap();
        assert_eq!(parsed.get(0, 1), &GaussianRational::from_parts(1, 2, 0, 1));
        assert_eq!(parsed.get(1, 0), &GaussianRational::from_parts(-3, 1, 2, 1));
        assert_eq!(render_matrix(&parsed), text);

        assert!(matches!(parse_matrix(""), Err(MatrixError::Parse(_))));
        assert!(matches!(parse_matrix("2 2\n1 2 3"), Err(MatrixError::Parse(_))));
        assert!(matches!(parse_matrix("2 bad\n1 2 3 4"), Err(MatrixError::Parse(_))));
    }
}
