//! Exact symbolic calculus for spectra of operator products.
//!
//! The crate models bounded operators whose spectra are finite unions of
//! isolated points and geometric clusters, all over Gaussian-rational
//! scalars. On that class it computes spectra of tensor products and
//! two-sided multiplications along two independent routes (a classification
//! calculus and a block-construction oracle), derives the pole / B-Weyl /
//! Weyl structure, checks the spectral transfer identities, and cross-checks
//! everything against exact finite-dimensional matrix models.

pub mod blocks;
pub mod dsl;
pub mod error;
pub mod gen;
pub mod matrix;
mod merge;
pub mod product;
pub mod profile;
pub mod scalar;
pub mod sets;
pub mod transfer;

pub use blocks::{
    oracle_agreement, oracle_product, primitive_product, AgreementReport, BlockModel,
    PrimitiveBlock,
};
pub use dsl::{parse_operator, render_operator, DslError, OperatorSource};
pub use error::CalcError;
pub use gen::{default_scalar_pool, gen_model, gen_pair, GenParams};
pub use matrix::{
    ascent_descent, conjugated_spectrum, drazin_inverse, elementary_rep, kron, parse_matrix,
    render_matrix, triangular_spectrum, validate_matrix_pair, AscentDescent, Drazin, ExactMatrix,
    MatrixError, MatrixPairReport, DIM_CAP,
};
pub use product::{
    classify_nonzero, classify_zero, factorization, product_profile, product_report,
    FactorKind, FactorPoint, Factorization, Mode, NonzeroClass, ProductReport,
};
pub use profile::{
    DerivedSets, OperatorFlags, PointClass, Rank, SpectralAtom, SpectralProfile, Violation,
    ZeroClass,
};
pub use scalar::{geom_member, ratio_power, ArithError, GaussianRational};
pub use sets::{GeomFamily, SymbolicSet};
pub use transfer::{
    bweyl_inclusion, reverse_inclusion_holds, s_set, transfer_report, InclusionVerdict,
    PredictionRule, Scenario, SetDelta, TransferPrediction, TransferReport,
};

/// Tunable bounds shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Depth up to which cluster-vs-cluster point collisions are scanned when
    /// no exact decision procedure applies.
    pub collision_depth: u32,
    /// Largest matrix dimension the matrix lab accepts (products included).
    pub max_matrix_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { collision_depth: 64, max_matrix_dim: 12 }
    }
}
