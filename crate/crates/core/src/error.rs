//! Errors shared by the calculus modules.

use thiserror::Error;

use crate::profile::Violation;

/// Failures of symbolic spectrum computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    /// Both factors contain clusters, so the product spectrum has a limit
    /// point of limit points and leaves the representable class.
    #[error("product is not finitely representable: both operators contain clusters")]
    NotFinitelyRepresentable,
    /// A cluster collision or membership question could not be certified
    /// within the configured scan depth.
    #[error("collision analysis exceeded the configured depth {0}")]
    CollisionDepthExceeded(u32),
    /// A point classification was requested with no factorization pairs.
    #[error("factorization has no pairs")]
    EmptyFactorization,
    /// An input profile failed validation.
    #[error("invalid spectral profile: {}", format_violations(.0))]
    InvalidProfile(Vec<Violation>),
    /// An internal fixpoint or consistency guard tripped; indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
