//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors produced by exact-algebra and geometry operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Two values live in different charts but were combined.
    #[error("chart mismatch: `{0}` vs `{1}`")]
    ChartMismatch(String, String),
    /// A variable name was not found in the chart.
    #[error("unknown variable `{0}` in chart `{1}`")]
    UnknownVariable(String, String),
    /// A rational function would have an identically zero denominator.
    #[error("zero denominator")]
    ZeroDenominator,
    /// Matrix inversion on a singular matrix.
    #[error("singular matrix")]
    SingularMatrix,
    /// A polynomial expected to be invariant under the group action is not.
    #[error("polynomial is not B_n-invariant: {0}")]
    NotInvariant(String),
    /// A rational function expected to reduce to a polynomial did not.
    #[error("expression is not polynomial: {0}")]
    NotPolynomial(String),
    /// Rewriting to invariants requires even exponents in every p variable.
    #[error("odd exponent in variable `{0}`; not a polynomial in squared variables")]
    OddExponent(String),
    /// Parameter out of the supported range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A linear system that must be solvable was not.
    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),
    /// Flat-chart normalization would need an irrational scale.
    #[error("normalization requires the square root of {0}, which is not a rational square")]
    IrrationalNormalization(String),
    /// Prepotential integration found non-symmetric data.
    #[error("integrability failure: {0}")]
    Integrability(String),
    /// An internal cross-check that should hold by theory failed.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
