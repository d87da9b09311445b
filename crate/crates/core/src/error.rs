//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoreError>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix is not invertible (det = {det})")]
    SingularMatrix { det: String },

    #[error("no derivation in this case")]
    NoDerivation,

    #[error("sigma is not invertible in the Mahler case: {0}")]
    SigmaNotInvertible(String),

    #[error("invalid operator case: {0}")]
    InvalidCase(String),

    #[error("operator is already homogeneous")]
    AlreadyHomogeneous,

    #[error("insufficient truncation order: {0}")]
    InsufficientOrder(String),

    #[error("resonance at index {index}")]
    Resonance { index: i64 },

    #[error("seed inconsistent with operator at coefficient index {index}")]
    SeedMismatch { index: i64 },

    #[error("ramification {0} unsupported here: {1}")]
    BadRamification(u32, String),

    #[error("inconsistent system: {0}")]
    Inconsistent(String),

    #[error("degenerate operator pair: {0}")]
    DegeneratePair(String),

    #[error("apply sigma-power preprocessing first: trailing coefficient vanishes in the Mahler case")]
    MahlerTrailingZero,

    #[error("spectrum does not split over the represented constants field: {0}")]
    SpectrumSplit(String),

    #[error("triangular preprocessing unavailable: {0}")]
    TriangularUnavailable(String),

    #[error("undeclared transcendental constant needed: {0}")]
    UndeclaredConstant(String),

    #[error("exponent must be rational in the Mahler case")]
    IrrationalMahlerExponent,

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
