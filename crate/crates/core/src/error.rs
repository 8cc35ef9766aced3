use thiserror::Error;

/// Errors produced anywhere in the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands with incompatible shapes or variable counts.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Malformed input data (pencil rows, rational strings, JSON files).
    #[error("format error: {0}")]
    Format(String),

    /// An exact division left a nonzero remainder.
    #[error("inexact division: {0}")]
    Inexact(String),

    /// A precondition of an operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A random draw landed on a degenerate configuration; redrawing may help.
    #[error("genericity failure: {0}")]
    Genericity(String),

    /// Random draws exhausted their retry budget.
    #[error("randomness exhausted: {0}")]
    Randomness(String),

    /// A configured resource cap (basis size, degree, reductions) was hit.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// An emitted parametrization failed its exact membership certificate.
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
