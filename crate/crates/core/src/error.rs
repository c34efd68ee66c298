use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised while building or evaluating game strategies.
///
/// Invariant violations carry the offending quantity so callers can report
/// how far off a matrix was, not just that it failed.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace:.12}, expected {expected}")]
    BadTrace { trace: f64, expected: f64 },

    #[error("ket norm squared is {norm_sqr:.12}, expected 1")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("channel {context} is not trace preserving (max deviation {deviation:.3e})")]
    NotTracePreserving { context: String, deviation: f64 },

    #[error("POVM elements do not sum to identity (max deviation {deviation:.3e})")]
    IncompletePovm { deviation: f64 },

    #[error("conditional distribution for input {input} sums to {total:.9}")]
    BadDistribution { input: String, total: f64 },

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
