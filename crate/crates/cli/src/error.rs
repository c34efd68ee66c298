use sdi_core::Error as CoreError;
use thiserror::Error;

/// Command failure, tagged with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("bad distribution: {0}")]
    Distribution(String),
    #[error("{0}")]
    SizeGuard(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verification(_) => 1,
            Self::Parse(_) => 2,
            Self::Invariant(_) => 3,
            Self::Distribution(_) => 4,
            Self::SizeGuard(_) => 5,
        }
    }

    /// Classifies a core error raised while reading input at `path`.
    pub fn at(path: &str, err: CoreError) -> Self {
        match err {
            CoreError::SizeGuard(_) => Self::SizeGuard(format!("{path}: {err}")),
            CoreError::BadDistribution { .. } => Self::Distribution(err.to_string()),
            other => Self::Parse(format!("{path}: {other}")),
        }
    }

    pub fn parse(path: &str, msg: impl std::fmt::Display) -> Self {
        Self::Parse(format!("{path}: {msg}"))
    }
}

/// Classifies a core error raised during computation on validated input.
impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::SizeGuard(_) => Self::SizeGuard(err.to_string()),
            CoreError::BadDistribution { .. } => Self::Distribution(err.to_string()),
            other => Self::Invariant(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
