//! Failure classes and their exit codes.

use thiserror::Error;
use twostep::ideals::IdealError;

/// Exit code for a reproduction whose cells differ from expectations.
pub const EXIT_MISMATCH: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or inputs outside a function's domain (exit 2).
    #[error("{0}")]
    Usage(String),
    /// A sampler gave up on a profile (exit 3).
    #[error("{0}")]
    Exhausted(String),
    /// Writing the output failed (exit 1).
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Exhausted(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    /// Wraps any input-validation error as a usage error.
    pub fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::SamplerExhausted { .. } | IdealError::InfeasibleIntersection { .. } | IdealError::Refused { .. } => {
                CliError::Exhausted(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}
