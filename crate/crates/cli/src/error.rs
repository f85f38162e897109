use std::path::Path;

use thiserror::Error;
use valdist::Error as CoreError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SIGMA: i32 = 3;
pub const EXIT_NO_TAU: i32 = 4;
pub const EXIT_NO_MARGIN: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
    /// Certificates that did not re-validate.
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(e) => match e {
                CoreError::UnknownEntry(_)
                | CoreError::Invalid(_)
                | CoreError::Growth(_)
                | CoreError::Range(_)
                | CoreError::Domain(_)
                | CoreError::EmptyDomain(_) => EXIT_USAGE,
                CoreError::SigmaInfeasible(_) | CoreError::Unreachable { .. } => EXIT_SIGMA,
                CoreError::NoShift(_) => EXIT_NO_TAU,
                CoreError::NoCertificate(_) | CoreError::IndeterminateBoundary(_) => EXIT_NO_MARGIN,
                _ => EXIT_INTERNAL,
            },
            Self::Usage(_) => EXIT_USAGE,
            Self::Rejected(_) => EXIT_NO_MARGIN,
            Self::Io { .. } | Self::Internal(_) => EXIT_INTERNAL,
        }
    }
}
