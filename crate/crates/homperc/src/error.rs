use std::path::Path;

use homperc_core::Error;

/// Failure of a command, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Capacity(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Fit(_) => 4,
        }
    }

    /// Core errors raised while fitting count as fit failures.
    pub fn fit(e: Error) -> Self {
        CliError::Fit(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::CapacityExceeded { .. } => CliError::Capacity(msg),
            Error::SingularSystem => CliError::Fit(msg),
            Error::InvalidParameter(_)
            | Error::GridOutOfRange { .. }
            | Error::TorusTooSmall { .. } => CliError::Usage(msg),
            _ => CliError::Validation(msg),
        }
    }
}
