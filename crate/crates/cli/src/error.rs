use std::path::PathBuf;

use thiserror::Error;

/// Failure of a CLI invocation; each class has its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    NonConvergence(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::NonConvergence(_) => 4,
            CliError::Verification(_) => 5,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<signet_core::Error> for CliError {
    fn from(e: signet_core::Error) -> Self {
        use signet_core::Error as E;
        let msg = e.to_string();
        match e {
            E::Parse { .. } => CliError::Parse(msg),
            E::NoConvergence(_) => CliError::NonConvergence(msg),
            E::InvalidParameter(_) => CliError::Usage(msg),
            _ => CliError::Precondition(msg),
        }
    }
}
