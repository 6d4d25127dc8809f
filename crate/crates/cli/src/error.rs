use std::path::PathBuf;

use thiserror::Error;

/// Failures of a run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or inconsistent configuration (exit 2).
    #[error("config error: {0}")]
    Config(String),

    /// A numerical step failed (exit 3).
    #[error("numerical failure in {op}: {source}")]
    Numerical {
        op: &'static str,
        #[source]
        source: bergman::Error,
    },

    /// Output could not be written (exit 3).
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical { .. } | CliError::Io { .. } => 3,
        }
    }

    pub(crate) fn numerical(op: &'static str) -> impl FnOnce(bergman::Error) -> CliError {
        move |source| CliError::Numerical { op, source }
    }
}
