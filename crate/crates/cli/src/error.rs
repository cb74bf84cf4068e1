use std::path::PathBuf;

use thiserror::Error;

/// Failure of a command, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or configuration.
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error(transparent)]
    Compute(#[from] sqzbpsk::Error),
}

impl CliError {
    /// 1 for computation failures, 2 for usage and I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(e) => match e {
                sqzbpsk::Error::Io { .. } | sqzbpsk::Error::Parse { .. } | sqzbpsk::Error::EmptyInput(_) => 2,
                _ => 1,
            },
            CliError::Usage(_) | CliError::Io { .. } | CliError::Config { .. } => 2,
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
