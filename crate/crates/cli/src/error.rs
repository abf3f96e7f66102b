use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] dppc::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("no radius met the facility budget in {trials} of {total} trial(s)")]
    Infeasible { trials: usize, total: usize },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 0 success, 1 usage, 2 regime or precondition, 3 infeasible.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(dppc::Error::InvalidParameter(_)) => 1,
            CliError::Core(_) | CliError::Io { .. } | CliError::Csv(_) => 2,
            CliError::Infeasible { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
