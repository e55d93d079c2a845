use std::path::PathBuf;

use thiserror::Error;

/// Failures that end a command, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Numerical(#[from] schwarzian_core::Error),
}

impl CliError {
    /// 1 for numerical failures and I/O trouble while writing results,
    /// 2 for anything wrong with the invocation or its inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) | CliError::Write { .. } => 1,
            _ => 2,
        }
    }
}
