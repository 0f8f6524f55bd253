use std::path::PathBuf;

use thiserror::Error;
use vankampen_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl CliError {
    /// 2 precondition refused, 3 resource cap, 4 input or degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::Precondition(_)) => 2,
            CliError::Core(CoreError::ResourceCap(_)) => 3,
            _ => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
