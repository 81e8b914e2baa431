use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    ConfigLine { path: String, line: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] latscat_core::Error),

    #[error("{failed} of {total} oracle checks failed: {names}")]
    ChecksFailed { failed: usize, total: usize, names: String },

    #[error("cannot read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// 0 success, 1 bad configuration, 2 numerical failure, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigLine { .. } | CliError::Config(_) => 1,
            CliError::Model(e) if e.is_numerical() => 2,
            CliError::Model(_) => 1,
            CliError::ChecksFailed { .. } => 2,
            CliError::Io { .. } | CliError::Internal(_) => 3,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(format!("json: {e}"))
    }
}
