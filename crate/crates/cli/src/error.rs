use std::path::PathBuf;

use thiserror::Error;

/// Anything that stops a run before its checks can be judged. Exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Field(#[from] nfmertens::Error),

    #[error("{0}")]
    Input(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("writing report: {0}")]
    Csv(#[from] csv::Error),

    #[error("writing report: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
