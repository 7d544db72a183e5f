use std::path::PathBuf;

use crate::config::ConfigError;
use crate::touchstone::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Model(#[from] sawgate_core::Error),

    #[error("{path}: {source}")]
    Touchstone { path: PathBuf, source: ParseError },

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Validation(String),
}

impl AppError {
    /// 2 for solver failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Model(e) if e.is_solver_failure() => 2,
            _ => 1,
        }
    }
}
