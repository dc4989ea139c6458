use std::path::PathBuf;

use lognormal_cascade::market_data::MarketDataError;
use lognormal_cascade::CascadeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error(transparent)]
    Cascade(#[from] CascadeError),

    #[error(transparent)]
    MarketData(#[from] MarketDataError),

    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// 2 for usage and validation problems, 3 for runtime and numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Config { .. } => 2,
            CliError::Cascade(CascadeError::InvalidParameter(_) | CascadeError::Domain(_)) => 2,
            _ => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
