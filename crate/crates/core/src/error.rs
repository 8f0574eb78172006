use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("value {value} out of range at (row {row}, col {col})")]
    Range { row: usize, col: usize, value: String },

    #[error("insufficient data: need at least {needed} pairs, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("render error: {0}")]
    Render(String),

    #[error(transparent)]
    Backend(#[from] crate::promptgen::BackendError),

    #[error("ledger error: {0}")]
    Ledger(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short stable tag used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Integrity(_) => "integrity",
            Error::Argument(_) => "argument",
            Error::Config(_) => "config",
            Error::Range { .. } => "range",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::UndefinedCorrelation(_) => "undefined_correlation",
            Error::Training(_) => "training",
            Error::Render(_) => "render",
            Error::Backend(_) => "backend",
            Error::Ledger(_) => "ledger",
        }
    }
}
