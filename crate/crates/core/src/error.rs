use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A pole or blow-up of the input was hit at `x`.
    #[error("domain error at x = {x}: {reason}")]
    Domain { x: f64, reason: String },

    #[error("every grid point is masked: {0}")]
    EmptyDomain(String),

    #[error("value out of range: {0}")]
    Range(String),

    /// An internal invariant failed. Indicates a bug, never bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
