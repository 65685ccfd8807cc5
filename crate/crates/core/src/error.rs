use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the optimizer, benchmarks, statistics and experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration: bad parameters, unknown names, mismatched dimensions.
    #[error("configuration error: {0}")]
    Config(String),
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An index or iteration counter out of range.
    #[error("range error: {0}")]
    Range(String),
    #[error("io error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
