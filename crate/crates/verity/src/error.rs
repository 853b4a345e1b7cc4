//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A file did not match its declared format. `line` is 1-based and
    /// counts records for record-oriented formats.
    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Well-formed input that violates a data-level contract
    /// (duplicate ids, single-class training sets, non-finite values).
    #[error("validation error: {0}")]
    Validation(String),

    /// A bad run configuration: unknown keys, missing resources,
    /// out-of-range hyper-parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// Dimension or block-layout mismatch between a model and its input.
    #[error("shape mismatch: {0}")]
    Shape(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
