use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the prediction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Vector or matrix dimensions disagree with the network topology or with each other.
    #[error("shape mismatch in {context}: expected {expected}, got {actual}")]
    Shape {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A configuration or argument violates its documented invariant.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// A NaN or infinity appeared in an intermediate quantity.
    #[error("numerical failure in {stage} (layer {layer:?}): {detail}")]
    Numerical {
        stage: &'static str,
        layer: Option<usize>,
        detail: String,
    },

    /// Input file content could not be parsed.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }

    pub fn shape(context: &'static str, expected: usize, actual: usize) -> Self {
        Error::Shape {
            context,
            expected,
            actual,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by data or file content rather than arithmetic.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Io { .. } | Error::Json(_) | Error::Shape { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
