//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by graph construction, analysis, training and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A text file failed to parse.
    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// Problem size exceeds a configured cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A signal or feature column is identically zero where the math divides by its norm.
    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    /// Negative or pool sampling ran out of eligible nodes.
    #[error("sampling exhausted: {0}")]
    Sampling(String),

    /// Bad run configuration (zero epochs, non-positive temperature, ...).
    #[error("config error: {0}")]
    Config(String),

    /// Training produced a non-finite loss.
    #[error("training diverged: {0}")]
    Divergence(String),

    /// File I/O failure, annotated with the path involved.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
