use std::path::PathBuf;

use thiserror::Error;

use crate::channels::trace::TraceError;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is out of its documented range.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Matrix or channel dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A matrix that must have full rank does not.
    #[error("rank deficient: {what} has numerical rank {rank}, need {needed}")]
    Rank {
        what: &'static str,
        rank: usize,
        needed: usize,
    },

    /// An iterative routine failed to converge or produced non-finite values.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The requested user/antenna configuration cannot be served.
    #[error("infeasible configuration: {0}")]
    Capability(String),

    /// Malformed or unreadable experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Trace(#[from] TraceError),

    #[error("i/o error on {path}: {source}")]
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
