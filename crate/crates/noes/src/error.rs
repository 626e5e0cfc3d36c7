//! Error type shared across the solver library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller passed an argument outside the supported range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A state left the admissible set (e.g. non-positive density or
    /// pressure) where an entropy map or flux needed it.
    #[error("inadmissible state: {what} at {location}")]
    Inadmissible { what: String, location: String },

    /// A cell average left the admissible set; the positivity limiter cannot
    /// repair this, so the step must be rejected (usually the CFL is too
    /// large).
    #[error("inadmissible cell average in cell {cell}{stage}: {what}")]
    InadmissibleAverage {
        cell: String,
        stage: String,
        what: String,
    },

    /// An internal invariant failed (e.g. wave-speed ordering after
    /// estimation).
    #[error("internal error: {0}")]
    Internal(String),

    /// Configuration file / CLI errors.
    #[error("config error: {0}")]
    Config(String),

    /// Requested capability is not available for this problem (e.g. no exact
    /// solution).
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn inadmissible(what: impl Into<String>, location: impl Into<String>) -> Self {
        Error::Inadmissible {
            what: what.into(),
            location: location.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
