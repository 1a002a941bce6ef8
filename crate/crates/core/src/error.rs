use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a special function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("photon index {index} outside truncated space of {n_max} levels")]
    IndexOutOfRange { index: usize, n_max: usize },

    #[error("invalid model parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    /// The oscillator truncation is too small for the requested state.
    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error(
        "norm drift {drift:.3e} exceeds bound {bound:.1e} at t = {time:.6}; \
         retry with dt <= {suggested_dt:.3e}"
    )]
    NormDrift { time: f64, drift: f64, bound: f64, suggested_dt: f64 },

    /// The dressed basis failed to capture the initial state.
    #[error("dressed-basis projection captured only {captured:.9} of the norm")]
    IncompleteProjection { captured: f64 },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error("invalid config:\n  {}", .0.join("\n  "))]
    ConfigInvalid(Vec<String>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code for the command-line front end.
    ///
    /// `0` is success, `1` a configuration problem, `2` a numerical-validity
    /// failure (norm drift, truncation, incomplete projection), `3` an I/O
    /// failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigParse(_) | Error::ConfigInvalid(_) | Error::InvalidParams(_) => 1,
            Error::NormDrift { .. }
            | Error::IncompleteProjection { .. }
            | Error::Truncation(_) => 2,
            Error::Io { .. } | Error::Serialize(_) => 3,
            Error::Domain(_) | Error::IndexOutOfRange { .. } => 1,
        }
    }
}
