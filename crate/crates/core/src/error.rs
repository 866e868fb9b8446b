use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invariant violated at t = {time:e} s: {what} (deviation {deviation:e})")]
    InvariantViolation {
        what: &'static str,
        time: f64,
        deviation: f64,
    },

    #[error(
        "Fock truncation inadequate: top level population {population:e} with n_max = {n_max}"
    )]
    Truncation { n_max: usize, population: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("unit error for `{key}`: {message}")]
    Unit { key: String, message: String },

    #[error("{path}: row {row}: {message}")]
    Curve {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by user input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Parse { .. }
                | Error::Config(_)
                | Error::Unit { .. }
                | Error::Curve { .. }
                | Error::Io { .. }
                | Error::Json(_)
        )
    }
}
