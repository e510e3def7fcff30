use std::path::PathBuf;

use thiserror::Error;

use crate::measures::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} labels, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("K={k} exceeds the limit of {cap} for {what}")]
    TooManyLabels {
        k: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("measure violates capacity axioms: {0}")]
    InvalidMeasure(ValidationReport),

    #[error("invalid counting profile: {0}")]
    InvalidProfile(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid label distribution: {0}")]
    InvalidDistribution(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that describe well-formed input violating a domain
    /// rule, as opposed to I/O, syntax or usage problems.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidMeasure(_)
                | Error::InvalidProfile(_)
                | Error::InvalidDistribution(_)
                | Error::InvalidInput(_)
                | Error::DimensionMismatch { .. }
        )
    }

    pub(crate) fn parse(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}
