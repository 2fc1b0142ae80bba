use std::fmt;

use thiserror::Error;

/// One problem found while validating a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub voter_id: u64,
    /// Index of the offending record inside the voter's dataset, if the
    /// problem is tied to a single record.
    pub record: Option<usize>,
    pub reason: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.record {
            Some(r) => write!(f, "voter {} record {}: {}", self.voter_id, r, self.reason),
            None => write!(f, "voter {}: {}", self.voter_id, self.reason),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("l1 norm {norm} exceeds bound {bound}")]
    NormBound { norm: f64, bound: f64 },

    #[error("corpus is not preprocessed; run preprocessing (alternatives clipped to l2 norm 1/2) first")]
    NotPreprocessed,

    #[error("corpus validation failed:\n{}", join_diagnostics(.0))]
    Validation(Vec<Diagnostic>),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_diagnostics(d: &[Diagnostic]) -> String {
    d.iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
