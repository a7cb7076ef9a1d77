use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid machine {machine_id}: {reason}")]
    InvalidMachine { machine_id: String, reason: String },

    #[error("numerical failure for machine {machine_id}: {reason}")]
    Numerical { machine_id: String, reason: String },

    #[error("symbol {symbol} at step {step} is impossible under the current state distribution")]
    ImpossibleObservation { step: usize, symbol: u8 },

    #[error("unsupported machine size {0} (enumeration supports 1..=4 states)")]
    UnsupportedSize(usize),

    #[error("topology {key} produced no minimal emission assignment after {attempts} draws")]
    DegenerateTopology { key: String, attempts: usize },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("validation error at line {line}: {reason}")]
    Validation { line: usize, reason: String },

    #[error("machine {0} has a zero-rate optimal predictor and is excluded")]
    ExcludedMachine(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("training failed: {0}")]
    TrainingFailure(String),

    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),

    #[error("no records")]
    NoRecords,

    #[error("{0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
