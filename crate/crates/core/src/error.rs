//! Crate-wide error type with machine-greppable codes.

use thiserror::Error;

/// Errors produced by parsing, effect computation and inference.
#[derive(Debug, Error)]
pub enum Error {
    /// A cell or document could not be parsed. `row` is 1-based and counts
    /// the header row, so the first data row is row 2.
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    /// A document-level input problem without a row location.
    #[error("{0}")]
    InvalidInput(String),

    /// Two values, samples or distributions live on incompatible scales.
    #[error("incompatible scales: {left} vs {right}")]
    ScaleMismatch { left: String, right: String },

    /// An estimation operation received an empty sample.
    #[error("sample '{0}' is empty")]
    EmptySample(String),

    /// Inference needs at least two observations per sample.
    #[error("sample '{label}' has {len} observations, need at least 2")]
    SampleTooSmall { label: String, len: usize },

    /// A requested statistic collapses (zero variance, extreme estimate, 0/0).
    #[error("degenerate statistic: {0}")]
    Degenerate(String),

    /// Invalid configuration: level, reps, digits, scale spec, rule bounds.
    #[error("{0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable one-word code for grepping logs and mapping exit statuses.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } | Error::InvalidInput(_) | Error::EmptySample(_) => "E_PARSE",
            Error::ScaleMismatch { .. } | Error::SampleTooSmall { .. } => "E_SCALE",
            Error::Degenerate(_) => "E_DEGENERATE",
            Error::InvalidConfig(_) | Error::Io(_) => "E_USAGE",
        }
    }

    /// Process exit status the CLI uses for this error class.
    pub fn exit_code(&self) -> u8 {
        match self.code() {
            "E_USAGE" => 2,
            "E_DEGENERATE" => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
