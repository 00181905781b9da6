use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid coefficient sequence: {0}")]
    InvalidSequence(String),

    #[error("failed to parse sequence file at line {line}: {reason}")]
    SequenceParse { line: usize, reason: String },

    #[error("invalid interval union: {0}")]
    InvalidIntervals(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("interval union touches the origin: {0}")]
    ContainsOrigin(String),

    #[error("no sign change on [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
