use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulation order {0}: expected 4, 16 or 64")]
    UnsupportedOrder(usize),
    #[error("antenna count {0} is not a power of two")]
    AntennaCount(usize),
    #[error("invalid constellation: {0}")]
    Constellation(String),
    #[error("invalid pre-scaling: {0}")]
    PreScaling(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("pre-scaling mode requires channel state information")]
    MissingChannel,
    #[error("infeasible projection: {0}")]
    Infeasible(String),
    #[error("target BLER {target} not reached in [{low_db}, {high_db}] dB")]
    RangeExhausted {
        target: f64,
        low_db: f64,
        high_db: f64,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("expected {expected} bits, got {got}")]
    Length { expected: usize, got: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
