use thiserror::Error;

/// Errors raised by the computations in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("level must be a positive integer, got {0}")]
    InvalidLevel(u64),
    #[error("level {n} exceeds the supported maximum {max}")]
    LevelTooLarge { n: u64, max: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid subgroup of (Z/{n})^x: {reason}")]
    InvalidSubgroup { n: u64, reason: String },
    #[error("weight-1 cusp form dimension s1({n}) is required but unknown")]
    NeedsS1 { n: u64 },
    #[error("no splitting at the Hilbert-series level for level {n}: {reason}")]
    NoSplitting { n: u64, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid ring specification: {0}")]
    InvalidRing(String),
    #[error("ring specification does not terminate: {0}")]
    NonTerminating(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("group too large: {0}")]
    GroupTooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
