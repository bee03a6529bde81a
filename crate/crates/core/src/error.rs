use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("unavailable: {0}")]
    Unavailable(String),

    #[error("p = {0} divides the index [O_K : Z[theta]]; decomposition by factoring the minimal polynomial is not valid")]
    IndexDivisor(u64),

    #[error("prime above p = {p} (norm {norm}) has factor pattern {pattern} not present in the class table")]
    Unclassifiable { p: u64, norm: u64, pattern: String },

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
