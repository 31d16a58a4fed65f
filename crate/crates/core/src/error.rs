use thiserror::Error;

/// Errors produced anywhere in the synchronization pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no even-indexed occupied subcarrier: cannot build a half-repetitive preamble")]
    UnsatisfiablePreamble,

    #[error("window [{start}, {end}) exceeds signal bounds [{lo}, {hi})")]
    OutOfRange {
        start: isize,
        end: isize,
        lo: isize,
        hi: isize,
    },

    #[error("energy term is zero over the whole search window")]
    NoSignal,

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
