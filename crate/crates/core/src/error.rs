use thiserror::Error;

/// Errors produced by the engine, the sweeps and the model frontends.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("memory budget exceeded: {requested} records requested, {resident} of {budget} already resident")]
    MemoryBudget {
        requested: usize,
        resident: usize,
        budget: usize,
    },
    #[error("format error: {0}")]
    Format(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("substitution is not monotone: {0}")]
    NonMonotone(String),
    #[error("malformed arc stream: {0}")]
    Structural(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
