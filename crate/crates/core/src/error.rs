use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mode label `{0}` (expected one of 1h, 1v, 2h, 2v)")]
    InvalidMode(String),

    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("not a physical state: {0}")]
    NotAState(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("postselected sector is empty (weight {weight:e})")]
    EmptySector { weight: f64 },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("insufficient statistics: signal = {signal}, noise = {noise}")]
    InsufficientStatistics { signal: u64, noise: u64 },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit(_) => 4,
            Error::InvalidMode(_) | Error::InvalidArguments(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
