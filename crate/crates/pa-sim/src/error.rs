use thiserror::Error;

/// Errors surfaced by the simulator library.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("correlation must satisfy |rho| <= 1, got {0}")]
    CorrelationOutOfRange(f64),

    #[error("degenerate channel: zero-norm estimate")]
    DegenerateChannel,

    #[error("rank-deficient user matrix in zero-forcing")]
    SingularChannelMatrix,

    #[error("no candidate PA-RA pair for wagon {target_wagon}")]
    NoPair { target_wagon: usize },

    #[error("empty sample set")]
    EmptySamples,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
