use thiserror::Error;

/// Errors raised by configuration checks and the per-drop pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    /// Orthogonality impossible: fewer pilot symbols than users.
    #[error("orthogonality impossible: {users} users need at least {users} pilot symbols, got {pilots}")]
    PilotsTooShort { users: usize, pilots: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),

    /// The estimated channel matrix is (numerically) rank deficient.
    #[error("estimated channel matrix is rank deficient (condition number {condition:e})")]
    RankDeficient { condition: f64 },

    #[error("drop {drop}: estimated channel still rank deficient after {attempts} attempts")]
    ResampleExhausted { drop: u64, attempts: u32 },

    #[error("{0} samples given, at least 2 required")]
    TooFewSamples(usize),
}
