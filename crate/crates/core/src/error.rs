use thiserror::Error;

/// Errors raised by group construction, transforms, means and certificates.
#[derive(Debug, Error)]
pub enum Error {
    #[error("radix {radix} at coordinate {index} is below 2")]
    InvalidRadix { index: usize, radix: u64 },

    #[error("level must be at least 1")]
    ZeroLevel,

    #[error("radix sequence has {available} entries, level {level} requested")]
    ShortRadices { available: usize, level: usize },

    #[error("scale M_{level} does not fit in 64 bits")]
    ScaleOverflow { level: usize },

    #[error("dense grid of {points} points exceeds the limit of {limit}")]
    GridTooLarge { points: String, limit: usize },

    #[error("index {index} out of range 0..{limit}")]
    IndexOutOfRange { index: String, limit: String },

    #[error("digit {digit} at coordinate {coordinate} is not below radix {radix}")]
    InvalidDigit { coordinate: usize, digit: u64, radix: u32 },

    #[error("expected {expected} digits, got {got}")]
    DigitCount { expected: usize, got: usize },

    #[error("functions live on different groups")]
    GroupMismatch,

    #[error("closed-form Dirichlet kernel needs a scale index M_k, got {0}")]
    NotAScale(u64),

    #[error("invalid weight scheme: {0}")]
    InvalidWeights(String),

    #[error("mean undefined: {0}")]
    UndefinedMean(String),

    #[error("value cannot be represented exactly: {0}")]
    Inexact(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no admissible alpha_{position} at or below the cap {cap}")]
    SearchExhausted { position: usize, cap: u32 },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by invalid inputs rather than by a failed check.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::Certification(_) | Error::Io(_) | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
