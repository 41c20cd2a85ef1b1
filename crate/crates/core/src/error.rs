use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pole: denominator vanishes")]
    Pole,
    #[error("stream exhausted: needed {needed} terms, only {available} available")]
    StreamExhausted { needed: usize, available: usize },
    #[error("coefficient is not an integer at k={k}: {detail}")]
    NonIntegerCoefficient { k: String, detail: String },
    #[error("partial quotient at index {index} is {value}, expected >= 1")]
    NonPositiveQuotient { index: usize, value: String },
    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("no output digit after {absorptions} absorptions")]
    Stalled { absorptions: usize },
    #[error("singular transformation (determinant 0)")]
    Singular,
    #[error("determinant {0} is not +-2")]
    BadDeterminant(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("wrong block arity: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("class mismatch: expected {expected}, found {found}")]
    ClassMismatch { expected: String, found: String },
    #[error("index function {0} needs a tail branch")]
    BranchRequired(String),
    #[error("index {0} lies before the start of the stream")]
    IndexOutOfRange(i64),
    #[error("alignment failed: {0}")]
    Alignment(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
