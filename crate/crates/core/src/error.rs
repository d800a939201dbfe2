use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for {m} bits")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("m = {m} is not supported here (requires {requirement})")]
    UnsupportedOrder { m: usize, requirement: &'static str },

    #[error("offset violates constraint {constraint}")]
    OffsetConstraint { constraint: &'static str },

    #[error("offset kind mismatch: expected {expected}, got {actual}")]
    OffsetKindMismatch {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("mixed constellation scales in one sequence")]
    MixedScale,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("thresholds must be strictly increasing")]
    UnsortedThresholds,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
