use thiserror::Error;

/// Errors surfaced by construction, analysis, and bound computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field order {p}^{m} exceeds the supported maximum 2^20")]
    FieldTooLarge { p: u64, m: u32 },

    #[error("extension degree must be at least 1")]
    BadDegree,

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("inverse of zero is undefined")]
    ZeroInverse,

    #[error("operands belong to different fields (order {0} vs order {1})")]
    MixedFields(u32, u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("column map scalar at position {0} is zero")]
    ZeroScalar(usize),

    #[error("column map permutation is not a bijection")]
    NotAPermutation,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("no admissible truncation count: {0}")]
    EmptyRange(String),

    #[error("no admissible candidates: {0}")]
    EmptyCandidates(String),

    #[error("bracketing failed in inner maximization: {0}")]
    BracketFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
