use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid symbol {0:?}")]
    InvalidSymbol(char),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(u32, u32),

    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(usize, usize),

    #[error("pattern not applicable: {0}")]
    InapplicablePattern(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus polynomial is not irreducible")]
    NotIrreducible,

    #[error("inversion of zero")]
    DivisionByZero,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("ambiguous decoding: {0} candidates")]
    Ambiguous(usize),

    #[error("BCH decoding failed: {0}")]
    BchFailure(String),

    #[error("decoding failed: {0}")]
    DecodeFailure(String),

    #[error("balancing capacity exceeded for {0} input bits")]
    CapacityExceeded(usize),

    #[error("region marker not found: {0}")]
    MarkerNotFound(String),

    #[error("repetition decoding ambiguous at group {0}")]
    RepetitionAmbiguous(usize),

    #[error("grid too large: {cases} cases exceeds limit {limit}")]
    GridTooLarge { cases: u128, limit: u128 },
}
