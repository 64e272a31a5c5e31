use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension n={0} is out of range 1..={max}", max = crate::cube::N_MAX)]
    Dimension(u32),

    #[error("distance r={r} is invalid for n={n}: {reason}")]
    Distance { n: u32, r: u32, reason: &'static str },

    #[error("dimension mismatch: expected n={expected}, found n={found}")]
    DimensionMismatch { expected: u32, found: u32 },

    #[error("vertices of a triangle must be distinct")]
    NonDistinct,

    #[error("depth {depth} exceeds the {available} available bits")]
    Depth { depth: u32, available: u32 },

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("block length p={p} does not divide n={n}")]
    BlockDoesNotDivide { p: u32, n: u32 },

    #[error("block length p={p} divides r={r}")]
    BlockDividesDistance { p: u32, r: u32 },

    #[error("block count m={m} must exceed r={r}")]
    TooFewBlocks { m: u32, r: u32 },

    #[error("sampling probability {0} is outside (0, 1]")]
    Probability(f64),

    #[error("formula does not yield an integer for n={n}, r={r}")]
    NonIntegral { n: u32, r: u32 },

    #[error("bound is not applicable: {0}")]
    NotApplicable(String),

    #[error("instance too large to enumerate: {0}")]
    TooLarge(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
