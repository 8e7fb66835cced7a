use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid surgery coefficients: {0}")]
    InvalidSurgery(String),

    #[error("not a quadratic irrational: {0}")]
    NotQuadraticIrrational(String),

    #[error("{0} is not a square-free integer greater than 1")]
    InvalidRadicand(String),

    #[error("radicand {0} exceeds the supported bound {1}")]
    FieldTooLarge(String, u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("ideals belong to different fields (discriminants {0} and {1})")]
    MixedFields(i64, i64),

    #[error("the zero ideal has no factorization")]
    ZeroIdeal,

    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("not a stationary dimension group: {0}")]
    NotStationary(String),

    #[error("operation requires rank 2, got rank {0}")]
    UnsupportedRank(usize),

    #[error("no Minkowski decomposition: {0}")]
    Minkowski(String),

    #[error("internal consistency fault: {0}")]
    ConsistencyFault(String),

    #[error("no prime ideal found with norm <= {0}")]
    SearchExhausted(u64),

    #[error("volume sequence is not strictly increasing at index {0}")]
    NonIncreasing(usize),

    #[error("chain has {found} members, expected {expected}")]
    ChainMismatch { expected: u64, found: u64 },

    #[error("no observations supplied")]
    EmptyObservations,

    #[error("{0}")]
    InvalidInput(String),
}
