use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported root system type `{0}`")]
    UnsupportedType(String),
    #[error("invalid rank {rank} for type {label}")]
    InvalidRank { label: String, rank: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coweight {0} is not integral")]
    NonIntegralCoweight(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("coweight {0} is not dominant")]
    NonDominant(String),
    #[error("`{0}` is not an element of the Weyl group")]
    NotInWeylGroup(String),
    #[error("vector {0} is not a root of the system")]
    RootNotInSystem(String),
    #[error("descent exceeded the budget of {0} steps")]
    BudgetExceeded(usize),
    #[error("the zero cocharacter has no deformation space")]
    ZeroCocharacter,
    #[error("degenerate Killing pairing on root {0}")]
    DegeneratePairing(String),
    #[error("genus {0} is odd; the construction needs an even genus")]
    OddGenus(u64),
    #[error("Weyl group of order {0} is too large to enumerate")]
    GroupTooLarge(u128),
    #[error("search gave up after {0} nodes")]
    SearchBudgetExceeded(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
