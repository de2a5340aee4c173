use alloc::string::String;

/// Errors raised by the exact arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("delta must have length r-1 = {expected}, got {found}")]
    DeltaLength { expected: usize, found: usize },
    #[error("delta entries must be positive, got {0}")]
    NonPositiveDelta(i64),
    #[error("delta is not a divisor chain: {0} does not divide {1}")]
    Divisibility(i64, i64),
    #[error("Heisenberg rank r must be positive")]
    ZeroRank,
    #[error("element does not conform to the group: {0}")]
    Shape(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("matrix does not preserve the commutator form up to sign")]
    NotInM,
    #[error("matrix is not invertible over the integers")]
    NotUnimodular,
    #[error("basis rows are linearly dependent")]
    DependentBasis,
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("budget exceeded: {needed} > {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("insufficient data: need at least {needed} values, got {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("structural failure: {0}")]
    Structural(String),
}

pub type Result<T> = core::result::Result<T, Error>;
