use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes are incompatible.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// An input violates a documented precondition (non-Hermitian matrix,
    /// negative spectrum beyond tolerance, trace out of range, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),
    /// An argument is out of the supported range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A combinatorial size cap would be exceeded.
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
