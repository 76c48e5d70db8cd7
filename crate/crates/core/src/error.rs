use thiserror::Error;

/// Errors raised by the arithmetic and classification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base {0}")]
    InvalidBase(String),
    #[error("order is undefined for m = 0")]
    UndefinedOrder,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("{a} is not invertible modulo {n}")]
    NotInvertible { a: String, n: String },
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
