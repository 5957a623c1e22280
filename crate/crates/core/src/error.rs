use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("zero input not allowed: {0}")]
    Zero(&'static str),
    #[error("singular matrix")]
    Singular,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
