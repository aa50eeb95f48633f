use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a valid prime modulus (need a prime p >= 5)")]
    NotPrime(u64),
    #[error("modulus is reducible: {factor} is a nontrivial factor")]
    ReducibleModulus { factor: String },
    #[error("singular curve: 4a^3 + 27b^2 = 0")]
    SingularCurve,
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
