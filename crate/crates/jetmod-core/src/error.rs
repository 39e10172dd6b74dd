//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("binomial undefined: {0}")]
    BinomialDomain(String),
    #[error("mixed basis symbols: {0}")]
    MixedSymbols(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("missing sample at {0}")]
    MissingSample(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("not a representation: {0}")]
    NotARepresentation(String),
    #[error("ad-eigenvector precondition failed for {0}")]
    AdEigenPrecondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
