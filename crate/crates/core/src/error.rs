use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("generator index {index} out of range for {rank} generators")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("word is not in the cover subgroup (exponent vector {0:?} nonzero mod modulus)")]
    Membership(Vec<i64>),
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
