use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    InvalidModulus(u32),

    #[error("entry {value} at index {index} is not reduced modulo {p}")]
    EntryOutOfRange { index: usize, value: u32, p: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("moduli differ: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("memory budget exceeded: need {needed} bytes, budget {budget} bytes")]
    BudgetExceeded { needed: u64, budget: u64 },

    #[error("search inconclusive: {0}")]
    Inconclusive(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("data integrity: {0}")]
    DataIntegrity(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("report serialization: {0}")]
    Serialization(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Serialization(err.to_string())
    }
}
