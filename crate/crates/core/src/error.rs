use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid generator specification: {0}")]
    InvalidSpec(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("degenerate code: {0}")]
    DegenerateCode(String),
    #[error("infeasible permeability: {0}")]
    InfeasiblePermeability(String),
    #[error("index {index} out of range 0..{bound}")]
    OutOfRange { index: usize, bound: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("truncation cap exceeded: {0}")]
    CapExceeded(String),
    #[error("pattern file: {0}")]
    PatternFormat(String),
    #[error("metric shape mismatch: {0} vs {1}")]
    ShapeMismatch(usize, usize),
    #[error("instance too large for brute force: {0}")]
    TooLarge(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
