use thiserror::Error;

/// Errors produced anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree {degree} exceeds the limit of {limit}")]
    DegreeOverflow { degree: usize, limit: usize },
    #[error("{0} is not a supported prime modulus")]
    BadModulus(u64),
    #[error("operands live over different primes ({0} and {1})")]
    ModulusMismatch(u32, u32),
    #[error("inconsistent structure: {0}")]
    InconsistentStructure(String),
    #[error("precision must be at least 1")]
    EmptyPrecision,
    #[error("requested index {requested} but only {available} coefficients are known")]
    PrecisionExceeded { requested: usize, available: usize },
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("no interpretation for letter {0}")]
    MissingInterpretation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not defined: {0}")]
    NotDefined(String),
    #[error("bad preset: {0}")]
    BadPreset(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
