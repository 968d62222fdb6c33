use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MzvError {
    #[error("invalid index syntax: {0:?}")]
    IndexSyntax(String),
    #[error("invalid word syntax: {0:?}")]
    WordSyntax(String),
    #[error("word {0} is not in H^1 (must be empty or start with e1)")]
    NotInH1(String),
    #[error("word {0} is not admissible (must be empty or start with e1 and end with e0)")]
    NotAdmissible(String),
    #[error("operand must be a non-empty index")]
    EmptyIndex,
    #[error("index position {pos} out of range for depth {depth}")]
    OutOfRange { pos: usize, depth: usize },
    #[error("word too long: {0} letters (limit 64)")]
    WordTooLong(usize),
    #[error("poset too large: {0} elements (limit 64)")]
    PosetTooLarge(usize),
    #[error("linear extension count overflowed")]
    CountOverflow,
    #[error("weight must be at least {min}, got {got}")]
    WeightTooSmall { min: u32, got: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("ragged matrix: row {row} has {got} columns, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
    #[error("coefficient series truncated at degree {have}, need {need}")]
    SeriesTooShort { have: usize, need: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, MzvError>;
