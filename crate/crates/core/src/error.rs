use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("{what} exceeds the supported size ({limit})")]
    TooLarge { what: &'static str, limit: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("coordinates leave the alpha/8 grid")]
    GridOverflow,
    #[error("exponent {0}/{1} is not on the q^(1/48) grid")]
    OffGrid(i64, i64),
    #[error("series division by a non-unit leading coefficient")]
    NonUnitDivisor,
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("defect: {0}")]
    Defect(String),
}

pub type Result<T> = std::result::Result<T, Error>;
