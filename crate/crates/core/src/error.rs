use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("operator degree {op} exceeds polynomial degree {poly}")]
    DegreeTooHigh { op: u32, poly: u32 },
    #[error("term {0} does not have the declared degree")]
    NotHomogeneous(String),
    #[error("partition has {parts} parts but only {vars} variables")]
    TooManyParts { parts: usize, vars: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("instance too large: {what} = {value} exceeds guard {guard}")]
    TooLarge {
        what: &'static str,
        value: usize,
        guard: usize,
    },
    #[error("relation is not a strict partial order: {0}")]
    NotAPartialOrder(String),
    #[error("elements {0:?} do not form a chain")]
    NotAChain(Vec<usize>),
    #[error("chain of length {len} is too short (need at least {min})")]
    ChainTooShort { len: usize, min: usize },
    #[error("sample point {0} has a negative coordinate")]
    NegativeSamplePoint(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
