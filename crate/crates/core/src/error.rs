use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("out of truncation: {0}")]
    OutOfTruncation(String),

    #[error("invalid simplicial set ({} violations): {}", .0.len(), .0.first().map(String::as_str).unwrap_or(""))]
    InvalidSSet(Vec<String>),

    #[error("invalid simplicial map: {0}")]
    InvalidSMap(String),

    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),

    #[error("not a discrete fibration: {0}")]
    NotDiscFib(String),

    #[error("not a right fibration: {0}")]
    NotRightFibration(String),

    #[error("square does not commute: {0}")]
    NonCommuting(String),

    #[error("budget exceeded after {steps} steps: {what}")]
    BudgetExceeded { steps: usize, what: String },

    #[error("decomposition routes disagree: {0}")]
    RouteDisagreement(String),

    #[error("invalid ordinal map: {0}")]
    InvalidOrdinalMap(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
