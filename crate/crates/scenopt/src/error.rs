//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty component list")]
    EmptyChain,

    #[error("shifted-square-root domain violation: {0}")]
    SqrtDomain(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid wrapper: {0}")]
    InvalidWrapper(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("empty scenario set")]
    EmptyScenarios,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("missing constants: {0}")]
    MissingConstants(String),

    #[error("unbounded support: {0}")]
    UnboundedSupport(String),

    /// Covering-number bounds are only derived above a minimal scale;
    /// inputs below it are refused rather than extrapolated.
    #[error("covering-scale precondition violated: {0}")]
    CoveringScale(String),

    #[error("budget too small for target (epsilon, delta): {0}")]
    BudgetTooSmall(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("nothing to do: {0}")]
    NothingToDo(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
