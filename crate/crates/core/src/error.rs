use thiserror::Error;

/// Errors produced by the estimators, generators and the Monte Carlo harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {what} at row {row}")]
    NonFinite { what: &'static str, row: usize },

    #[error("design matrix is rank deficient (condition estimate {condition:.3e})")]
    RankDeficient { condition: f64 },

    #[error("standard error of coefficient {index} is zero")]
    ZeroStandardError { index: usize },

    #[error("coefficient index {index} out of range for p = {p}")]
    IndexOutOfRange { index: usize, p: usize },

    #[error("invalid level {0}: must lie strictly between 0 and 1")]
    InvalidLevel(f64),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("every time point of the time-varying fit is rank deficient")]
    AllPointsFailed,

    #[error("time point {t} has no estimate (rank-deficient window)")]
    FailedPoint { t: usize },

    #[error("mask has {observed} observed rows, need at least {p}")]
    EmptyMask { observed: usize, p: usize },

    #[error("GARCH(1,1) spec is not covariance stationary: {0}")]
    NonStationary(String),

    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),

    #[error("invalid model spec: {0}")]
    InvalidSpec(String),

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("robust correlation statistic has zero denominator at lag {lag}")]
    ZeroDenominator { lag: usize },

    #[error("series of length {n} is too short for lag {lag}")]
    SeriesTooShort { n: usize, lag: usize },

    #[error("{failed} of {total} replications failed (limit is 1%)")]
    TooManyFailures { failed: usize, total: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
