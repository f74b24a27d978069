use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty set not representable")]
    EmptySet,

    #[error("invalid interval: lower endpoint {lo} exceeds upper endpoint {hi}")]
    InvertedInterval { lo: String, hi: String },

    #[error("substitution domain violated: set must lie in [0,1]")]
    DomainViolated,

    #[error("tolerance unreachable within budget of {budget} terms")]
    ToleranceUnreachable { budget: usize },

    #[error("coefficient a_{index} is not provided by the series")]
    CoefficientUnavailable { index: usize },

    #[error("eps choice violated: {0}")]
    EpsChoiceViolated(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("polynomial: M_n undefined beyond degree (zero tail at n = {n})")]
    ZeroTail { n: usize },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
