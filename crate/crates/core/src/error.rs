use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("{what} failed to converge: {detail}")]
    Convergence { what: &'static str, detail: String },

    #[error("matrix is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rank deficient: {0}")]
    RankDeficient(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("bracketing failed: {0}")]
    Bracketing(String),

    #[error("target power {target} unattainable in [{lo}, {hi}] (power at upper end {power_at_hi:.4})")]
    Unattainable {
        target: f64,
        lo: u64,
        hi: u64,
        power_at_hi: f64,
    },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("eigenvalue crossing: top gap {gap:e} below {limit:e}")]
    EigenCrossing { gap: f64, limit: f64 },
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { func, msg: msg.into() }
    }

    pub(crate) fn convergence(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Convergence {
            what,
            detail: detail.into(),
        }
    }
}
