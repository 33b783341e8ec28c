use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("newton iteration did not converge after {iterations} iterations (residual {residual})")]
    NonConvergence { iterations: usize, residual: String },
    #[error("singular jacobian")]
    SingularJacobian,
    #[error("series truncation insufficient: need coefficient {needed}, valid below {available}")]
    TruncationInsufficient { needed: i64, available: i64 },
    #[error("pole at {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("out of one-cut regime: {0}")]
    OutOfRegime(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
}

pub type Result<T> = std::result::Result<T, Error>;
