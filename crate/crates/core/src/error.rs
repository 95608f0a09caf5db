use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("gamma function pole at non-positive integer {0}")]
    GammaPole(String),

    #[error(
        "quadrature did not converge after level {level}: last {last}, previous {previous} (relative change {change})"
    )]
    NonConvergence {
        level: u32,
        last: String,
        previous: String,
        change: String,
    },

    #[error("Hankel matrix of order {order} is not positive definite at {digits} digits")]
    NotPositiveDefinite { order: usize, digits: u32 },

    #[error("tridiagonal eigenvalue iteration did not converge")]
    EigenNonConvergence,

    #[error("invalid precision setting: {0}")]
    Precision(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
