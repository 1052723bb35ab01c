use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no root: {0}")]
    NoRoot(String),

    /// The requested integral (or a norm built on it) is infinite.
    #[error("divergent: {0}")]
    Divergent(String),

    /// Adaptive subdivision hit its depth limit before meeting the tolerance.
    #[error("quadrature did not converge: {0}")]
    NotConverged(String),

    #[error("pole at p = {0}")]
    Pole(f64),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by an infinite or unresolved numerical quantity
    /// rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergent(_) | Error::NotConverged(_) | Error::Pole(_) | Error::NonFinite(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
