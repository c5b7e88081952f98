use thiserror::Error;

/// Failure classes shared by every module.
///
/// The CLI maps [`Error::Parse`] and [`Error::InvalidInput`] to exit code 2,
/// [`Error::Numerical`] to 3 and [`Error::Verification`] / [`Error::NonHolder`]
/// to 4.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    Numerical {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    /// A reduction step whose residual function is not of power type.
    #[error("no Hölderian bound: {0}")]
    NonHolder(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
