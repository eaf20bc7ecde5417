use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violated a documented precondition.
    #[error("validation error: {0}")]
    Validation(String),

    /// A function was evaluated outside the set where it is finite.
    #[error("domain error: {0}")]
    Domain(String),

    /// The simulated state stopped being finite.
    #[error("non-finite state at t = {time} ({detail})")]
    Explosion { time: f64, detail: String },

    /// A numerical routine produced an inconsistent result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A moment hierarchy needs moments beyond the computed triangle.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// The operation is not available for this law.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A replica in an ensemble failed.
    #[error("replica {replica}: {source}")]
    Replica {
        replica: u64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
