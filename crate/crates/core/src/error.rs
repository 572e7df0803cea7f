use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Caller passed arguments outside an operation's contract.
    #[error("usage error: {0}")]
    Usage(String),
    /// Generator parameters are inconsistent or too coarse.
    #[error("configuration error: {0}")]
    Config(String),
    /// A mesh or quotient could not be built as a valid simplicial surface.
    #[error("construction error: {0}")]
    Construction(String),
    /// Input data violates an invariant (non-isometric action, asymmetric metric, ...).
    #[error("data error: {0}")]
    Data(String),
    /// Numeric input outside a function's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Profiles could not be assembled into a constructible function.
    #[error("assembly error: {0}")]
    Assembly(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub(crate) fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }
    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}
