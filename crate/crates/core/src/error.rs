use thiserror::Error;

/// Errors raised by the geometric kernels, walk machinery and harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Coordinates, parameters or space kinds that do not fit together.
    #[error("domain error: {0}")]
    Domain(String),
    /// A sampled point sits on a pole, so separation cannot be decided.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    /// A family of curtains fails the chain condition at the given indices.
    #[error("not a chain: curtains {0} and {1} violate separation")]
    NotAChain(usize, usize),
    /// Drift is statistically indistinguishable from zero.
    #[error("drift indistinguishable from zero: {0}")]
    ZeroDrift(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
