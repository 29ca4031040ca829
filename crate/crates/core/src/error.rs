use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A function or operation was evaluated outside of where it is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// The spherical chart is undefined on the real axis and on the z-axis.
    #[error("chart singularity: {0}")]
    ChartSingularity(String),
    #[error("function kind mismatch: {0}")]
    Kind(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid region: {0}")]
    Region(String),
    #[error("invalid function spec: {0}")]
    Spec(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
