use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value outside the universe, or an interval with `lo > hi`.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mixed algebra configurations, unknown names, bad parameters.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn mixed_configs() -> Self {
        Error::Usage("operands belong to different algebra configurations".into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
