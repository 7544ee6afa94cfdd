use thiserror::Error;

/// Errors raised by the library. Each variant carries a human-readable detail.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("ambiguous nullspace: {0}")]
    Ambiguity(String),
    #[error("inconsistent result: {0}")]
    Consistency(String),
    #[error("singular parameter: {0}")]
    SingularParameter(String),
    #[error("not a kernel: {0}")]
    Kernel(String),
    #[error("degenerate seed: {0}")]
    DegenerateSeed(String),
    #[error("needs field extension: {0}")]
    NeedsExtension(String),
    #[error("chart error: {0}")]
    Chart(String),
    #[error("closure diverged: {0}")]
    Divergence(String),
    #[error("ambiguous orbit: {0}")]
    AmbiguousOrbit(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::Ambiguity(_) => "AmbiguityError",
            Error::Consistency(_) => "ConsistencyError",
            Error::SingularParameter(_) => "SingularParameter",
            Error::Kernel(_) => "KernelError",
            Error::DegenerateSeed(_) => "DegenerateSeed",
            Error::NeedsExtension(_) => "NeedsExtension",
            Error::Chart(_) => "ChartError",
            Error::Divergence(_) => "DivergenceError",
            Error::AmbiguousOrbit(_) => "AmbiguousOrbit",
            Error::Internal(_) => "InternalError",
            Error::Io(_) => "IOError",
        }
    }

    pub fn detail(&self) -> &str {
        match self {
            Error::Domain(s)
            | Error::Ambiguity(s)
            | Error::Consistency(s)
            | Error::SingularParameter(s)
            | Error::Kernel(s)
            | Error::DegenerateSeed(s)
            | Error::NeedsExtension(s)
            | Error::Chart(s)
            | Error::Divergence(s)
            | Error::AmbiguousOrbit(s)
            | Error::Internal(s)
            | Error::Io(s) => s,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain;
