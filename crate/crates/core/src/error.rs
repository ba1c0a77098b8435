use thiserror::Error;

/// A failure while reading one of the line-oriented text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number; 0 when the problem is not tied to a line (e.g. missing header).
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Arguments that violate an operation's preconditions (bad subsets, indices, sizes).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Parameters outside the domain where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request would exceed the memory or time budget of a dense backend.
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("unknown state name `{0}`")]
    UnknownState(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// The rank and statevector backends reached different verdicts.
    #[error("backends disagree on subset {subset:?}: {detail}")]
    BackendDisagreement { subset: Vec<usize>, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
