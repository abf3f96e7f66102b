use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input text; `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally valid input that breaks a model invariant.
    #[error("invalid input: {0}")]
    Validation(String),

    /// A caller-supplied parameter is outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The instance is outside the regime where the algorithm is defined.
    #[error("parameter regime: {0}")]
    Regime(String),

    /// The requested coverage target cannot be met by any family of sets.
    #[error("cannot cover {target} elements; the union of all sets has {reachable}")]
    Uncoverable { target: usize, reachable: usize },

    /// An exhaustive oracle refused an instance that is too large.
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
