use thiserror::Error;

/// Errors raised while building or computing with (X,M)-graphs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: wrong table sizes, out-of-range indices and the like.
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    /// An algebraic law failed; `detail` names the offending elements.
    #[error("{law} violated: {detail}")]
    Law { law: &'static str, detail: String },

    /// A search or construction would exceed its configured size bound.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("theory mismatch: {0}")]
    TheoryMismatch(String),

    #[error("not composable: {0}")]
    NotComposable(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn law(law: &'static str, detail: impl Into<String>) -> Self {
        Error::Law {
            law,
            detail: detail.into(),
        }
    }
}
