use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A resource guard refused the request (enumeration too large).
    #[error("{what}: n = {n} exceeds the limit {max} (use an explicit override to proceed)")]
    SizeLimit {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("ground-set size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid cycle notation {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("not a non-crossing partition: {0}")]
    NotNonCrossing(String),

    #[error("series bounds do not match: {0}")]
    BoundMismatch(String),

    #[error("series has a nonzero constant term")]
    ConstantTerm,

    #[error("irreducible table does not cover the request: {0}")]
    Coverage(String),

    #[error("structure violation: {0}")]
    StructureViolation(String),

    #[error("corrupted cache file {path}: {reason} (delete it to recompute)")]
    Integrity { path: PathBuf, reason: String },

    #[error("asymptotic hypothesis fails for r = {r}: P~_r(1) = 0")]
    Hypothesis { r: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(text: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            text: text.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn check_same_n(left: usize, right: usize) -> Result<()> {
        if left == right {
            Ok(())
        } else {
            Err(Error::SizeMismatch { left, right })
        }
    }
}
