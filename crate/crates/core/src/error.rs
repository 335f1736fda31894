use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A sequence, comparator or schedule does not fit the object it is applied to.
    #[error("structural error: {0}")]
    Structural(String),

    /// A generator or search was called with out-of-range parameters.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Malformed knet text. `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The requested work does not fit the configured budget. `progress` counts
    /// the units of work that completed before the limit was hit.
    #[error("resource budget exceeded: {msg} (progress: {progress})")]
    Resource { msg: String, progress: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
