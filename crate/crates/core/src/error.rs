use thiserror::Error;

/// Errors raised by the verification engine.
///
/// The variants map onto the CLI exit-code classes: `Capacity` and `Coverage`
/// are resource problems, `Domain` and `Precondition` are caller mistakes,
/// `Indeterminate` and `Internal` mean a check could not be decided or an
/// internal cross-check disagreed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("sieve limit {requested} is outside the supported range [2, {cap}]")]
    Capacity { requested: u64, cap: u64 },

    #[error("value {requested} exceeds sieve coverage (limit {limit})")]
    Coverage { requested: u64, limit: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("comparison indeterminate at the maximum precision of {max_bits} bits: {what}")]
    Indeterminate { what: String, max_bits: usize },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("report I/O: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Report(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Report(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Report(e.to_string())
    }
}
