use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A table or sweep was asked to cover more than the configured budget,
    /// or a count no longer fits the integer width used to hold it.
    #[error("capacity exceeded: {what} (requested {requested}, maximum {maximum})")]
    Capacity {
        what: &'static str,
        requested: u128,
        maximum: u128,
    },

    #[error("{what} = {value} is outside the valid range {range}")]
    OutOfRange {
        what: &'static str,
        value: i128,
        range: String,
    },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("limit mismatch: {left} vs {right}")]
    LimitMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, value: impl Into<i128>, range: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            value: value.into(),
            range: range.into(),
        }
    }
}
