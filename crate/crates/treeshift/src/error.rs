use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("resource limit exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: u64 },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn resource<T>(what: impl Into<String>, limit: u64) -> Result<T> {
    Err(Error::Resource {
        what: what.into(),
        limit,
    })
}
