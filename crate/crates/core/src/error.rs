//! Error taxonomy shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on user-supplied data failed (malformed table, invalid
    /// position, alphabet mismatch, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A configured cap was exceeded or the operation was cancelled.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// Textual input (regex, sum expression, word) failed to parse.
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// A supplied certificate does not match the object it claims to describe.
    /// Carries a concrete witness.
    #[error("certificate error: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}
