use thiserror::Error;

use crate::tournament::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An orientation table or instance that does not describe a valid object.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// Arguments outside an operation's domain (out-of-range vertex, empty set, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Fewer disjoint paths exist than were requested; `separator` is a Menger dual witness.
    #[error("infeasible: {needed} disjoint paths requested, separator of size {} found", separator.len())]
    Infeasible {
        needed: usize,
        separator: Vec<Vertex>,
    },

    #[error("generation failed after {attempts} attempts: {reason}")]
    Generation {
        attempts: usize,
        reason: String,
        log: Vec<String>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }
}
