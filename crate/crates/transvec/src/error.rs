//! Crate-wide error type with stable categories.
//!
//! The CLI maps categories onto process exit codes, so variants are chosen
//! by how a failure should be reported rather than by where it arose.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (Pauli strings, code files, circuit files).
    #[error("parse error: {0}")]
    Parse(String),

    /// A well-formed request that the receiving operation cannot accept.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Code validation produced one or more violated invariants.
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// Input exceeds a documented size gate (dense oracle, table decoders).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The symbolic propagation engine cannot represent this circuit.
    #[error("unsupported circuit: {0}")]
    UnsupportedCircuit(String),

    /// A contract that valid inputs can never break was broken anyway.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Process exit code used by the CLI for this error category.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::InvalidArgument(_) | Error::UnsupportedCircuit(_) => 2,
            Error::Io(_) => 2,
            Error::Validation(_) => 3,
            Error::Capacity(_) => 4,
            Error::Internal(_) => 5,
        }
    }
}
