use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {field}: {reason}")]
    Config { field: String, reason: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("schema mismatch in {path}: {diff}")]
    Schema { path: PathBuf, diff: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn config(field: &str, reason: impl Into<String>) -> Self {
        RunError::Config { field: field.to_string(), reason: reason.into() }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        RunError::Io { context: context.into(), source }
    }

    /// 2 for configuration errors, 1 for everything that fails at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config { .. } => 2,
            _ => 1,
        }
    }
}

impl From<kicktop::Error> for RunError {
    fn from(err: kicktop::Error) -> Self {
        use kicktop::Error as E;
        match err {
            E::InvalidParameter { name, reason } => RunError::config(name, reason),
            E::TooFewQubits { got, min } => RunError::config("N", format!("needs at least {min} qubits, got {got}")),
            other => RunError::Numerical(other.to_string()),
        }
    }
}
