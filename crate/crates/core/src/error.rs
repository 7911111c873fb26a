use thiserror::Error;

/// Errors raised by the kicked-top numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count must be at least {min}, got {got}")]
    TooFewQubits { got: usize, min: usize },

    #[error("magnetic number m = {m} is not one of -{j}, -{j}+1, ..., {j}")]
    InvalidMagneticNumber { m: f64, j: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dense expansion of {0} qubits exceeds the oracle limit of {max} qubits", max = crate::entanglement::oracle::MAX_ORACLE_QUBITS)]
    TooLargeForOracle(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be finite, got {value}") })
    }
}
