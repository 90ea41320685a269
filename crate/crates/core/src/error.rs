use thiserror::Error;

/// Errors raised by the simulation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndexOutOfRange { index: u64, dim: u64 },

    #[error("capacity exceeded: {what} requested {requested}, limit {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("control and target must differ (both {0})")]
    SameQubit(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {value} at grid point x_{index} does not fit in {bits} ancilla bits")]
    AncillaOverflow { index: usize, value: f64, bits: u32 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("distribution is not localized (fitted slope {slope})")]
    NotLocalized { slope: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {value}")))
    }
}

pub(crate) fn check_probability(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {value}")))
    }
}
