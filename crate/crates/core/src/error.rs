use thiserror::Error;

use crate::engine::calibrate::CalibrationTable;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension {dim} exceeds the limit of {max}")]
    SizeLimit { dim: usize, max: usize },

    #[error("register of {qubits} qubits exceeds the limit of {max}")]
    TooManyQubits { qubits: usize, max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("payoff mask is empty")]
    EmptyMask,

    #[error("qubit {qubit} is outside the {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("no payoff convention reproduces the reference payoffs\n{0}")]
    Calibration(Box<CalibrationTable>),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    /// Whether the error comes from an exponential size guard.
    pub fn is_size_limit(&self) -> bool {
        matches!(self, Error::SizeLimit { .. } | Error::TooManyQubits { .. })
    }
}
