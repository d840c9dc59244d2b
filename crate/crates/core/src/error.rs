use thiserror::Error;

/// Errors raised by state construction, measures, pulse compilation and the
/// protocol simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("amplitude vector has length {len}, expected 2^{n_qubits} = {expected}")]
    LengthMismatch {
        n_qubits: usize,
        len: usize,
        expected: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("operation needs at least {min} qubits, got {got}")]
    TooFewQubits { min: usize, got: usize },

    #[error("qubit {0} appears more than once")]
    RepeatedQubit(usize),

    #[error("matrix is not unitary (max deviation of U^dagger U from identity: {0:e})")]
    NotUnitary(f64),

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("outcome has probability {0:e}; cannot condition on it")]
    ImpossibleOutcome(f64),

    #[error("full-joint simulation needs {needed} qubits; dense limit is {limit}")]
    Infeasible { needed: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Error::Io(e.to_string())
        } else {
            Error::Format(e.to_string())
        }
    }
}
