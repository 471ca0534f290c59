use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("invalid code distance {0}: must be odd and at least 3")]
    InvalidDistance(usize),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("check type mismatch: {0}")]
    CheckTypeMismatch(String),
    #[error("invalid circuit request: {0}")]
    InvalidCircuit(String),
    #[error("circuit construction invariant violated: {0}")]
    ConstructionInvariant(String),
    #[error("odd number of detection events ({0})")]
    OddDefects(usize),
    #[error("fault enumeration needs {needed} assignments, above the exact bound {bound}; enable sampling")]
    CombinatorialBound { needed: u128, bound: u128 },
    #[error("config error in field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("mismatched grids: {0}")]
    MismatchedGrids(String),
    #[error("empty table")]
    EmptyTable,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
