use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not unitary (unitarity residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("state vector has {len} amplitudes, expected a power of two")]
    NotPowerOfTwo { len: usize },
    #[error("state vector is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("invalid two-level indices ({i}, {j}) for dimension {dim}")]
    TwoLevelIndex { dim: usize, i: usize, j: usize },
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit {0} used more than once by the same gate")]
    QubitClash(usize),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("{message} line {line}")]
    Parse { line: usize, message: String },
    #[error("inner products disagree at ({i}, {j}): inputs {lhs}, targets {rhs}")]
    GramMismatch {
        i: usize,
        j: usize,
        lhs: num_complex::Complex64,
        rhs: num_complex::Complex64,
    },
    #[error("{0} qubits requested, at most {1} supported")]
    TooManyQubits(usize, usize),
    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
