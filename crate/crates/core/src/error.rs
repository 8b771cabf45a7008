use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("binomial coefficient C({n}, {k}) does not fit in 64 bits")]
    Overflow { n: u64, k: u64 },

    #[error("invalid sector shape: {0}")]
    InvalidShape(String),

    #[error("invalid occupation set: {0}")]
    InvalidSet(String),

    #[error("rank {rank} out of range for a space of dimension {dimension}")]
    RankOutOfRange { rank: u64, dimension: u64 },

    #[error("FCIDUMP line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{qubits}-qubit register exceeds the configured cap of {cap} qubits")]
    TooLarge { qubits: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("statevector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("excitation target rank {0} is used by more than one parameter")]
    DuplicateTarget(u64),

    #[error("parameter vector has {got} entries, expected {expected}")]
    ParameterCount { expected: usize, got: usize },

    #[error("non-finite energy {energy} at iteration {iteration}")]
    NonFinite { iteration: usize, energy: f64 },

    #[error("malformed Pauli term: {0}")]
    PauliFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
