use thiserror::Error;

/// Faults raised by state construction, circuit execution and metrics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("operator of arity {arity} applied to {targets} targets")]
    ArityMismatch { arity: usize, targets: usize },

    #[error("operator is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("observable is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("channel is not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("state is not physical: {0}")]
    Unphysical(String),

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("error mode mismatch: expected {expected}")]
    ModeMismatch { expected: &'static str },

    #[error("measurement label `{0}` used more than once")]
    LabelCollision(String),

    #[error("partial trace needs at least one kept qubit")]
    EmptyKeep,

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("T2 = {t2} ns exceeds 2*T1 = {two_t1} ns on qubit {qubit}")]
    InvalidCoherence { qubit: usize, t2: f64, two_t1: f64 },

    #[error("readout eps + veto = {0} exceeds 1")]
    InvalidReadout(f64),

    #[error("circuit text, line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
