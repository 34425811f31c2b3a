use thiserror::Error;

/// Errors raised by circuit construction and simulation.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("qubit index {index} out of range for {qubit_count} qubits")]
    QubitOutOfRange { index: usize, qubit_count: usize },

    #[error("gate targets and controls overlap on qubit {0}")]
    ControlTargetOverlap(usize),

    #[error("duplicate qubit {0} in gate operands")]
    DuplicateQubit(usize),

    #[error("matrix of dimension {dim} is not unitary (deviation {deviation:.3e})")]
    NonUnitary { dim: usize, deviation: f64 },

    #[error("matrix dimension {dim} is not a power of two or exceeds the 2^{max} limit")]
    BadMatrixDim { dim: usize, max: usize },

    #[error("matrix on {expected} qubits applied to {got} target qubits")]
    MatrixTargetMismatch { expected: usize, got: usize },

    #[error("circuit on {expected} qubits run against a state of {got} qubits")]
    RegisterMismatch { expected: usize, got: usize },

    #[error("non-finite gate angle {0}")]
    NonFiniteAngle(f64),

    #[error("measurement register of {0} qubits exceeds the sampling limit of 24")]
    RegisterTooWide(usize),

    #[error("qubit map of length {got} does not cover circuit of {expected} qubits")]
    BadQubitMap { expected: usize, got: usize },
}
