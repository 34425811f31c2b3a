use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("grid is not connected")]
    DisconnectedGrid,

    #[error("grid needs at least one generator and one load")]
    MissingNodeKind,

    #[error("unknown node id '{0}' referenced by a line")]
    UnknownNode(String),

    #[error("duplicate line between '{0}' and '{1}'")]
    DuplicateLine(String, String),

    #[error("line endpoints must be distinct (got '{0}' twice)")]
    SelfLoop(String),

    #[error("susceptance must be positive on line {0}-{1}")]
    BadSusceptance(String, String),

    #[error("node '{0}': {1}")]
    BadNode(String, String),

    #[error("susceptance matrix is singular after regularization")]
    SingularMatrix,

    #[error("injection vector of length {got} does not match {expected} nodes")]
    BadInjectionLength { expected: usize, got: usize },

    #[error("active mask covers {got} generators, instance has {expected}")]
    BadActiveMask { expected: usize, got: usize },

    #[error("demands must cover {expected} timesteps (node '{id}' has {got})")]
    BadDemandLength {
        id: String,
        expected: usize,
        got: usize,
    },

    #[error("schedule shape {got_gens}x{got_steps} does not match instance {gens}x{steps}")]
    ScheduleShape {
        gens: usize,
        steps: usize,
        got_gens: usize,
        got_steps: usize,
    },

    #[error("instance with {bits} commitment bits exceeds the brute-force limit of {limit}")]
    TooLargeForBruteForce { bits: usize, limit: usize },

    #[error("demand {demand} MW at timestep {timestep} exceeds total capacity {capacity} MW")]
    InfeasibleDemand {
        timestep: usize,
        demand: f64,
        capacity: f64,
    },

    #[error("committed minimum generation {minimum} MW exceeds demand {demand} MW at timestep {timestep}")]
    OverCommitted {
        timestep: usize,
        demand: f64,
        minimum: f64,
    },

    #[error("generator count {got} does not match cost table of {expected} entries")]
    CostTableMismatch { expected: usize, got: usize },

    #[error("adder weight {0} outside (-1, 1)")]
    WeightOutOfRange(f64),

    #[error("positive adder weights sum to {0} >= 1: fixed-point register would wrap")]
    WeightOverflow(f64),

    #[error("eigenvalue {value} maps to phase {phase} outside (0, 1): shrink the evolution time")]
    EigenvalueOutsideWindow { value: f64, phase: f64 },

    #[error("rotation constant {constant} exceeds the smallest eigenvalue {min_eigenvalue}")]
    RotationConstantTooLarge { constant: f64, min_eigenvalue: f64 },

    #[error("matrix must be symmetric (deviation {0:.3e})")]
    NotSymmetric(f64),

    #[error("amplitude indices must differ")]
    EqualIndices,

    #[error("index {index} out of range for {dim} amplitudes")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("register width {got} does not match required {expected}")]
    RegisterWidth { expected: usize, got: usize },

    #[error("cost table width {got} does not match register width {expected}")]
    TableWidth { expected: usize, got: usize },

    #[error("circuit of {width} qubits exceeds the simulator cap of {cap} (set QUC_QUBIT_CAP to raise it)")]
    QubitBudget { width: usize, cap: usize },

    #[error("diagonal-oracle backend supports at most 10 commitment qubits, instance needs {0}")]
    OracleTooWide(usize),

    #[error("circuit is not block-diagonal over the commitment register: branch {branch} holds {mass} of its mass")]
    NotBlockDiagonal { branch: usize, mass: f64 },

    #[error("all-on injection vector is zero; nothing to amplitude-encode")]
    DegenerateInjections,

    #[error(transparent)]
    Sim(#[from] qsim::SimError),
}
