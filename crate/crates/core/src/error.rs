use thiserror::Error;

/// Failure to parse a coefficient or Pauli-sum literal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ParseValueError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("register must contain at least one qubit")]
    EmptyRegister,

    #[error("qubit index {index} out of range for a {n}-qubit register")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("gate operands must be distinct (qubit {0} repeated)")]
    DuplicateOperands(usize),

    #[error("step {step}: {source}")]
    Step { step: usize, source: Box<Error> },

    #[error("empty qubit subset")]
    EmptySubset,

    #[error("state is not pure on the given pair (purity sum {0})")]
    NotPure(String),

    #[error("malformed relative context: {0}")]
    MalformedContext(String),

    #[error("POVM elements do not resolve the identity: {0}")]
    NotResolution(String),

    #[error("qubit {0} was not measured by a later ancilla")]
    ChainNotConstructed(usize),

    #[error("basis rotation touches qubit {found}, expected only {system}")]
    RotationOutsideSystem { system: usize, found: usize },

    #[error("unsupported register size {n} (supported: {supported})")]
    UnsupportedSize { n: usize, supported: &'static str },

    #[error("seed descriptor set does not reproduce the density")]
    SeedMismatch,

    #[error("seed descriptor set is not a well-formed basis: {0}")]
    SeedInvalid(String),

    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),

    #[error("empty dictionary")]
    EmptyDictionary,

    #[error("dictionary entry {0} is not a pure state on the subset")]
    ImpureDictionaryEntry(usize),

    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("projection residual {0:e} exceeds tolerance")]
    Residual(f64),

    #[error("outcome has negligible probability {0:e}")]
    ZeroProbability(f64),

    #[error("value is not divisible exactly: {0}")]
    Inexact(String),
}

pub type Result<T> = std::result::Result<T, Error>;
