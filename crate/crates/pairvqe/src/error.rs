use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("invalid excitation: {0}")]
    InvalidExcitation(String),

    #[error("FCIDUMP line {line}: {msg}")]
    Fcidump { line: usize, msg: String },

    #[error("invalid molecular system: {0}")]
    InvalidSystem(String),

    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),

    #[error("compile error: {0}")]
    Compile(String),

    #[error("simulation error: {0}")]
    Simulation(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("parameter `{0}` has no value")]
    UnassignedParameter(String),

    #[error("parameter `{0}` does not appear in the circuit")]
    UnknownParameter(String),

    #[error("circuit is not separable into pairs: {0}")]
    NonSeparable(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("optimizer failure: {msg}")]
    Optimizer { msg: String, params: Vec<f64> },

    #[error("circuit text line {line}: {msg}")]
    CircuitText { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
