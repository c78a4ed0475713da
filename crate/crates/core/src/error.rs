use thiserror::Error;

/// Failures reported by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid construction: {0}")]
    Construction(String),

    #[error("potential shape: {0}")]
    Shape(String),

    #[error("energy {energy} is not below the barrier top {barrier_top}")]
    NoBarrier { energy: f64, barrier_top: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument outside the supported range: {0}")]
    Range(String),

    #[error("singular input: {0}")]
    Singular(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("expected two quantization roots near the level pair, found {found}")]
    DegeneracyStructure { found: usize },

    #[error("grid coverage: {0}")]
    Coverage(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("outside the region where the WKB form holds: {0}")]
    Validity(String),

    #[error("mixing angle undefined: both the detuning and the coupling vanish")]
    UndefinedAngle,

    #[error("invalid input data: {0}")]
    Input(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
