use serde_json::json;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] asymwell::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("output: {0}")]
    Output(String),

    #[error("{failed} verification check(s) failed")]
    VerifyFailed { failed: usize },
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Core(e) => core_kind(e),
            CliError::Io(_) => "io",
            CliError::Output(_) => "output",
            CliError::VerifyFailed { .. } => "verification",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Core(e) => core_exit_code(e),
            CliError::Output(_) => EXIT_CONFIG,
            CliError::VerifyFailed { .. } => EXIT_VERIFY_FAILED,
        }
    }

    /// Single-line JSON for stderr.
    pub fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
            .to_string()
    }
}

fn core_kind(e: &asymwell::Error) -> &'static str {
    use asymwell::Error::*;
    match e {
        Construction(_) => "construction",
        Shape(_) => "shape",
        NoBarrier { .. } => "no_barrier",
        Domain(_) => "domain",
        Range(_) => "range",
        Singular(_) => "singular",
        Precondition(_) => "precondition",
        DegeneracyStructure { .. } => "degeneracy_structure",
        Coverage(_) => "coverage",
        Solver(_) => "solver",
        Validity(_) => "validity",
        UndefinedAngle => "undefined_angle",
        Input(_) => "input",
        Internal(_) => "internal",
    }
}

/// Setup problems exit with 2, numerical failures with 3.
pub fn core_exit_code(e: &asymwell::Error) -> i32 {
    use asymwell::Error::*;
    match e {
        Construction(_) | Shape(_) | NoBarrier { .. } | Precondition(_) | Input(_) => EXIT_CONFIG,
        Domain(_) | Range(_) | Singular(_) | DegeneracyStructure { .. } | Coverage(_) | Solver(_) | Validity(_)
        | UndefinedAngle | Internal(_) => EXIT_NUMERIC,
    }
}
