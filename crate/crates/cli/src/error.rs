use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] eigenbound::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// Some sweep rows or corpus scenarios failed; the output was written.
    #[error("{failed} of {total} items failed")]
    Partial { failed: usize, total: usize, code: i32 },
    #[error("bound violated: {0}")]
    Violation(String),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    exit_code: i32,
    message: String,
}

#[derive(Serialize)]
struct ErrorEnvelope<'a> {
    error: ErrorBody<'a>,
}

/// Exit code for a library error.
pub fn core_exit_code(err: &eigenbound::Error) -> i32 {
    if err.is_solver_failure() {
        3
    } else {
        2
    }
}

pub fn core_kind(err: &eigenbound::Error) -> &'static str {
    use eigenbound::Error::*;
    match err {
        Domain(_) => "domain",
        InfeasibleVolume { .. } => "infeasible_volume",
        InvalidInput(_) => "invalid_input",
        Regime(_) => "regime",
        Integrator { .. } => "integrator",
        BracketExhausted { .. } => "bracket_exhausted",
        NoConvergence { .. } => "no_convergence",
        Mesh(_) => "mesh",
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Core(e) => core_exit_code(e),
            CliError::Partial { code, .. } => *code,
            CliError::Violation(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Core(e) => core_kind(e),
            CliError::Partial { .. } => "partial_failure",
            CliError::Violation(_) => "violation",
        }
    }

    /// One-line JSON for standard error.
    pub fn to_json(&self) -> String {
        let envelope = ErrorEnvelope {
            error: ErrorBody {
                kind: self.kind(),
                exit_code: self.exit_code(),
                message: self.to_string(),
            },
        };
        serde_json::to_string(&envelope).expect("error envelope serializes")
    }
}
