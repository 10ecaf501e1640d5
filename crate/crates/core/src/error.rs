use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a closed-form function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible volume {volume} for curvature {curvature} in dimension {dim} (space form volume {total})")]
    InfeasibleVolume {
        volume: f64,
        curvature: f64,
        dim: usize,
        total: f64,
    },

    /// Malformed or inconsistent input (dimension, counts, file contents).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Inputs are well formed but outside the regime an operation covers.
    #[error("regime violation: {0}")]
    Regime(String),

    #[error("ODE integrator failed at r = {at}: {reason}")]
    Integrator { at: f64, reason: String },

    #[error("no sign change of the shooting miss found up to mu = {mu_hi}")]
    BracketExhausted { mu_hi: f64 },

    #[error("{what} did not converge after {iterations} iterations (last change {change:e}, residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        change: f64,
        residual: f64,
    },

    #[error("mesh error: {0}")]
    Mesh(String),
}

impl Error {
    /// True for failures of a numerical solver, as opposed to bad inputs.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::Integrator { .. } | Error::BracketExhausted { .. } | Error::NoConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
