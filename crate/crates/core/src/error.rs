use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An integral did not reach the requested tolerance within the node budget.
    #[error(
        "quadrature did not converge: best estimate {estimate:e}, error estimate {error_estimate:e} after {evaluations} evaluations"
    )]
    Convergence {
        estimate: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// The moment targets cannot come from any beta marginal.
    #[error("infeasible moments: {0}")]
    InfeasibleMoments(String),

    /// Data too small or without spread to estimate moments from.
    #[error("degenerate data: {0}")]
    DegenerateData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
