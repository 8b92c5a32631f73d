use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Inconsistent shapes or game structure.
    #[error("structural error: {0}")]
    Structural(String),

    /// An input lies outside the domain of the operation (e.g. `ln 0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// An invalid parameter value.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Overflow or a non-finite value appeared during a run.
    #[error("numerical failure at step {step}: {message}")]
    Numerical { step: usize, message: String },

    /// An iterative method ran out of iterations.
    #[error("{method} did not converge after {iterations} iterations (last estimate {estimate})")]
    NonConvergence {
        method: &'static str,
        iterations: usize,
        estimate: f64,
    },

    /// The annealer's first run failed the convergence test, so the
    /// starting rates were not inside the stable region.
    #[error("initial threshold did not converge (window spread {spread:e})")]
    InitialNotConverged { spread: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// True for the failures a caller should treat as bad input rather than
    /// a numerical breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Structural(_) | Error::Domain(_) | Error::Argument(_) | Error::Json(_)
        )
    }
}
