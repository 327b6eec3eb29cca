use thiserror::Error;

/// Failures raised by the numeric kernels and model routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} sweeps")]
    Convergence { iterations: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("hypothesis not satisfied: {0}")]
    Precondition(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("integration diverged at t = {t}")]
    Divergence { t: f64 },

    #[error("residual check failed: {0}")]
    Residual(String),
}

impl Error {
    /// True for failures caused by the numerics rather than by the request.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::Convergence { .. } | Error::Divergence { .. } | Error::Residual(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
