use thiserror::Error;

/// Errors shared by every operator in the crate.
#[derive(Debug, Clone, Error)]
pub enum HalfwaveError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fractional order must lie in (0, 1], got {0}")]
    InvalidOrder(f64),

    #[error("input does not decay at the grid ends: |u|/max|u| = {observed:.3e} exceeds {tolerance:.3e}")]
    DecayViolation { observed: f64, tolerance: f64 },

    #[error("cut-off scale {scale} does not fit inside the grid extent [{t_min}, {t_max}]")]
    ScaleTooLarge { scale: f64, t_min: f64, t_max: f64 },

    #[error("no convergence after {iterations} iterations, best residual {best_residual:.6e}")]
    NonConvergence {
        iterations: usize,
        best_residual: f64,
    },

    #[error("flux failed its structural audit: {violations} violations over {samples} samples")]
    FluxAuditFailure { violations: usize, samples: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, HalfwaveError>;
