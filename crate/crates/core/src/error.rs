use thiserror::Error;

use crate::spectral::SpectralError;

/// Failures of the physical solvers and diagnostics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("density not positive: min = {min:e} (floor {floor:e})")]
    DensityNonPositive { min: f64, floor: f64 },
    #[error("height mismatch: h = {h}, 1 - exp(-H) = {expected}")]
    HeightMismatch { h: f64, expected: f64 },
    #[error("linear solve did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("fixed-point iteration diverged after {iterations} iterations (update {residual:e})")]
    PicardDiverged { iterations: usize, residual: f64 },
    #[error("CFL violation: dt = {dt:e} exceeds {limit:e}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("time step {dt:e} too large for the sixth-order density coupling (limit {limit:e})")]
    StiffStep { dt: f64, limit: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = SolverError> = std::result::Result<T, E>;

pub(crate) fn check_density(min: f64, floor: f64) -> Result<()> {
    if min > floor && min.is_finite() {
        Ok(())
    } else {
        Err(SolverError::DensityNonPositive { min, floor })
    }
}
