//! Error type shared by all modules.

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, VortexError>;

/// Everything that can go wrong constructing or evaluating vortex data.
#[derive(Debug, Clone, Error)]
pub enum VortexError {
    #[error("point {point} lies outside the chart (|z| must stay below {valid_radius})")]
    OutOfChart { point: Complex64, valid_radius: f64 },

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error("conformal factor must be positive, found {value} at sample {index}")]
    NonPositiveConformalFactor { index: usize, value: f64 },

    #[error(
        "coefficient pattern {pattern:?} violates the positive flux condition \
         (the flux integral of the vortex polynomial cannot be positive)"
    )]
    PositiveFluxViolation { pattern: Vec<f64> },

    #[error("evaluation at {point} hits a pole of the Higgs field ({detail})")]
    PoleEncountered { point: Complex64, detail: String },

    #[error("metric diverges at {point}: {detail}")]
    DivergentPoint { point: Complex64, detail: String },

    #[error("root finding did not converge: worst scaled residual {residual:.3e} after {iterations} iterations")]
    RootFindingFailed { residual: f64, iterations: usize },

    #[error("Newton iteration diverged after {iterations} iterations, residual {residual:.3e}")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("equation {0} is not supported by this operation")]
    UnsupportedEquation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid rational map: {0}")]
    InvalidMap(String),
}
