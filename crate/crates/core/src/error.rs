use thiserror::Error;

/// Failures reported by the numeric core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("time step {dt} too coarse: spectrum requires dt <= {bound}")]
    StepTooCoarse { dt: f64, bound: f64 },

    #[error("entanglement period not found: {zeros} zero instant(s), observed minimum {observed_min}")]
    PeriodNotFound { zeros: usize, observed_min: f64 },

    #[error("empty window")]
    EmptyWindow,

    #[error("measure {0} is not available for this series")]
    MeasureUnavailable(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("no interior maximum on the grid")]
    NoInteriorMaximum,
}

pub type Result<T> = std::result::Result<T, Error>;
