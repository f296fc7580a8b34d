use thiserror::Error;

use crate::torus::SolverReport;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("metric is not positive definite (smallest Cholesky pivot {pivot:e})")]
    NotPositiveDefinite { pivot: f64 },

    #[error("matrix is not Hermitian (max |M - M*| = {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("bad index set: {0}")]
    BadIndexSet(String),

    #[error("restricted spectrum has {restricted} values but the full spectrum has {full}")]
    SizeMismatch { full: usize, restricted: usize },

    #[error("cotangent undefined at theta = {0}")]
    UndefinedCotangent(f64),

    #[error("angle {0} is not supercritical (outside (0, pi))")]
    NotSupercritical(f64),

    #[error("complex volume vanishes (|gamma(1)| = {0:e})")]
    ZeroVolume(f64),

    #[error("gamma vanishes on the path at t = {0}")]
    RootOnPath(f64),

    #[error("operation requires complex dimension 3, got {0}")]
    WrongDimension(usize),

    #[error("invalid intersection profile: {0}")]
    InvalidProfile(String),

    #[error("invalid subvariety data: {0}")]
    InvalidSubvariety(String),

    #[error("invalid torus model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("deformed metric degenerates at grid point {0}")]
    MetricDegenerate(usize),

    #[error("pointwise angle left (0, pi): range [{min}, {max}]")]
    AngleRangeViolation { min: f64, max: f64 },

    #[error(
        "Newton iteration did not converge after {} iterations (residual {:e})",
        .0.iterations,
        .0.residual_sup
    )]
    NotConverged(Box<SolverReport>),

    #[error("continuation stalled at deformation amplitude {amplitude}")]
    ContinuationStalled {
        amplitude: f64,
        last_converged: f64,
        report: Box<SolverReport>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
