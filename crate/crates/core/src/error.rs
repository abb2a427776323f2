use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("support point requested for a zero direction")]
    ZeroDirection,

    #[error("set distance did not converge after {iterations} iterations (bounds [{lower:e}, {upper:e}])")]
    DistanceNotConverged { iterations: usize, lower: f64, upper: f64 },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    Indefinite(f64),

    #[error("matrix is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("singular linear system")]
    Singular,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("controller order {0} outside the supported range 1..=8")]
    OrderOutOfRange(usize),

    #[error("root {0} does not have a negative real part")]
    NotHurwitz(String),

    #[error("complex roots must come in conjugate pairs")]
    UnpairedComplexRoot,

    #[error("prediction requires real negative roots, got {0}")]
    NotNonOvershooting(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("free space is empty")]
    EmptyFreeSpace,

    #[error("reference path has zero length")]
    DegeneratePath,

    #[error("reference path needs at least 2 waypoints, got {0}")]
    TooFewWaypoints(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("initial safety level {0:e} is not positive")]
    UnsafeStart(f64),

    #[error("initial governor {point:?} is outside the planner domain (path distance {path_distance:e} > clearance {clearance:e})")]
    GovernorOutsideDomain { point: [f64; 2], path_distance: f64, clearance: f64 },

    #[error("step size {step:e} underflowed at t = {t}")]
    StepSizeUnderflow { t: f64, step: f64 },

    #[error("step limit {0} reached")]
    TooManySteps(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}
