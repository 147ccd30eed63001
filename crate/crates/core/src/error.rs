use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("distance out of domain: k*r12 = {kr12} (must be > 0)")]
    DistanceDomain { kr12: f64 },

    #[error("degenerate geometry: J = delta = 0 leaves the single-excitation splitting undefined")]
    DegenerateGeometry,

    #[error("steady state is not unique: null space of the Liouvillian has dimension {dimension}")]
    NonUniqueSteadyState { dimension: usize },

    #[error("steady-state residual {residual:e} exceeds tolerance {tolerance:e}")]
    SteadyStateResidual { residual: f64, tolerance: f64 },

    #[error("resolvent is singular at omega = {omega} (condition estimate {condition:e})")]
    SingularResolvent { omega: f64, condition: f64 },

    #[error("correlation undefined: mean intensity {intensity:e} is zero")]
    UndefinedCorrelation { intensity: f64 },

    #[error(
        "finite-difference derivative did not converge (Richardson disagreement {disagreement:.3}); \
         try a step smaller than {step:e}"
    )]
    StepSize { disagreement: f64, step: f64 },

    #[error("no grid point carries signal above the floor {floor:e}")]
    NoSignal { floor: f64 },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
}
