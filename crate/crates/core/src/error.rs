use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // grids and fields
    #[error("cell edges must be strictly increasing (edge {index} = {value})")]
    NonMonotoneEdges { index: usize, value: f64 },
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),
    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),
    #[error("reference norm is zero, relative L2 error is undefined")]
    ZeroReferenceNorm,
    #[error("fine grid is not nested in the coarse grid: {0}")]
    NonNestedGrids(String),
    #[error("layout {0} is not supported here")]
    UnsupportedLayout(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("initial condition has no modes")]
    EmptyModeSet,

    // time stepping and solvers
    #[error("non-finite value after step {step} (t = {time}); the CFL condition is likely violated")]
    UnstableStep { step: usize, time: f64 },
    #[error("maximum wave speed must be positive")]
    ZeroWaveSpeed,
    #[error("oscillations detected without a limiter (total variation {tv_initial:.6e} -> {tv_final:.6e})")]
    LimiterRequired { tv_initial: f64, tv_final: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    // linear algebra
    #[error("boundary treatment not supported: {0}")]
    UnsupportedBoundary(String),
    #[error("matrix is singular or not factorizable: {0}")]
    SingularMatrix(String),
    #[error("iteration diverged at iteration {iteration} (relative residual {residual:.3e})")]
    Diverged { iteration: usize, residual: f64 },
    #[error("matrix is not symmetric positive definite (curvature {curvature:.3e} at iteration {iteration})")]
    NotSpd { iteration: usize, curvature: f64 },
    #[error("spectral grid size {0} is not a power of two")]
    NonPowerOfTwo(usize),
    #[error("invalid sparse system: {0}")]
    InvalidSystem(String),

    // benchmarking protocol
    #[error("measured a non-positive duration")]
    NonPositiveDuration,
    #[error("reference resolution {reference} is coarser than 8x the largest swept resolution {largest}")]
    ReferenceTooCoarse { reference: usize, largest: usize },
    #[error("records mix solver or PDE ids: {0}")]
    MixedSolverIds(String),
    #[error("target {target:.6e} lies outside the range [{lo:.6e}, {hi:.6e}] covered by front '{front}'")]
    Extrapolation {
        front: String,
        target: f64,
        lo: f64,
        hi: f64,
    },
    #[error("speedup s = {0} must exceed 1 for a finite break-even count")]
    NotFaster(f64),
    #[error("baseline time per evaluation must be positive")]
    ZeroBaselineTime,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("claim is empty: {0}")]
    EmptyClaim(String),

    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
