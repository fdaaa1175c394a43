use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("frequency vector must have at least one nonzero entry")]
    ZeroFrequency,

    #[error("spectrum must be nonempty")]
    EmptySpectrum,

    #[error("duplicate frequency in spectrum")]
    DuplicateFrequency,

    #[error("quadrature resolution {got} below required {required}")]
    ResolutionTooSmall { required: usize, got: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("empty sample: {0}")]
    EmptySample(String),

    #[error("margin {margin:e} is below the feasibility tolerance {tol:e}")]
    MarginTooSmall { margin: f64, tol: f64 },

    #[error("lp numerical breakdown: {0}")]
    LpBreakdown(String),

    #[error("simplex iteration cap {0} exceeded")]
    IterationCap(usize),

    #[error("affine dependence solve failed: {0}")]
    DependenceSolve(String),

    #[error("size cap exceeded: {got} > {cap}")]
    SizeCap { got: u64, cap: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no phase transition found in (0, 1)")]
    NoTransition,

    #[error("support reduction stalled at {support} points (target {target})")]
    ReductionStalled { support: usize, target: usize },

    #[error("newton iteration did not converge within {0} steps")]
    NewtonDivergence(usize),

    #[error("certificate residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
