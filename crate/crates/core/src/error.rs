use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ordering violation: {0}")]
    OrderingViolation(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("sign outside {{+1, -1}}: {0}")]
    SignDomain(String),

    #[error("forms are not defined pointwise at branch point z = {0}")]
    BranchPointEvaluation(num_complex::Complex64),

    #[error("Gauss map is 0 or infinite at z = {0}")]
    DegenerateGauss(num_complex::Complex64),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("ordering infeasible after normalization: {0}")]
    OrderingInfeasible(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e}) after {intervals} subintervals")]
    QuadratureFailure {
        tolerance: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("path passes through a singularity: {0}")]
    PathThroughSingularity(String),

    #[error("extrapolation did not converge: residual {residual:e} above tolerance {tolerance:e}")]
    NonConvergent { residual: f64, tolerance: f64 },

    #[error("numerical verification failed: {0}")]
    VerificationFailure(String),

    #[error("degenerate singularity: {0}")]
    DegenerateSingularity(String),

    #[error("ambiguous cone direction: {0}")]
    AmbiguousDirection(String),

    #[error("point is not on the hyperboloid: <x,x> = {0}")]
    NotOnHyperboloid(f64),

    #[error("seam weld failed: {0}")]
    WeldFailure(String),

    #[error("loop is not closed on the curve: {0}")]
    NotClosedOnCurve(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
