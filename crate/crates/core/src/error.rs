use thiserror::Error;

/// Every failure mode the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("two of the supplied points coincide")]
    CoincidentPoints,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("germ center {0} lies on the singular set")]
    SingularCenter(String),
    #[error("continuation step would leave the trusted disk (step control {0})")]
    StepTooLarge(f64),
    #[error("singularity within tolerance of the path near {0}")]
    SingularityOnPath(String),
    #[error("tracked roots collided near z = {0}")]
    TrackingCollision(String),

    #[error("series did not converge: tail bound {tail:e} exceeds tolerance {tol:e}")]
    NotConverged { tail: f64, tol: f64 },
    #[error("pole: {0} is a lattice point")]
    PoleAt(String),

    #[error("invalid lambda {0}: must avoid 0 and 1")]
    InvalidLambda(String),
    #[error("invalid Legendre parameter a = {0}: must avoid 0, 1, -1")]
    InvalidA(String),
    #[error("invalid curve form: {0}")]
    InvalidForm(String),
    #[error("a square-root branch must be chosen for this conversion")]
    BranchRequired,
    #[error("fourth branch point maps to {got} instead of {expected}")]
    FourthPointMismatch { got: String, expected: String },
    #[error("point is not on the curve (residual {0:e})")]
    NotOnCurve(f64),

    #[error("coset enumeration exceeded the budget of {0} cosets")]
    EnumerationBudgetExceeded(usize),

    #[error("semicharacter inconsistent: {0}")]
    SemicharacterInconsistent(String),
    #[error("alternating form is degenerate")]
    DegenerateForm,
    #[error("curve is singular (discriminant {0:e})")]
    SingularCurve(f64),
    #[error("quadrature failed: {0}")]
    QuadratureFailed(String),
    #[error("grid too coarse for the Cauchy transform: {0}")]
    SingularQuadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn fmt_c(z: num_complex::Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}
