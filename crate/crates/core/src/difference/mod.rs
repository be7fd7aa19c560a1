//! The difference equation `g(z+1) − g(z) = f(z)`: exact polynomial
//! solutions, 1-periodic homogeneous terms, and the Cauchy–Pompeiu
//! transform solving `∂̄ψ = u` on an annulus.

pub mod cauchy;
pub mod exact;

pub use cauchy::{
    cauchy_pompeiu_solve, dbar_convergence_study, dbar_residual, manufactured_psi,
    DbarConvergenceReport, DbarLevel, GridFunction, MANUFACTURED_ANNULUS,
};
pub use exact::{
    difference_residual, difference_sample_points, homogeneous_fourier_check, parse_rational,
    solve_polynomial_difference, solve_polynomial_difference_exact, telescoping_residual,
    DiffSolution, ExactDiffSolution, FourierReport, FourierSeries, RationalPoly,
};
