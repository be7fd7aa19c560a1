//! Theta functions with characteristics, period data and the Riemann
//! relations, Appell–Humbert multipliers, elementary divisors, and genus-1
//! periods with Abel–Jacobi inversion.

pub mod jacobi;
pub mod period;
pub mod snf;
pub mod theta;

pub use jacobi::{abel_jacobi_invert, genus1_periods, AbelJacobiResult};
pub use period::{
    appell_humbert_cocycle, cocycle_residual, riemann_relations_check, select_semichar_phase,
    semicharacter, theta_cocycle_ratios, PeriodData, PeriodDataJson, PhaseSelection, RiemannReport,
    SemicharPhase,
};
pub use snf::{elementary_divisors, smith_diagonal, ElementaryDivisors};
pub use theta::{
    theta_eval, theta_functional_equation_check, theta_sum, SiegelTau, ThetaChar, ThetaFeReport,
    ThetaValue, MAX_GENUS,
};
