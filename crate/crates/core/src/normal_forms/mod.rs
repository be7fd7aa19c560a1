//! Normal forms of elliptic curves, conversions between them, the Legendre
//! function, the quadric model `E(b)` and the two-descent quotient.

pub mod convert;
pub mod curve;
pub mod descent;
pub mod lambda;
pub mod legendre;
pub mod quadric;

pub use convert::{convert, lambda_to_weierstrass, weierstrass_roots, Conversion, ConvertOptions};
pub use curve::{CurveForm, CurveInput, FormTag};
pub use descent::{two_descent_quotient, TwoDescent};
pub use lambda::{
    a_from_lambda, a_roots, b_from_a, j_of_lambda, lambda_from_a, lambda_orbit, same_orbit, Branch,
};
pub use legendre::{
    legendre_function, legendre_function_with_branch, legendre_relations_check,
    LegendreFunctionData, LegendreRelationsReport,
};
pub use quadric::{quadric_model_check, solve_point, QuadricCurvePoint, QuadricReport};
