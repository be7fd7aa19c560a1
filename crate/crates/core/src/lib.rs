//! Numerical toolkit for elliptic curves and their moduli: normal forms,
//! Weierstrass and theta functions, congruence-subgroup cosets, analytic
//! continuation and monodromy, period relations, and the difference
//! equation `g(z+1) - g(z) = f(z)`.

pub mod abelian;
pub mod continuation;
pub mod difference;
pub mod elliptic;
pub mod error;
pub mod foundations;
pub mod modular;
pub mod normal_forms;
pub mod perm;
pub mod quadrature;

pub use error::{Error, Result};
pub use num_complex::Complex64;
