//! Tolerance policy, polynomials, root finding and projective-line maps.

pub mod bipoly;
pub mod ext;
pub mod moebius;
pub mod parse;
pub mod poly;
pub mod roots;
pub mod tolerance;

pub use bipoly::BiPoly;
pub use ext::ExtComplex;
pub use moebius::{cross_ratio, MoebiusMap};
pub use parse::{parse_bipoly, parse_complex};
pub use poly::Poly;
pub use roots::poly_roots;
pub use tolerance::{ensure_finite, ToleranceCtx};
