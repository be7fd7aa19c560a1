use num_complex::Complex64;

use super::tolerance::ToleranceCtx;

/// A point of the projective line: a finite complex value or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtComplex::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(z) => Some(*z),
            ExtComplex::Infinity => None,
        }
    }

    /// Infinity is equal only to infinity; finite values compare within `tol`.
    pub fn approx_eq(&self, other: &ExtComplex, tol: &ToleranceCtx) -> bool {
        match (self, other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => true,
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => tol.eq(*a, *b),
            _ => false,
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

impl From<f64> for ExtComplex {
    fn from(x: f64) -> Self {
        ExtComplex::Finite(Complex64::new(x, 0.0))
    }
}
