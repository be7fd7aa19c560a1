use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute/relative tolerance pair. All approximate comparisons in the
/// crate go through one of these.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceCtx {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for ToleranceCtx {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
        }
    }
}

impl ToleranceCtx {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0 && abs_tol.is_finite() && rel_tol.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tolerances must be positive and finite, got abs={abs_tol}, rel={rel_tol}"
            )));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    /// Threshold for a quantity of magnitude `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.abs()
    }

    pub fn eq(&self, a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= self.bound(a.norm().max(b.norm()))
    }

    pub fn eq_real(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.bound(a.abs().max(b.abs()))
    }

    pub fn is_zero(&self, a: Complex64) -> bool {
        a.norm() <= self.abs_tol
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
        }
    }
}

/// Rejects NaN/infinite values at module boundaries.
pub fn ensure_finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::InvalidInput(format!("{what} is not finite")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive() {
        assert!(ToleranceCtx::new(0.0, 1e-3).is_err());
        assert!(ToleranceCtx::new(1e-3, -1.0).is_err());
        assert!(ToleranceCtx::new(1e-3, 1e-3).is_ok());
    }

    #[test]
    fn relative_part_scales() {
        let tol = ToleranceCtx::default();
        assert!(tol.eq(Complex64::new(1e6, 0.0), Complex64::new(1e6 + 1e-5, 0.0)));
        assert!(!tol.eq(Complex64::new(1.0, 0.0), Complex64::new(1.0 + 1e-8, 0.0)));
    }
}
