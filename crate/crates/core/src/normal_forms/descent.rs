use num_complex::Complex64;
use serde::Serialize;

use super::curve::CurveForm;
use super::lambda::check_a;
use crate::error::{Error, Result};

/// Quotient of `y² = (x²−1)(x²−a²)` by `(x, y) ↦ (−x, −y)`, which is the
/// cubic `v² = u(u−1)(u−a²)` via `u = x²`, `v = xy`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwoDescent {
    pub a: Complex64,
    pub target: CurveForm,
}

impl TwoDescent {
    pub fn map_point(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (x * x, x * y)
    }

    /// The same quotient seen from `w² = x² − 1`, `t² = x² − a²`:
    /// `u = x²`, `v = xwt`.
    pub fn map_two_equation_point(
        &self,
        x: Complex64,
        w: Complex64,
        t: Complex64,
    ) -> (Complex64, Complex64) {
        (x * x, x * w * t)
    }

    /// `v² − u(u−1)(u−a²)`.
    pub fn target_residual(&self, u: Complex64, v: Complex64) -> Complex64 {
        v * v - self.target.rhs(u)
    }
}

pub fn two_descent_quotient(c: &CurveForm) -> Result<TwoDescent> {
    let CurveForm::LegendreAffine { a } = *c else {
        return Err(Error::InvalidForm(
            "two-descent quotient needs the legendre_a form".into(),
        ));
    };
    check_a(a)?;
    Ok(TwoDescent {
        a,
        target: CurveForm::Lambda { lambda: a * a },
    })
}
