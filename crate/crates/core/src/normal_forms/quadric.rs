//! The curve `E(b) ⊂ P³` cut out by `x₁² + x₂² + x₃² = 0` and
//! `x₀² = (b²+1)² x₁² + (b²−1)² x₂²`, and its map to the Legendre model
//! `y² = (ξ² − 1)(ξ² − b⁴)`.

use num_complex::Complex64;
use serde::Serialize;

use super::lambda::check_b;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadricCurvePoint {
    pub x: [Complex64; 4],
}

impl QuadricCurvePoint {
    pub fn new(x: [Complex64; 4]) -> Result<Self> {
        if x.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::InvalidInput(
                "all homogeneous coordinates vanish".into(),
            ));
        }
        if x.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidInput("coordinate is not finite".into()));
        }
        Ok(Self { x })
    }

    /// Rescaled so the largest coordinate has modulus one.
    pub fn normalized(&self) -> Self {
        let m = self.x.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Self {
            x: self.x.map(|c| c / m),
        }
    }

    /// Residuals of the two defining quadrics.
    pub fn residuals(&self, b: Complex64) -> (f64, f64) {
        let [x0, x1, x2, x3] = self.x;
        let b2 = b * b;
        let q1 = x1 * x1 + x2 * x2 + x3 * x3;
        let q2 = x0 * x0 - (b2 + 1.0) * (b2 + 1.0) * x1 * x1 - (b2 - 1.0) * (b2 - 1.0) * x2 * x2;
        (q1.norm(), q2.norm())
    }

    pub fn negate(&self, i: usize) -> Self {
        let mut x = self.x;
        x[i] = -x[i];
        Self { x }
    }
}

/// A point on `E(b)` with `x₁ = 1` and the given `x₃`.
pub fn solve_point(b: Complex64, x3: Complex64) -> Result<QuadricCurvePoint> {
    check_b(b)?;
    let x1 = Complex64::new(1.0, 0.0);
    let x2 = Complex64::new(0.0, 1.0) * (x1 * x1 + x3 * x3).sqrt();
    let b2 = b * b;
    let x0 = ((b2 + 1.0) * (b2 + 1.0) * x1 * x1 + (b2 - 1.0) * (b2 - 1.0) * x2 * x2).sqrt();
    QuadricCurvePoint::new([x0, x1, x2, x3])
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadricReport {
    pub s_over_t: Complex64,
    pub t_squared: Complex64,
    pub xi: Complex64,
    pub y: Complex64,
    /// `|y² − (ξ² − 1)(ξ² − b⁴)|`.
    pub residual: f64,
    /// `|x₀² + 4t⁴/b² · (ξ² − 1)(ξ² − a²)|`.
    pub chain_residual: f64,
    /// Whether the alternative chart `(−x₃ : x₁ − i x₂)` was used.
    pub alt_chart: bool,
}

/// `(s : t)` from either chart, and `t²` in the scaling for which
/// `x₁ = i(s² − t²)`, `x₂ = s² + t²`, `x₃ = 2ist`.
fn chart(x: &[Complex64; 4]) -> Result<(Complex64, Complex64, bool)> {
    let i = Complex64::new(0.0, 1.0);
    let [_, x1, x2, x3] = *x;
    let p = x1 + i * x2;
    let q = x1 - i * x2;
    let (r, alt) = if x3.norm() >= q.norm() {
        if x3.norm() == 0.0 {
            return Err(Error::InvalidInput("point lies over ξ = ∞".into()));
        }
        (p / x3, false)
    } else {
        (-x3 / q, true)
    };
    // three expressions for t²; take the best-conditioned one
    let cands = [
        (x3, 2.0 * i * r),
        (x2, r * r + 1.0),
        (x1, i * (r * r - 1.0)),
    ];
    let (num, den) = cands
        .iter()
        .copied()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonempty");
    if den.norm() == 0.0 {
        return Err(Error::InvalidInput(
            "cannot recover t from the point".into(),
        ));
    }
    Ok((r, num / den, alt))
}

/// Maps a point of `E(b)` to the Legendre model and checks the identity.
pub fn quadric_model_check(
    b: Complex64,
    pt: &QuadricCurvePoint,
    tol: f64,
) -> Result<QuadricReport> {
    check_b(b)?;
    let pt = pt.normalized();
    let (r1, r2) = pt.residuals(b);
    let b2 = b * b;
    let scale = 1.0 + (b2 + 1.0).norm_sqr() + (b2 - 1.0).norm_sqr();
    if r1 > tol || r2 > tol * scale {
        return Err(Error::NotOnCurve(r1.max(r2)));
    }
    let (r, t2, alt) = chart(&pt.x)?;
    let i = Complex64::new(0.0, 1.0);
    let x0 = pt.x[0];
    let xi = b * r;
    let y = i * b * x0 / (2.0 * t2);
    let a = b2;
    let f = (xi * xi - 1.0) * (xi * xi - a * a);
    let residual = (y * y - f).norm();
    let chain_residual = (x0 * x0 + 4.0 * t2 * t2 / b2 * f).norm();
    Ok(QuadricReport {
        s_over_t: r,
        t_squared: t2,
        xi,
        y,
        residual,
        chain_residual,
        alt_chart: alt,
    })
}

/// `ξ` from the alternative chart `(s : t) = (−x₃ : x₁ − i x₂)` only.
pub fn xi_alt_chart(b: Complex64, pt: &QuadricCurvePoint) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let [_, x1, x2, x3] = pt.x;
    b * (-x3) / (x1 - i * x2)
}

/// `ξ` from the primary chart `(s : t) = (x₁ + i x₂ : x₃)` only.
pub fn xi_primary_chart(b: Complex64, pt: &QuadricCurvePoint) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let [_, x1, x2, x3] = pt.x;
    b * (x1 + i * x2) / x3
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_holds_on_solved_points() {
        for b in [c(2.0, 0.0), c(1.0, 1.0)] {
            for x3 in [c(0.7, 0.0), c(-1.3, 0.4), c(0.2, -2.0)] {
                let pt = solve_point(b, x3).unwrap();
                let rep = quadric_model_check(b, &pt, 1e-9).unwrap();
                assert!(rep.residual < 1e-9, "{b} {x3}: {}", rep.residual);
                assert!(rep.chain_residual < 1e-9);
            }
        }
    }

    #[test]
    fn involutions() {
        let b = c(2.0, 0.0);
        let a = b * b;
        let pt = solve_point(b, c(0.6, 0.3)).unwrap();
        let base = quadric_model_check(b, &pt, 1e-9).unwrap();
        let f0 = quadric_model_check(b, &pt.negate(0), 1e-9).unwrap();
        assert!((f0.y + base.y).norm() < 1e-9 && (f0.xi - base.xi).norm() < 1e-9);
        let f3 = quadric_model_check(b, &pt.negate(3), 1e-9).unwrap();
        assert!((f3.xi + base.xi).norm() < 1e-9);
        let f1 = quadric_model_check(b, &pt.negate(1), 1e-9).unwrap();
        assert!((f1.xi - a / base.xi).norm() < 1e-9);
    }

    #[test]
    fn charts_agree() {
        let b = c(1.0, 1.0);
        let pt = solve_point(b, c(0.9, -0.2)).unwrap();
        assert!((xi_alt_chart(b, &pt) - xi_primary_chart(b, &pt)).norm() < 1e-12);
    }

    #[test]
    fn off_curve_rejected() {
        let b = c(2.0, 0.0);
        let pt =
            QuadricCurvePoint::new([c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(
            quadric_model_check(b, &pt, 1e-9),
            Err(Error::NotOnCurve(_))
        ));
    }
}
