use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::path::PathPoly;
use crate::error::{fmt_c, Error, Result};
use crate::foundations::{poly_roots, Poly, ToleranceCtx};

pub const DEFAULT_ORDER: usize = 24;
const MAX_STEPS: usize = 200_000;

/// The built-in function elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BuiltinKind {
    Sqrt,
    Log,
    /// `∫₀^z dt / √((1−t²)(1−k²t²))`.
    EllipticIntegral {
        k: Complex64,
    },
}

/// How a germ is re-expanded at a new center.
#[derive(Debug, Clone, PartialEq)]
enum Structure {
    /// Raw Taylor transport.
    Free,
    /// `R(z)^α`, re-expanded from its value at the new center.
    Power {
        r: Poly,
        alpha: f64,
        sing: Vec<Complex64>,
    },
    /// `∫ R(z)^α dz`, carried by its integrand.
    IntegralOfPower {
        r: Poly,
        alpha: f64,
        sing: Vec<Complex64>,
    },
}

/// A truncated power series `Σ aₙ (z − center)ⁿ`, `n ≤ order`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Germ {
    center: Complex64,
    coeffs: Vec<Complex64>,
    conv_radius_est: f64,
    #[serde(skip)]
    structure: Structure,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Taylor coefficients of `R^α` at `center`, with `R(center)^α = value`.
/// Uses `R g′ = α R′ g`.
fn power_series(
    r: &Poly,
    alpha: f64,
    center: Complex64,
    value: Complex64,
    order: usize,
) -> Vec<Complex64> {
    let rs = r.shift(center);
    let rc = rs.coeffs();
    let deg = rc.len() - 1;
    let r0 = rc[0];
    let mut g = vec![Complex64::new(0.0, 0.0); order + 1];
    g[0] = value;
    for n in 0..order {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..=n.min(deg.saturating_sub(1)) {
            s += alpha * (j + 1) as f64 * rc[j + 1] * g[n - j];
        }
        for j in 1..=n.min(deg) {
            s -= rc[j] * (n - j + 1) as f64 * g[n - j + 1];
        }
        g[n + 1] = s / (r0 * (n + 1) as f64);
    }
    g
}

/// The branch of `R(z)^α` nearest to `predicted`.
fn power_value(r: &Poly, alpha: f64, z: Complex64, predicted: Complex64) -> Complex64 {
    let rz = r.eval(z);
    let principal = (alpha * rz.ln()).exp();
    (-8..=8)
        .map(|k| principal * Complex64::from_polar(1.0, 2.0 * PI * alpha * k as f64))
        .min_by(|a, b| (a - predicted).norm().total_cmp(&(b - predicted).norm()))
        .expect("nonempty")
}

fn nearest(sing: &[Complex64], z: Complex64) -> f64 {
    sing.iter()
        .map(|s| (s - z).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Radius from the geometric ratio of the last four nonzero coefficients.
fn ratio_radius(coeffs: &[Complex64]) -> f64 {
    let tail: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, a)| a.norm() > 0.0)
        .take(4)
        .map(|(n, a)| (n, a.norm()))
        .collect();
    if tail.len() < 2 || tail[0].0 == 0 {
        return f64::INFINITY;
    }
    let (n_hi, a_hi) = tail[0];
    let (n_lo, a_lo) = tail[tail.len() - 1];
    if n_hi == n_lo {
        return f64::INFINITY;
    }
    (a_lo / a_hi).powf(1.0 / (n_hi - n_lo) as f64)
}

impl Germ {
    /// A germ given by raw coefficients, continued by Taylor transport.
    pub fn from_series(center: Complex64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "germ needs at least one coefficient".into(),
            ));
        }
        let conv_radius_est = ratio_radius(&coeffs);
        Ok(Self {
            center,
            coeffs,
            conv_radius_est,
            structure: Structure::Free,
        })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn conv_radius_est(&self) -> f64 {
        self.conv_radius_est
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Known singularities, empty for raw series.
    pub fn singularities(&self) -> &[Complex64] {
        match &self.structure {
            Structure::Free => &[],
            Structure::Power { sing, .. } | Structure::IntegralOfPower { sing, .. } => sing,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let h = z - self.center;
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * h + a)
    }

    /// Evaluation restricted to the trusted disk `|z − center| < ρ/2`.
    pub fn eval_checked(&self, z: Complex64) -> Result<Complex64> {
        let d = (z - self.center).norm();
        if d >= self.conv_radius_est / 2.0 {
            return Err(Error::StepTooLarge(2.0 * d / self.conv_radius_est));
        }
        Ok(self.eval(z))
    }

    /// Derivative series evaluated at `z`.
    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let h = z - self.center;
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (n, &a)| {
                acc * h + a * n as f64
            })
    }

    /// Estimated truncation error of evaluating at distance `h`.
    pub fn tail_bound(&self, h: f64) -> f64 {
        let m = self.order();
        let last = self.coeffs[m].norm();
        if last == 0.0 || h == 0.0 {
            return 0.0;
        }
        let q = h / ratio_radius(&self.coeffs);
        if q >= 1.0 {
            return f64::INFINITY;
        }
        last * h.powi(m as i32) * q / (1.0 - q)
    }

    /// Re-expansion at `z` inside the trusted disk.
    fn recenter(&self, z: Complex64) -> Germ {
        let order = self.order();
        match &self.structure {
            Structure::Free => {
                let h = z - self.center;
                let mut a = self.coeffs.clone();
                // repeated synthetic division gives the shifted coefficients
                for i in 0..=order {
                    for j in (i..order).rev() {
                        let next = a[j + 1];
                        a[j] += h * next;
                    }
                }
                Germ {
                    center: z,
                    conv_radius_est: ratio_radius(&a),
                    coeffs: a,
                    structure: Structure::Free,
                }
            }
            Structure::Power { r, alpha, sing } => {
                let v = power_value(r, *alpha, z, self.eval(z));
                Germ {
                    center: z,
                    coeffs: power_series(r, *alpha, z, v, order),
                    conv_radius_est: nearest(sing, z),
                    structure: self.structure.clone(),
                }
            }
            Structure::IntegralOfPower { r, alpha, sing } => {
                let f = self.eval(z);
                let v = power_value(r, *alpha, z, self.eval_derivative(z));
                let g = power_series(r, *alpha, z, v, order - 1);
                let mut coeffs = Vec::with_capacity(order + 1);
                coeffs.push(f);
                coeffs.extend(g.iter().enumerate().map(|(n, &gn)| gn / (n + 1) as f64));
                Germ {
                    center: z,
                    coeffs,
                    conv_radius_est: nearest(sing, z),
                    structure: self.structure.clone(),
                }
            }
        }
    }
}

fn structured_power(
    r: Poly,
    alpha: f64,
    center: Complex64,
    value: Complex64,
    order: usize,
    integral: Option<Complex64>,
) -> Result<Germ> {
    let sing = if r.degree().unwrap_or(0) == 0 {
        Vec::new()
    } else {
        poly_roots(&r)?
    };
    let rho = nearest(&sing, center);
    if rho <= 1e-12 * (1.0 + center.norm()) {
        return Err(Error::SingularCenter(fmt_c(center)));
    }
    Ok(match integral {
        None => Germ {
            center,
            coeffs: power_series(&r, alpha, center, value, order),
            conv_radius_est: rho,
            structure: Structure::Power { r, alpha, sing },
        },
        Some(f0) => {
            let g = power_series(&r, alpha, center, value, order - 1);
            let mut coeffs = vec![f0];
            coeffs.extend(g.iter().enumerate().map(|(n, &gn)| gn / (n + 1) as f64));
            Germ {
                center,
                coeffs,
                conv_radius_est: rho,
                structure: Structure::IntegralOfPower { r, alpha, sing },
            }
        }
    })
}

/// Germ of a built-in function at `center`, principal determination.
pub fn germ_builtin(kind: BuiltinKind, center: Complex64, order: usize) -> Result<Germ> {
    if order < 2 {
        return Err(Error::InvalidInput(
            "series order must be at least 2".into(),
        ));
    }
    match kind {
        BuiltinKind::Sqrt => structured_power(Poly::x(), 0.5, center, center.sqrt(), order, None),
        BuiltinKind::Log => {
            if center.norm() == 0.0 {
                return Err(Error::SingularCenter(fmt_c(center)));
            }
            structured_power(
                Poly::x(),
                -1.0,
                center,
                center.inv(),
                order,
                Some(center.ln()),
            )
        }
        BuiltinKind::EllipticIntegral { k } => {
            let k2 = k * k;
            let r = Poly::new(vec![c(1.0), c(0.0), -(1.0 + k2), c(0.0), k2]);
            let rc = r.eval(center);
            if rc.norm() < 1e-12 {
                return Err(Error::SingularCenter(fmt_c(center)));
            }
            let origin = Complex64::new(0.0, 0.0);
            let g0 = structured_power(r, -0.5, origin, c(1.0), order, Some(c(0.0)))?;
            if center == origin {
                return Ok(g0);
            }
            // the determination reached along the straight segment from 0
            let path = PathPoly::new(vec![origin, center])?;
            continue_along(&g0, &path, 0.5, &ToleranceCtx::default())
        }
    }
}

/// Analytic continuation of `g` along `path`, re-expanding at steps of at
/// most `step_ctl · ρ/2` and short enough for the truncation estimate to
/// stay within `tol`.
pub fn continue_along(
    g: &Germ,
    path: &PathPoly,
    step_ctl: f64,
    tol: &ToleranceCtx,
) -> Result<Germ> {
    if !(step_ctl > 0.0 && step_ctl.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "step control must be positive, got {step_ctl}"
        )));
    }
    if step_ctl > 1.0 {
        return Err(Error::StepTooLarge(step_ctl));
    }
    let v = path.vertices();
    if !tol.eq(v[0], g.center) {
        return Err(Error::InvalidInput(format!(
            "path starts at {} but the germ is centered at {}",
            fmt_c(v[0]),
            fmt_c(g.center)
        )));
    }
    for w in v.windows(2) {
        for &s in g.singularities() {
            if path_distance(s, w[0], w[1]) <= tol.bound(s.norm()) {
                return Err(Error::SingularityOnPath(fmt_c(s)));
            }
        }
    }
    let mut cur = g.clone();
    let mut steps = 0usize;
    for w in v.windows(2) {
        let end = w[1];
        loop {
            let rem = end - cur.center;
            let dist = rem.norm();
            if dist == 0.0 {
                break;
            }
            let mut h = dist.min(step_ctl * cur.conv_radius_est / 2.0);
            let target = tol.bound(cur.value().norm());
            while h > 0.0 && cur.tail_bound(h) > target && h > 1e-3 * cur.conv_radius_est {
                h /= 2.0;
            }
            if h <= 1e-13 * (1.0 + cur.center.norm()) {
                return Err(Error::SingularityOnPath(fmt_c(cur.center)));
            }
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::SingularityOnPath(fmt_c(cur.center)));
            }
            let next = if h >= dist {
                end
            } else {
                cur.center + rem * (h / dist)
            };
            cur = cur.recenter(next);
        }
    }
    Ok(cur)
}

pub(crate) fn path_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    (p - (a + d * t.clamp(0.0, 1.0))).norm()
}

/// `max |aₙ − bₙ| sⁿ` with `s = min(1, ρ/2)`: the size of the difference on
/// the trusted disk. Infinite if the centers differ.
pub fn germ_distance(a: &Germ, b: &Germ) -> f64 {
    if (a.center - b.center).norm() > 1e-12 * (1.0 + a.center.norm()) {
        return f64::INFINITY;
    }
    let s = (a.conv_radius_est.min(b.conv_radius_est) / 2.0).min(1.0);
    let n = a.coeffs.len().max(b.coeffs.len());
    let zero = Complex64::new(0.0, 0.0);
    (0..n)
        .map(|i| {
            let x = a.coeffs.get(i).copied().unwrap_or(zero);
            let y = b.coeffs.get(i).copied().unwrap_or(zero);
            (x - y).norm() * s.powi(i as i32)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle(n: usize) -> PathPoly {
        PathPoly::new(
            (0..=n)
                .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn builtin_leading_terms() {
        let s = germ_builtin(BuiltinKind::Sqrt, c(1.0), 24).unwrap();
        assert!((s.coeffs[0] - 1.0).norm() < 1e-15 && (s.coeffs[1] - 0.5).norm() < 1e-15);
        assert!((s.coeffs[2] + 0.125).norm() < 1e-15);
        let l = germ_builtin(BuiltinKind::Log, c(1.0), 24).unwrap();
        assert!(l.coeffs[0].norm() < 1e-15 && (l.coeffs[1] - 1.0).norm() < 1e-15);
        assert!((l.coeffs[3] - 1.0 / 3.0).norm() < 1e-15);
        let e = germ_builtin(BuiltinKind::EllipticIntegral { k: c(0.5) }, c(0.0), 24).unwrap();
        assert!(e.coeffs[0].norm() < 1e-15 && (e.coeffs[1] - 1.0).norm() < 1e-15);
        // 1/√((1−t²)(1−t²/4)) = 1 + (5/8)t² + …, so F has t³ coefficient 5/24
        assert!((e.coeffs[3] - 5.0 / 24.0).norm() < 1e-14);
        assert_eq!(e.conv_radius_est(), 1.0);
    }

    #[test]
    fn singular_centers() {
        assert!(matches!(
            germ_builtin(BuiltinKind::Sqrt, c(0.0), 24),
            Err(Error::SingularCenter(_))
        ));
        assert!(matches!(
            germ_builtin(BuiltinKind::Log, c(0.0), 24),
            Err(Error::SingularCenter(_))
        ));
        let k = BuiltinKind::EllipticIntegral { k: c(0.5) };
        assert!(matches!(
            germ_builtin(k, c(-2.0), 24),
            Err(Error::SingularCenter(_))
        ));
    }

    #[test]
    fn sqrt_loop_flips_sign() {
        let g = germ_builtin(BuiltinKind::Sqrt, c(1.0), 24).unwrap();
        let end = continue_along(&g, &circle(64), 1.0, &ToleranceCtx::default()).unwrap();
        assert!((end.value() + 1.0).norm() < 1e-12);
        assert!((end.coeffs[1] + 0.5).norm() < 1e-12);
    }

    #[test]
    fn log_loop_adds_two_pi_i() {
        let g = germ_builtin(BuiltinKind::Log, c(1.0), 24).unwrap();
        let end = continue_along(&g, &circle(64), 1.0, &ToleranceCtx::default()).unwrap();
        assert!((end.value() - ci(0.0, 2.0 * PI)).norm() < 1e-10);
    }

    #[test]
    fn single_point_path_is_identity() {
        let g = germ_builtin(BuiltinKind::Log, ci(0.3, 0.4), 24).unwrap();
        let p = PathPoly::new(vec![ci(0.3, 0.4)]).unwrap();
        assert_eq!(
            continue_along(&g, &p, 0.5, &ToleranceCtx::default()).unwrap(),
            g
        );
    }

    #[test]
    fn elliptic_integral_matches_quadrature() {
        let k = BuiltinKind::EllipticIntegral { k: c(0.5) };
        let g = germ_builtin(k, c(0.0), 24).unwrap();
        let z = ci(0.6, 0.5);
        let p = PathPoly::new(vec![c(0.0), z]).unwrap();
        let end = continue_along(&g, &p, 0.5, &ToleranceCtx::default()).unwrap();
        let f = |t: f64| {
            let x = z * t;
            z / ((1.0 - x * x) * (1.0 - 0.25 * x * x)).sqrt()
        };
        let q = crate::quadrature::integrate(f, 0.0, 1.0, 1e-13, 200).unwrap();
        assert!((end.value() - q.value).norm() < 1e-11);
        let direct = germ_builtin(k, z, 24).unwrap();
        assert!(germ_distance(&end, &direct) < 1e-10);
    }

    #[test]
    fn singularity_on_path_detected() {
        let g = germ_builtin(BuiltinKind::Sqrt, c(1.0), 24).unwrap();
        let p = PathPoly::new(vec![c(1.0), c(-1.0)]).unwrap();
        assert!(matches!(
            continue_along(&g, &p, 0.5, &ToleranceCtx::default()),
            Err(Error::SingularityOnPath(_))
        ));
    }

    #[test]
    fn step_control_validated() {
        let g = germ_builtin(BuiltinKind::Sqrt, c(1.0), 24).unwrap();
        assert!(matches!(
            continue_along(&g, &circle(8), 1.5, &ToleranceCtx::default()),
            Err(Error::StepTooLarge(_))
        ));
    }

    #[test]
    fn free_series_transport() {
        // exp(z) at 0
        let mut a = vec![c(1.0)];
        for n in 1..=30 {
            a.push(a[n - 1] / n as f64);
        }
        let g = Germ::from_series(c(0.0), a).unwrap();
        let p = PathPoly::new(vec![c(0.0), ci(0.5, 0.5), c(1.0)]).unwrap();
        let end = continue_along(&g, &p, 0.5, &ToleranceCtx::default()).unwrap();
        assert!((end.value() - std::f64::consts::E).norm() < 1e-10);
        let k = Germ::from_series(ci(1.0, 1.0), vec![ci(2.0, -1.0)]).unwrap();
        assert!(k.conv_radius_est().is_infinite());
    }

    #[test]
    fn sqrt_squared_is_z() {
        let center = ci(0.5, 2.0);
        let g = germ_builtin(BuiltinKind::Sqrt, center, 24).unwrap();
        let a = g.coeffs();
        for n in 0..=24 {
            let sq: Complex64 = (0..=n).map(|k| a[k] * a[n - k]).sum();
            let expect = match n {
                0 => center,
                1 => c(1.0),
                _ => c(0.0),
            };
            assert!(
                (sq - expect).norm() < 1e-12 * (1.0 + center.norm()),
                "n = {n}"
            );
        }
    }
}
