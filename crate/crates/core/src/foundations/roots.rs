//! Polynomial root finding.
//!
//! Degrees one through four use closed forms (Cardano, Ferrari) followed by
//! at most five Newton steps; higher degrees use Aberth-Ehrlich simultaneous
//! iteration. Roots come back sorted lexicographically by `(re, im)`.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::poly::Poly;
use crate::error::{Error, Result};

const POLISH_STEPS: usize = 5;
const ABERTH_MAX_ITER: usize = 500;

/// All roots of `p`, repeated according to multiplicity.
pub fn poly_roots(p: &Poly) -> Result<Vec<Complex64>> {
    let deg = match p.degree() {
        None => {
            return Err(Error::DegenerateInput(
                "zero polynomial has no finite root set".into(),
            ))
        }
        Some(0) => {
            return Err(Error::DegenerateInput(
                "constant polynomial has no roots".into(),
            ));
        }
        Some(d) => d,
    };
    for c in p.coeffs() {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::InvalidInput(
                "non-finite polynomial coefficient".into(),
            ));
        }
    }
    let c = p.coeffs();
    let mut roots = match deg {
        1 => vec![-c[0] / c[1]],
        2 => quadratic(c[2], c[1], c[0]).to_vec(),
        3 => cubic(c[3], c[2], c[1], c[0]).to_vec(),
        4 => quartic(c[4], c[3], c[2], c[1], c[0]).to_vec(),
        _ => aberth(p),
    };
    for r in roots.iter_mut() {
        *r = polish(p, *r);
    }
    sort_roots(&mut roots);
    Ok(roots)
}

/// Lexicographic `(re, im)` ordering with a small tolerance on the real part
/// so that conjugate pairs with numerically noisy real parts stay together.
pub fn sort_roots(roots: &mut [Complex64]) {
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let eps = 1e-12 * scale;
    roots.sort_by(|a, b| {
        if (a.re - b.re).abs() <= eps {
            a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal)
        } else {
            a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal)
        }
    });
}

fn polish(p: &Poly, mut z: Complex64) -> Complex64 {
    let mut best = p.eval(z).norm();
    for _ in 0..POLISH_STEPS {
        let (v, dv) = p.eval_with_derivative(z);
        if v.norm() == 0.0 || dv.norm() == 0.0 {
            break;
        }
        let cand = z - v / dv;
        let r = p.eval(cand).norm();
        if r < best {
            best = r;
            z = cand;
        } else {
            break;
        }
    }
    z
}

pub(crate) fn quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let q1 = b + disc;
    let q2 = b - disc;
    let q = if q1.norm() >= q2.norm() { q1 } else { q2 } * -0.5;
    if q.norm() == 0.0 {
        // b = 0 and c = 0: double root at the origin
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

pub(crate) fn cubic(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> [Complex64; 3] {
    let d0 = b * b - 3.0 * a * c;
    let d1 = 2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d;
    let s = (d1 * d1 - 4.0 * d0 * d0 * d0).sqrt();
    let u1 = (d1 + s) * 0.5;
    let u2 = (d1 - s) * 0.5;
    let u = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let third = -b / (3.0 * a);
    if u.norm() <= 1e-300 {
        return [third; 3];
    }
    let cc = u.powf(1.0 / 3.0);
    let xi = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    let mut w = cc;
    for r in out.iter_mut() {
        *r = -(b + w + d0 / w) / (3.0 * a);
        w *= xi;
    }
    out
}

pub(crate) fn quartic(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    e: Complex64,
) -> [Complex64; 4] {
    let (b, c, d, e) = (b / a, c / a, d / a, e / a);
    let shift = -b / 4.0;
    let b2 = b * b;
    let p = c - 3.0 * b2 / 8.0;
    let q = d - b * c / 2.0 + b2 * b / 8.0;
    let r = e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0;

    let one = Complex64::new(1.0, 0.0);
    let scale = p.norm() + q.norm().sqrt() + r.norm().sqrt() + 1e-300;
    let ys: [Complex64; 4] = if q.norm() <= 1e-14 * scale * scale.sqrt() {
        // biquadratic
        let [w1, w2] = quadratic(one, p, r);
        let (s1, s2) = (w1.sqrt(), w2.sqrt());
        [s1, -s1, s2, -s2]
    } else {
        let ms = cubic(
            Complex64::new(8.0, 0.0),
            8.0 * p,
            2.0 * p * p - 8.0 * r,
            -q * q,
        );
        let m = ms
            .iter()
            .copied()
            .max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap_or(Ordering::Equal))
            .unwrap_or_default();
        let s = (2.0 * m).sqrt();
        let t = q / (2.0 * s);
        let [y1, y2] = quadratic(one, -s, p / 2.0 + m + t);
        let [y3, y4] = quadratic(one, s, p / 2.0 + m - t);
        [y1, y2, y3, y4]
    };
    ys.map(|y| y + shift)
}

fn aberth(p: &Poly) -> Vec<Complex64> {
    let n = p.degree().unwrap_or(0);
    let lead = p.leading().norm();
    // Fujiwara-style bound on root modulus
    let radius = p.coeffs()[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| (c.norm() / lead).powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..ABERTH_MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (v, dv) = p.eval_with_derivative(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        1.0 / diff
                    }
                })
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_roots(found: &[Complex64], expected: &[Complex64], tol: f64) {
        assert_eq!(found.len(), expected.len());
        let mut used = vec![false; expected.len()];
        for r in found {
            let (j, d) = expected
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, e)| (j, (e - r).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            assert!(d < tol, "root {r} unmatched (distance {d})");
            used[j] = true;
        }
    }

    #[test]
    fn weierstrass_cubic_example() {
        // 4x^3 - 4x = 4 x (x-1)(x+1)
        let roots = poly_roots(&Poly::from_real(&[0.0, -4.0, 0.0, 4.0])).unwrap();
        assert_roots(&roots, &[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-12);
        // lexicographic order
        assert!(roots[0].re < roots[1].re && roots[1].re < roots[2].re);
    }

    #[test]
    fn square_root_of_four() {
        let roots = poly_roots(&Poly::from_real(&[-4.0, 0.0, 1.0])).unwrap();
        assert_roots(&roots, &[c(2.0, 0.0), c(-2.0, 0.0)], 1e-14);
    }

    #[test]
    fn zero_polynomial_is_degenerate() {
        assert!(matches!(
            poly_roots(&Poly::zero()),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn quartic_and_quintic_known_roots() {
        let r4 = [c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0)];
        let found = poly_roots(&Poly::from_roots(&r4, c(0.25, 0.0))).unwrap();
        assert_roots(&found, &r4, 1e-12);

        let r4c = [c(0.3, 1.0), c(-1.5, 0.2), c(2.0, -2.0), c(0.0, 0.5)];
        let found = poly_roots(&Poly::from_roots(&r4c, c(1.0, 1.0))).unwrap();
        assert_roots(&found, &r4c, 1e-10);

        let r5 = [
            c(1.0, 1.0),
            c(-1.0, 0.5),
            c(0.2, -3.0),
            c(4.0, 0.0),
            c(-2.0, -2.0),
        ];
        let found = poly_roots(&Poly::from_roots(&r5, c(3.0, 0.0))).unwrap();
        assert_roots(&found, &r5, 1e-10);
    }

    #[test]
    fn biquadratic_branch() {
        // (z^2 - 1)(z^2 - 9)
        let found = poly_roots(&Poly::from_real(&[9.0, 0.0, -10.0, 0.0, 1.0])).unwrap();
        assert_roots(
            &found,
            &[c(1.0, 0.0), c(-1.0, 0.0), c(3.0, 0.0), c(-3.0, 0.0)],
            1e-12,
        );
    }

    #[test]
    fn triple_root() {
        let found = poly_roots(&Poly::from_roots(&[c(2.0, 0.0); 3], c(1.0, 0.0))).unwrap();
        assert_roots(&found, &[c(2.0, 0.0); 3], 1e-5);
    }
}
