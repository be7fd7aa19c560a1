use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::continuation::path::detoured_segment;
use crate::elliptic::{EisensteinInvariants, Lattice, Weierstrass, DEFAULT_TRUNC};
use crate::error::{Error, Result};
use crate::foundations::{poly_roots, Poly, ToleranceCtx};
use crate::quadrature::integrate;

const QUAD_TOL: f64 = 1e-13;
const QUAD_INTERVALS: usize = 400;

fn cubic_roots(g2: Complex64, g3: Complex64) -> Result<[Complex64; 3]> {
    EisensteinInvariants::from_g(g2, g3)?;
    let zero = Complex64::new(0.0, 0.0);
    let r = poly_roots(&Poly::new(vec![-g3, -g2, zero, Complex64::new(4.0, 0.0)]))?;
    Ok([r[0], r[1], r[2]])
}

/// `∫_{eᵢ}^{eⱼ} dx/y` on the straight segment, with `s = sin²θ` removing
/// both endpoint singularities.
fn half_period_integral(ei: Complex64, ej: Complex64, ek: Complex64) -> Result<Complex64> {
    // 4(x−eᵢ)(x−eⱼ)(x−eₖ) = d² s(1−s) w(s) with w linear and zero-free on [0, 1]
    let a = -4.0 * (ei - ek);
    let b = -4.0 * (ej - ei);
    let sa = a.sqrt();
    let q = b / a;
    let scale = 1.0 / sa.norm();
    let f = |theta: f64| {
        let s = theta.sin().powi(2);
        2.0 / (sa * (1.0 + q * s).sqrt())
    };
    Ok(integrate(f, 0.0, FRAC_PI_2, QUAD_TOL * scale, QUAD_INTERVALS)?.value)
}

/// Period lattice of `y² = 4x³ − g₂x − g₃` from twice the integrals of
/// `dx/y` between roots.
pub fn genus1_periods(g2: Complex64, g3: Complex64) -> Result<Lattice> {
    let e = cubic_roots(g2, g3)?;
    // the two shorter sides of the root triangle never contain the third root
    let side = |i: usize| (e[(i + 1) % 3] - e[(i + 2) % 3]).norm();
    let apex = (0..3)
        .max_by(|&i, &j| side(i).total_cmp(&side(j)))
        .expect("three sides");
    let (ei, ej, ek) = (e[apex], e[(apex + 1) % 3], e[(apex + 2) % 3]);
    let w1 = 2.0 * half_period_integral(ei, ej, ek)?;
    let w2 = 2.0 * half_period_integral(ei, ek, ej)?;
    Lattice::new(w1, w2)
}

#[derive(Debug, Clone, Serialize)]
pub struct AbelJacobiResult {
    /// Representative with both lattice coordinates in `[−½, ½]`.
    pub z: Complex64,
    pub omega1: Complex64,
    pub omega2: Complex64,
    /// `|℘(z) − x₀|` and `|℘′(z) − y₀|`.
    pub residual_p: f64,
    pub residual_dp: f64,
}

/// Branch-tracked `∫₀^{u₀} du / √Q(u)`, `Q(u) = 1 − g₂u⁴/4 − g₃u⁶/4`, with
/// `√Q = σ Π √(1 − u/rₖ)` and `σ` flipped whenever the path crosses the
/// cut `{rₖ t : t ≥ 1}` of a factor. Returns the integral and `√Q(u₀)`.
fn tracked_integral(g2: Complex64, g3: Complex64, u0: Complex64) -> Result<(Complex64, Complex64)> {
    let zero = Complex64::new(0.0, 0.0);
    let q = Poly::new(vec![
        Complex64::new(1.0, 0.0),
        zero,
        zero,
        zero,
        -g2 / 4.0,
        zero,
        -g3 / 4.0,
    ]);
    let roots = match q.degree() {
        Some(d) if d > 0 => poly_roots(&q)?,
        _ => Vec::new(),
    };
    let sqrt_q = |u: Complex64| {
        roots.iter().fold(Complex64::new(1.0, 0.0), |acc, r| {
            acc * (1.0 - u / r).sqrt()
        })
    };
    let disks: Vec<(Complex64, f64)> = roots
        .iter()
        .enumerate()
        .filter(|(_, r)| (*r - u0).norm() > 1e-8 * r.norm())
        .map(|(k, &r)| {
            let gap = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, s)| (s - r).norm())
                .fold(r.norm(), f64::min);
            (r, 0.3 * gap)
        })
        .collect();
    let pts = detoured_segment(zero, u0, &disks);
    let mut sign = 1.0;
    let mut total = zero;
    let n_pieces = pts.len() - 1;
    for (idx, w) in pts.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let d = b - a;
        let last = idx + 1 == n_pieces;
        let mut cuts: Vec<f64> = roots
            .iter()
            .filter_map(|r| {
                let den = (r.conj() * d).im;
                if den == 0.0 {
                    return None;
                }
                let t = -(r.conj() * a).im / den;
                let s = (r.conj() * (a + d * t)).re / r.norm_sqr();
                (t > 0.0 && t < 1.0 && s > 1.0).then_some(t)
            })
            .collect();
        cuts.sort_by(f64::total_cmp);
        let mut knots = vec![0.0];
        knots.extend(&cuts);
        knots.push(1.0);
        for (m, k) in knots.windows(2).enumerate() {
            if m > 0 {
                sign = -sign;
            }
            let (t0, t1) = (k[0], k[1]);
            let clustered = last && m + 1 == knots.len() - 1;
            let f = |sigma: f64| {
                if clustered {
                    // t = t1 − (t1−t0)(1−σ)² tames an endpoint root of Q
                    let t = t1 - (t1 - t0) * (1.0 - sigma).powi(2);
                    let u = a + d * t;
                    d * (2.0 * (t1 - t0) * (1.0 - sigma)) / (sign * sqrt_q(u))
                } else {
                    let u = a + d * (t0 + (t1 - t0) * sigma);
                    d * (t1 - t0) / (sign * sqrt_q(u))
                }
            };
            total += integrate(f, 0.0, 1.0, QUAD_TOL * (1.0 + u0.norm()), QUAD_INTERVALS)?.value;
        }
    }
    Ok((total, sign * sqrt_q(u0)))
}

/// `z` with `℘(z) = x₀`, `℘′(z) = y₀`: the integral of `dx/y` from the point
/// at infinity.
pub fn abel_jacobi_invert(
    g2: Complex64,
    g3: Complex64,
    x0: Complex64,
    y0: Complex64,
    tol: &ToleranceCtx,
) -> Result<AbelJacobiResult> {
    let e = cubic_roots(g2, g3)?;
    let rhs = 4.0 * x0 * x0 * x0 - g2 * x0 - g3;
    let scale = [
        y0.norm_sqr(),
        4.0 * x0.norm().powi(3),
        (g2 * x0).norm(),
        g3.norm(),
        1.0,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let off = (y0 * y0 - rhs).norm();
    if off > 1e-8 * scale {
        return Err(Error::NotOnCurve(off));
    }
    let lattice = genus1_periods(g2, g3)?;
    let wp = Weierstrass::new(&lattice, DEFAULT_TRUNC, tol)?;
    let e_scale = e.iter().map(|r| r.norm()).fold(0.0, f64::max);

    // near x = 0 the substitution u = x^{-1/2} degenerates; move by a half period
    let (x1, y1, shift) = if x0.norm() >= 0.2 * e_scale {
        (x0, y0, Complex64::new(0.0, 0.0))
    } else {
        let hv = wp.half_period_values()?;
        let halves = [
            lattice.omega1() / 2.0,
            lattice.omega2() / 2.0,
            (lattice.omega1() + lattice.omega2()) / 2.0,
        ];
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&i, &j| (e[j] - x0).norm().total_cmp(&(e[i] - x0).norm()));
        let mut chosen = None;
        for s in order {
            let (es, ea, eb) = (e[s], e[(s + 1) % 3], e[(s + 2) % 3]);
            let c = (es - ea) * (es - eb);
            let x1 = es + c / (x0 - es);
            if x1.norm() >= 0.2 * e_scale {
                let y1 = -c * y0 / ((x0 - es) * (x0 - es));
                let k = (0..3)
                    .min_by(|&i, &j| (hv[i] - es).norm().total_cmp(&(hv[j] - es).norm()))
                    .expect("three half periods");
                chosen = Some((x1, y1, -halves[k]));
                break;
            }
        }
        chosen.ok_or_else(|| Error::InvalidInput("no usable half-period shift".into()))?
    };

    let u0 = x1.sqrt().inv();
    let (integral, sq) = tracked_integral(g2, g3, u0)?;
    let y_end = -2.0 * u0.powi(-3) * sq;
    let mut z = if (y_end + y1).norm() < (y_end - y1).norm() {
        -integral
    } else {
        integral
    };
    z += shift;

    // Newton polish on ℘(z) = x₀ away from the ramification points
    for _ in 0..3 {
        let v = wp.eval(z)?;
        if v.dp.norm() <= 1e-6 * (1.0 + v.p.norm()).powf(1.5) {
            break;
        }
        z -= (v.p - x0) / v.dp;
    }
    let v = wp.eval(z)?;
    if (v.dp + y0).norm() < (v.dp - y0).norm() && y0.norm() > 1e-8 * (1.0 + x0.norm()).powf(1.5) {
        z = -z;
    }
    let z = lattice.reduce_point(z);
    let v = wp.eval(z)?;
    let residual_p = (v.p - x0).norm();
    let residual_dp = (v.dp - y0).norm();
    let bound = 1e-6;
    if residual_p > bound * (1.0 + x0.norm()) || residual_dp > bound * (1.0 + y0.norm()) {
        return Err(Error::NotConverged {
            tail: residual_p.max(residual_dp),
            tol: bound,
        });
    }
    Ok(AbelJacobiResult {
        z,
        omega1: lattice.omega1(),
        omega2: lattice.omega2(),
        residual_p,
        residual_dp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::eisenstein;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn invariants(tau: Complex64) -> (Complex64, Complex64) {
        let inv = eisenstein(
            &Lattice::from_tau(tau).unwrap(),
            60,
            &ToleranceCtx::default(),
        )
        .unwrap();
        (inv.g2, inv.g3)
    }

    #[test]
    fn square_lattice_round_trip() {
        let (g2, g3) = invariants(c(0.0, 1.0));
        let l = genus1_periods(g2, g3).unwrap();
        assert!(l.same_lattice(&Lattice::from_tau(c(0.0, 1.0)).unwrap(), 1e-8));
        assert!(l.tau().im > 0.0);
    }

    #[test]
    fn generic_lattice_round_trip() {
        for tau in [c(0.3, 1.1), c(-0.45, 0.95), c(0.1, 2.5)] {
            let (g2, g3) = invariants(tau);
            let l = genus1_periods(g2, g3).unwrap();
            assert!(
                l.same_lattice(&Lattice::from_tau(tau).unwrap(), 1e-8),
                "{tau}"
            );
        }
    }

    #[test]
    fn scaling_law() {
        let (g2, g3) = invariants(c(0.3, 1.1));
        let k = c(0.7, -1.3);
        let l = genus1_periods(g2, g3).unwrap();
        let ls = genus1_periods(g2 * k.powi(-4), g3 * k.powi(-6)).unwrap();
        assert!(ls.same_lattice(&l.scaled(k).unwrap(), 1e-8));
    }

    #[test]
    fn inversion_round_trip() {
        let tau = c(0.3, 1.1);
        let l = Lattice::from_tau(tau).unwrap();
        let wp = Weierstrass::new(&l, 60, &ToleranceCtx::default()).unwrap();
        for z in [c(0.21, 0.13), c(0.4, 0.6), c(-0.3, 0.25), c(0.05, -0.4)] {
            let v = wp.eval(z).unwrap();
            let r =
                abel_jacobi_invert(wp.g2(), wp.g3(), v.p, v.dp, &ToleranceCtx::default()).unwrap();
            assert!(l.distance_to_lattice(r.z - z) < 1e-6, "{z}: got {}", r.z);
            let r =
                abel_jacobi_invert(wp.g2(), wp.g3(), v.p, -v.dp, &ToleranceCtx::default()).unwrap();
            assert!(l.distance_to_lattice(r.z + z) < 1e-6);
        }
    }

    #[test]
    fn two_torsion_goes_to_half_periods() {
        for tau in [c(0.3, 1.1), c(0.0, 1.0)] {
            let l = Lattice::from_tau(tau).unwrap();
            let wp = Weierstrass::new(&l, 60, &ToleranceCtx::default()).unwrap();
            let e = wp.half_period_values().unwrap();
            let halves = [c(0.5, 0.0), tau / 2.0, (tau + 1.0) / 2.0];
            for k in 0..3 {
                let r = abel_jacobi_invert(
                    wp.g2(),
                    wp.g3(),
                    e[k],
                    c(0.0, 0.0),
                    &ToleranceCtx::default(),
                )
                .unwrap();
                assert!(
                    l.distance_to_lattice(r.z - halves[k]) < 1e-6,
                    "{tau} {k}: {}",
                    r.z
                );
            }
        }
    }

    #[test]
    fn off_curve_rejected() {
        let (g2, g3) = invariants(c(0.0, 1.0));
        assert!(matches!(
            abel_jacobi_invert(g2, g3, c(1.0, 0.0), c(5.0, 0.0), &ToleranceCtx::default()),
            Err(Error::NotOnCurve(_))
        ));
    }
}
