use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundations::ToleranceCtx;

/// Theta sums run over `(2R+1)ⁿ` points, so the genus is capped.
pub const MAX_GENUS: usize = 3;

/// A point of the Siegel upper half space: `τ = τᵀ`, `Im τ > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Complex64>>", into = "Vec<Vec<Complex64>>")]
pub struct SiegelTau {
    tau: DMatrix<Complex64>,
    min_eig: f64,
}

impl TryFrom<Vec<Vec<Complex64>>> for SiegelTau {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        SiegelTau::from_rows(&rows, &ToleranceCtx::default())
    }
}

impl From<SiegelTau> for Vec<Vec<Complex64>> {
    fn from(t: SiegelTau) -> Self {
        rows_of(&t.tau)
    }
}

pub(crate) fn rows_of<T: nalgebra::Scalar + Copy>(m: &DMatrix<T>) -> Vec<Vec<T>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub(crate) fn matrix_from_rows<T: nalgebra::Scalar + Copy>(
    rows: &[Vec<T>],
    what: &str,
) -> Result<DMatrix<T>> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    if nr == 0 || nc == 0 || rows.iter().any(|r| r.len() != nc) {
        return Err(Error::InvalidInput(format!(
            "{what}: rows must be nonempty and of equal length"
        )));
    }
    Ok(DMatrix::from_fn(nr, nc, |i, j| rows[i][j]))
}

impl SiegelTau {
    pub fn new(tau: DMatrix<Complex64>, tol: &ToleranceCtx) -> Result<Self> {
        let n = tau.nrows();
        if n == 0 || tau.ncols() != n {
            return Err(Error::InvalidInput(
                "tau must be a nonempty square matrix".into(),
            ));
        }
        let scale = tau.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let asym = (&tau - tau.transpose())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if asym > tol.bound(scale) {
            return Err(Error::InvalidInput(format!(
                "tau is not symmetric (defect {asym:e})"
            )));
        }
        let y = tau.map(|c| c.im);
        let y = (&y + y.transpose()) * 0.5;
        let min_eig = SymmetricEigen::new(y).eigenvalues.min();
        if min_eig <= tol.abs_tol {
            return Err(Error::InvalidInput(format!(
                "Im tau is not positive definite (least eigenvalue {min_eig:e})"
            )));
        }
        Ok(Self { tau, min_eig })
    }

    pub fn from_rows(rows: &[Vec<Complex64>], tol: &ToleranceCtx) -> Result<Self> {
        Self::new(matrix_from_rows(rows, "tau")?, tol)
    }

    pub fn genus1(tau: Complex64) -> Result<Self> {
        Self::new(DMatrix::from_element(1, 1, tau), &ToleranceCtx::default())
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        let n = entries.len();
        Self::new(
            DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    entries[i]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
            &ToleranceCtx::default(),
        )
    }

    pub fn n(&self) -> usize {
        self.tau.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.tau
    }

    /// Least eigenvalue of `Im τ`.
    pub fn im_min_eigenvalue(&self) -> f64 {
        self.min_eig
    }
}

/// Rational characteristic `a ∈ Qⁿ`, serialized as `[num, den]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaChar {
    pub a: Vec<Rational64>,
}

impl ThetaChar {
    pub fn zero(n: usize) -> Self {
        Self {
            a: vec![Rational64::from_integer(0); n],
        }
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.a
            .iter()
            .map(|r| r.to_f64().expect("small rational"))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThetaValue {
    pub value: Complex64,
    /// Bound on the terms outside the summation box.
    pub tail_bound: f64,
    pub radius: usize,
}

/// Upper bound for `Σ |term|` over `‖p‖∞ > radius`, using
/// `|term| ≤ exp(−πλ|v|² + 2π|Im z||v|)` with `v = p + a`.
fn tail_bound(n: usize, radius: usize, lambda: f64, im_z: f64, a_max: f64) -> f64 {
    let peak = im_z / lambda;
    let mut total = 0.0;
    let mut k = radius + 1;
    loop {
        let kf = k as f64;
        let r = (kf - a_max).max(peak);
        let shell = 2.0 * n as f64 * (2.0 * kf + 1.0).powi(n as i32 - 1);
        let term = shell * (-PI * lambda * r * r + 2.0 * PI * im_z * r).exp();
        total += term;
        if (kf - a_max > peak && term <= 1e-18 * total) || term == 0.0 || k > radius + 100_000 {
            if k > radius + 100_000 {
                return f64::INFINITY;
            }
            break;
        }
        k += 1;
    }
    total
}

/// Partial sum of `θ[a,0](z, τ)` over `‖p‖∞ ≤ radius`, with its tail bound.
pub fn theta_sum(
    ch: &ThetaChar,
    z: &[Complex64],
    t: &SiegelTau,
    radius: usize,
) -> Result<ThetaValue> {
    let n = t.n();
    if n > MAX_GENUS {
        return Err(Error::InvalidInput(format!(
            "genus {n} exceeds the cap {MAX_GENUS}"
        )));
    }
    if ch.a.len() != n || z.len() != n {
        return Err(Error::InvalidInput(format!(
            "characteristic and z must have length {n}"
        )));
    }
    let a = ch.as_f64();
    let tau = t.matrix();
    let r = radius as i64;
    let side = (2 * r + 1) as usize;
    let inner = side.pow(n as u32 - 1);
    let rows: Vec<Complex64> = (-r..=r)
        .into_par_iter()
        .map(|p0| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut v = vec![0.0; n];
            for idx in 0..inner {
                v[0] = p0 as f64 + a[0];
                let mut rest = idx;
                for vi in v.iter_mut().skip(1) {
                    *vi = (rest % side) as f64 - r as f64;
                    rest /= side;
                }
                for (vi, ai) in v.iter_mut().zip(&a).skip(1) {
                    *vi += ai;
                }
                let mut quad = Complex64::new(0.0, 0.0);
                let mut lin = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    lin += z[i] * v[i];
                    for j in 0..n {
                        quad += tau[(i, j)] * (v[i] * v[j]);
                    }
                }
                acc += (Complex64::new(0.0, PI) * (quad + 2.0 * lin)).exp();
            }
            acc
        })
        .collect();
    let value = rows.iter().sum();
    let im_z = z.iter().map(|c| c.im * c.im).sum::<f64>().sqrt();
    let a_max = a.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let tail = tail_bound(n, radius, t.im_min_eigenvalue(), im_z, a_max);
    Ok(ThetaValue {
        value,
        tail_bound: tail,
        radius,
    })
}

/// `θ[a,0](z, τ)`; fails if the tail bound exceeds the tolerance.
pub fn theta_eval(
    ch: &ThetaChar,
    z: &[Complex64],
    t: &SiegelTau,
    radius: usize,
    tol: &ToleranceCtx,
) -> Result<ThetaValue> {
    let v = theta_sum(ch, z, t, radius)?;
    let allowed = tol.bound(v.value.norm());
    if !(v.tail_bound <= allowed) {
        return Err(Error::NotConverged {
            tail: v.tail_bound,
            tol: allowed,
        });
    }
    Ok(v)
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaFeReport {
    /// Worst relative residual of `θ(z+m) = e^{2πi aᵀm} θ(z)`.
    pub integer_shift_residual: f64,
    /// Worst relative residual of `θ(z+τm) = e^{−πi mᵀτm − 2πi zᵀm} θ(z)`.
    pub tau_shift_residual: f64,
    pub pass: bool,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

/// Checks both quasi-periodicity relations for the basis vectors `m = eₖ`
/// at each of the points `zs`.
pub fn theta_functional_equation_check(
    ch: &ThetaChar,
    t: &SiegelTau,
    zs: &[Vec<Complex64>],
    radius: usize,
    tol: &ToleranceCtx,
    threshold: f64,
) -> Result<ThetaFeReport> {
    let n = t.n();
    let a = ch.as_f64();
    let (mut int_res, mut tau_res) = (0.0f64, 0.0f64);
    for z in zs {
        let base = theta_eval(ch, z, t, radius, tol)?.value;
        for k in 0..n {
            let mut zi = z.clone();
            zi[k] += 1.0;
            let lhs = theta_eval(ch, &zi, t, radius, tol)?.value;
            let mult = Complex64::from_polar(1.0, 2.0 * PI * a[k]);
            int_res = int_res.max(rel(lhs, mult * base));

            let mut zt = z.clone();
            for (i, zti) in zt.iter_mut().enumerate() {
                *zti += t.matrix()[(i, k)];
            }
            let lhs = theta_eval(ch, &zt, t, radius, tol)?.value;
            let expo = Complex64::new(0.0, -PI) * t.matrix()[(k, k)]
                + Complex64::new(0.0, -2.0 * PI) * z[k];
            tau_res = tau_res.max(rel(lhs, expo.exp() * base));
        }
    }
    Ok(ThetaFeReport {
        integer_shift_residual: int_res,
        tau_shift_residual: tau_res,
        pass: int_res <= threshold && tau_res <= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn theta_at_i() {
        let t = SiegelTau::genus1(c(0.0, 1.0)).unwrap();
        let v = theta_eval(
            &ThetaChar::zero(1),
            &[c(0.0, 0.0)],
            &t,
            6,
            &ToleranceCtx::default(),
        )
        .unwrap();
        // π^{1/4} / Γ(3/4)
        assert!((v.value - 1.086_434_811_213_308).norm() < 1e-14);
        assert!(v.tail_bound < 1e-40);
    }

    #[test]
    fn even_in_z() {
        let t = SiegelTau::genus1(c(0.2, 0.8)).unwrap();
        let ch = ThetaChar::zero(1);
        let tol = ToleranceCtx::default();
        let z = c(0.31, -0.17);
        let a = theta_eval(&ch, &[z], &t, 10, &tol).unwrap().value;
        let b = theta_eval(&ch, &[-z], &t, 10, &tol).unwrap().value;
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn diagonal_factorizes() {
        let tol = ToleranceCtx::default();
        let z0 = [c(0.0, 0.0)];
        let t1 = theta_eval(
            &ThetaChar::zero(1),
            &z0,
            &SiegelTau::genus1(c(0.0, 1.0)).unwrap(),
            8,
            &tol,
        )
        .unwrap();
        let t2 = theta_eval(
            &ThetaChar::zero(1),
            &z0,
            &SiegelTau::genus1(c(0.0, 2.0)).unwrap(),
            8,
            &tol,
        )
        .unwrap();
        let d = SiegelTau::diagonal(&[c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
        let t12 = theta_eval(
            &ThetaChar::zero(2),
            &[c(0.0, 0.0), c(0.0, 0.0)],
            &d,
            8,
            &tol,
        )
        .unwrap();
        assert!((t12.value - t1.value * t2.value).norm() < 1e-14);
    }

    #[test]
    fn half_characteristic_flips_sign() {
        let t = SiegelTau::genus1(c(0.1, 1.1)).unwrap();
        let ch = ThetaChar {
            a: vec![Rational64::new(1, 2)],
        };
        let r = theta_functional_equation_check(
            &ch,
            &t,
            &[vec![c(0.23, 0.1)]],
            10,
            &ToleranceCtx::default(),
            1e-10,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn tail_bound_shrinks_with_radius() {
        let t = SiegelTau::genus1(c(0.0, 0.3)).unwrap();
        let ch = ThetaChar::zero(1);
        let z = [c(0.1, 0.2)];
        let small = theta_sum(&ch, &z, &t, 3).unwrap();
        let big = theta_sum(&ch, &z, &t, 6).unwrap();
        assert!(big.tail_bound < small.tail_bound);
        assert!((big.value - small.value).norm() <= small.tail_bound);
        assert!(matches!(
            theta_eval(&ch, &z, &t, 2, &ToleranceCtx::default()),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn rejects_bad_tau() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
        assert!(SiegelTau::new(m, &ToleranceCtx::default()).is_err());
        assert!(SiegelTau::genus1(c(0.3, -1.0)).is_err());
    }

    #[test]
    fn char_serde() {
        let ch: ThetaChar = serde_json::from_str("[[1,2],[0,1]]").unwrap();
        assert_eq!(
            ch.a,
            vec![Rational64::new(1, 2), Rational64::from_integer(0)]
        );
    }
}
