use num_complex::Complex64;
use serde::Serialize;

use super::lambda::{a_from_lambda, Branch};
use crate::elliptic::{Lattice, ModulusTau, Weierstrass};
use crate::error::{fmt_c, Error, Result};
use crate::foundations::{cross_ratio, ExtComplex, MoebiusMap, ToleranceCtx};

/// The degree-two map `L = m ∘ ℘ : E → P¹` with `L(0) = 1`, `L(½) = −1`,
/// `L(τ/2) = a`, `L((τ+1)/2) = −a`, and `b = L(τ/4)`.
#[derive(Debug, Clone)]
pub struct LegendreFunctionData {
    pub tau: ModulusTau,
    pub moebius: MoebiusMap,
    pub lambda: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub branch: Branch,
    wp: Weierstrass,
}

impl LegendreFunctionData {
    /// `L(z)`, with `L = 1` at lattice points.
    pub fn eval(&self, z: Complex64) -> Result<ExtComplex> {
        match self.wp.p(z) {
            Ok(p) => Ok(self.moebius.apply(p.into())),
            Err(Error::PoleAt(_)) => Ok(self.moebius.apply(ExtComplex::Infinity)),
            Err(e) => Err(e),
        }
    }

    /// Finite value of `L(z)`; an error at the poles of `L`.
    pub fn eval_finite(&self, z: Complex64) -> Result<Complex64> {
        self.eval(z)?
            .as_finite()
            .ok_or_else(|| Error::PoleAt(format!("L has a pole at {}", fmt_c(z))))
    }

    /// `dL/dz = m′(℘) ℘′`, exact in terms of `℘`, `℘′`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let v = self.wp.eval(z)?;
        let m = &self.moebius;
        let den = m.c * v.p + m.d;
        Ok(v.dp * m.det() / (den * den))
    }

    pub fn weierstrass(&self) -> &Weierstrass {
        &self.wp
    }
}

fn build(
    e: [Complex64; 3],
    lambda: Complex64,
    branch: Branch,
    tol: &ToleranceCtx,
) -> Result<(MoebiusMap, Complex64)> {
    let a = a_from_lambda(lambda, branch)?;
    let m = MoebiusMap::from_three_points(
        [ExtComplex::Infinity, e[0].into(), e[1].into()],
        [1.0.into(), (-1.0).into(), a.into()],
        tol,
    )?;
    let fourth = m.apply(e[2].into());
    let target = ExtComplex::Finite(-a);
    let loose = tol.scaled(1e3);
    if !fourth.approx_eq(&target, &loose) {
        return Err(Error::FourthPointMismatch {
            got: fourth.as_finite().map_or("inf".into(), fmt_c),
            expected: fmt_c(-a),
        });
    }
    Ok((m, a))
}

pub fn legendre_function(
    tau: ModulusTau,
    trunc: usize,
    tol: &ToleranceCtx,
) -> Result<LegendreFunctionData> {
    legendre_function_with_branch(tau, trunc, tol, Branch::Plus)
}

pub fn legendre_function_with_branch(
    tau: ModulusTau,
    trunc: usize,
    tol: &ToleranceCtx,
    branch: Branch,
) -> Result<LegendreFunctionData> {
    let wp = Weierstrass::new(&Lattice::from_tau(tau.tau())?, trunc, tol)?;
    let e = wp.half_period_values()?;
    let lambda = cross_ratio(
        ExtComplex::Infinity,
        e[0].into(),
        e[1].into(),
        e[2].into(),
        tol,
    )?
    .as_finite()
    .ok_or_else(|| Error::InvalidForm("half-period values are degenerate".into()))?;
    let (m, a, used) = match build(e, lambda, branch, tol) {
        Ok((m, a)) => (m, a, branch),
        Err(Error::FourthPointMismatch { .. }) => {
            let (m, a) = build(e, lambda, branch.flip(), tol)?;
            (m, a, branch.flip())
        }
        Err(other) => return Err(other),
    };
    let p = wp.p(tau.tau() / 4.0)?;
    let b = m
        .apply(p.into())
        .as_finite()
        .ok_or_else(|| Error::InvalidForm("L(τ/4) is infinite".into()))?;
    Ok(LegendreFunctionData {
        tau,
        moebius: m,
        lambda,
        a,
        b,
        branch: used,
        wp,
    })
}

/// Largest residuals of the relations satisfied by `L`, each relative to
/// `1 + |L(z)|`.
#[derive(Debug, Clone, Serialize)]
pub struct LegendreRelationsReport {
    pub shift_one: f64,
    pub shift_tau: f64,
    pub even: f64,
    pub shift_half: f64,
    pub shift_half_tau: f64,
    pub b_squared: f64,
    pub max_residual: f64,
}

/// `L(z+1) = L(z+τ) = L(−z) = L(z)`, `L(z+½) = −L(z)`, `L(z+τ/2) = a/L(z)`
/// at each sample, and `b² = a`.
pub fn legendre_relations_check(
    d: &LegendreFunctionData,
    zs: &[Complex64],
) -> Result<LegendreRelationsReport> {
    let tau = d.tau.tau();
    let mut r = [0.0f64; 5];
    for &z in zs {
        let l = d.eval_finite(z)?;
        let scale = 1.0 + l.norm();
        let vals = [
            d.eval_finite(z + 1.0)? - l,
            d.eval_finite(z + tau)? - l,
            d.eval_finite(-z)? - l,
            d.eval_finite(z + 0.5)? + l,
            d.eval_finite(z + tau / 2.0)? - d.a / l,
        ];
        for (slot, v) in r.iter_mut().zip(vals) {
            *slot = slot.max(v.norm() / scale);
        }
    }
    let b_squared = (d.b * d.b - d.a).norm() / (1.0 + d.a.norm());
    let max_residual = r.iter().copied().fold(b_squared, f64::max);
    Ok(LegendreRelationsReport {
        shift_one: r[0],
        shift_tau: r[1],
        even: r[2],
        shift_half: r[3],
        shift_half_tau: r[4],
        b_squared,
        max_residual,
    })
}
