use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::theta::{matrix_from_rows, rows_of, theta_eval, SiegelTau, ThetaChar};
use crate::error::{Error, Result};
use crate::foundations::ToleranceCtx;

/// Period matrix `Π` (n × 2n), integer alternating form `E` on its columns,
/// Hermitian form `H` with `H(z, w) = zᵀ H w̄`, and semicharacter values on
/// the column basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PeriodDataJson", into = "PeriodDataJson")]
pub struct PeriodData {
    pi: DMatrix<Complex64>,
    e: DMatrix<i64>,
    h: DMatrix<Complex64>,
    rho: Vec<Complex64>,
}

/// Row-major JSON layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodDataJson {
    pub pi: Vec<Vec<Complex64>>,
    pub e: Vec<Vec<i64>>,
    pub h: Vec<Vec<Complex64>>,
    pub rho: Vec<Complex64>,
}

impl TryFrom<PeriodDataJson> for PeriodData {
    type Error = Error;
    fn try_from(j: PeriodDataJson) -> Result<Self> {
        PeriodData::new(
            matrix_from_rows(&j.pi, "pi")?,
            matrix_from_rows(&j.e, "e")?,
            matrix_from_rows(&j.h, "h")?,
            j.rho,
            &ToleranceCtx::default(),
        )
    }
}

impl From<PeriodData> for PeriodDataJson {
    fn from(p: PeriodData) -> Self {
        Self {
            pi: rows_of(&p.pi),
            e: rows_of(&p.e),
            h: rows_of(&p.h),
            rho: p.rho,
        }
    }
}

impl PeriodData {
    pub fn new(
        pi: DMatrix<Complex64>,
        e: DMatrix<i64>,
        h: DMatrix<Complex64>,
        rho: Vec<Complex64>,
        tol: &ToleranceCtx,
    ) -> Result<Self> {
        let n = pi.nrows();
        if n == 0 || pi.ncols() != 2 * n {
            return Err(Error::InvalidInput("period matrix must be n × 2n".into()));
        }
        if e.shape() != (2 * n, 2 * n) || h.shape() != (n, n) || rho.len() != 2 * n {
            return Err(Error::InvalidInput(
                "E must be 2n × 2n, H n × n, rho of length 2n".into(),
            ));
        }
        if e != -e.transpose() {
            return Err(Error::InvalidInput("E is not alternating".into()));
        }
        let hs = h.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let herm = (&h - h.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if herm > tol.bound(hs) {
            return Err(Error::InvalidInput(format!(
                "H is not Hermitian (defect {herm:e})"
            )));
        }
        if let Some(r) = rho.iter().find(|r| (r.norm() - 1.0).abs() > tol.bound(1.0)) {
            return Err(Error::InvalidInput(format!(
                "semicharacter value {r} is not of modulus one"
            )));
        }
        // columns of Π must span Cⁿ over R
        let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n {
                pi[(i, j)].re
            } else {
                pi[(i - n, j)].im
            }
        });
        let sv = real.clone().singular_values();
        let (smin, smax) = (sv.min(), sv.max());
        if smin <= 1e-10 * smax {
            return Err(Error::InvalidInput(
                "period columns are not linearly independent over R".into(),
            ));
        }
        Ok(Self { pi, e, h, rho })
    }

    /// `Π = (I, τ)`, `H = (Im τ)⁻¹`, `E = Im H` on the columns, `ρ ≡ 1`.
    pub fn principal(t: &SiegelTau) -> Result<Self> {
        let n = t.n();
        let tau = t.matrix();
        let pi = DMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
            } else {
                tau[(i, j - n)]
            }
        });
        let y = tau.map(|c| c.im);
        let yinv = y
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("Im tau is singular".into()))?;
        let h = yinv.map(|x| Complex64::new(x, 0.0));
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let im = im_h_on_basis(&pi, &h);
        let e = im.map(|x| x.round() as i64);
        Self::new(
            pi,
            e,
            h,
            vec![Complex64::new(1.0, 0.0); 2 * n],
            &ToleranceCtx::default(),
        )
    }

    pub fn n(&self) -> usize {
        self.pi.nrows()
    }

    pub fn pi(&self) -> &DMatrix<Complex64> {
        &self.pi
    }

    pub fn e(&self) -> &DMatrix<i64> {
        &self.e
    }

    pub fn h(&self) -> &DMatrix<Complex64> {
        &self.h
    }

    pub fn rho(&self) -> &[Complex64] {
        &self.rho
    }

    pub fn with_h(&self, h: DMatrix<Complex64>) -> Result<Self> {
        Self::new(
            self.pi.clone(),
            self.e.clone(),
            h,
            self.rho.clone(),
            &ToleranceCtx::default(),
        )
    }

    pub fn with_rho(&self, rho: Vec<Complex64>) -> Result<Self> {
        Self::new(
            self.pi.clone(),
            self.e.clone(),
            self.h.clone(),
            rho,
            &ToleranceCtx::default(),
        )
    }

    /// `H(z, w) = zᵀ H w̄`.
    pub fn hform(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        hform(&self.h, z, w)
    }

    /// The lattice vector `Π m`.
    pub fn lattice_vector(&self, m: &[i64]) -> Vec<Complex64> {
        (0..self.n())
            .map(|i| {
                m.iter()
                    .enumerate()
                    .map(|(j, &k)| self.pi[(i, j)] * k as f64)
                    .sum()
            })
            .collect()
    }
}

fn hform(h: &DMatrix<Complex64>, z: &[Complex64], w: &[Complex64]) -> Complex64 {
    let n = h.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += z[i] * h[(i, j)] * w[j].conj();
        }
    }
    s
}

fn column(pi: &DMatrix<Complex64>, j: usize) -> Vec<Complex64> {
    pi.column(j).iter().copied().collect()
}

fn im_h_on_basis(pi: &DMatrix<Complex64>, h: &DMatrix<Complex64>) -> DMatrix<f64> {
    let m = pi.ncols();
    DMatrix::from_fn(m, m, |i, j| hform(h, &column(pi, i), &column(pi, j)).im)
}

#[derive(Debug, Clone, Serialize)]
pub struct RiemannReport {
    pub first_ok: bool,
    pub second_ok: bool,
    /// `max |Im H(γᵢ, γⱼ) − Eᵢⱼ|`.
    pub first_residual: f64,
    pub min_eigenvalue: f64,
    pub im_h_on_basis: Vec<Vec<f64>>,
    pub details: Vec<String>,
}

/// First relation: `Im H = E` on the basis. Second: `H > 0`.
pub fn riemann_relations_check(p: &PeriodData, tol: &ToleranceCtx) -> RiemannReport {
    let im = im_h_on_basis(&p.pi, &p.h);
    let first_residual = im
        .iter()
        .zip(p.e.iter())
        .map(|(&x, &k)| (x - k as f64).abs())
        .fold(0.0, f64::max);
    let scale = im.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let first_ok = first_residual <= tol.bound(scale);
    let min_eigenvalue = SymmetricEigen::new(p.h.clone()).eigenvalues.min();
    let second_ok = min_eigenvalue > tol.abs_tol;
    let mut details = Vec::new();
    if !first_ok {
        details.push(format!(
            "Im H differs from E on the basis by {first_residual:e}"
        ));
    }
    if !second_ok {
        details.push(format!(
            "H is not positive definite (least eigenvalue {min_eigenvalue:e})"
        ));
    }
    RiemannReport {
        first_ok,
        second_ok,
        first_residual,
        min_eigenvalue,
        im_h_on_basis: rows_of(&im),
        details,
    }
}

/// Phase constant `c` in `ρ(γ₁+γ₂) = e^{i c E(γ₁,γ₂)} ρ(γ₁) ρ(γ₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemicharPhase {
    Pi,
    TwoPi,
}

impl SemicharPhase {
    fn constant(self) -> f64 {
        match self {
            SemicharPhase::Pi => PI,
            SemicharPhase::TwoPi => 2.0 * PI,
        }
    }
}

/// `ρ(Σ mₖ γₖ) = Π ρ(γₖ)^{mₖ} · exp(i c Σ_{k<l} mₖ mₗ E(γₖ, γₗ))`.
pub fn semicharacter(
    p: &PeriodData,
    m: &[i64],
    phase: SemicharPhase,
    tol: &ToleranceCtx,
) -> Result<Complex64> {
    let rep = riemann_relations_check(p, tol);
    if !rep.first_ok {
        return Err(Error::SemicharacterInconsistent(format!(
            "E is not Im H on the basis (residual {:e})",
            rep.first_residual
        )));
    }
    if m.len() != p.rho.len() {
        return Err(Error::InvalidInput(
            "lattice coordinates have the wrong length".into(),
        ));
    }
    let mut v = Complex64::new(1.0, 0.0);
    for (k, &mk) in m.iter().enumerate() {
        v *= p.rho[k].powi(mk as i32);
    }
    let mut pairing = 0i64;
    for k in 0..m.len() {
        for l in k + 1..m.len() {
            pairing += m[k] * m[l] * p.e[(k, l)];
        }
    }
    let c = phase.constant();
    Ok(v * Complex64::from_polar(1.0, c * (pairing.rem_euclid(2) as f64)))
}

/// `k̂_γ(z) = ρ(γ) exp(π H(z, γ) + ½ π H(γ, γ))` for `γ = Π m`.
pub fn appell_humbert_cocycle(
    p: &PeriodData,
    m: &[i64],
    z: &[Complex64],
    phase: SemicharPhase,
    tol: &ToleranceCtx,
) -> Result<Complex64> {
    let g = p.lattice_vector(m);
    let rho = semicharacter(p, m, phase, tol)?;
    Ok(rho * (PI * p.hform(z, &g) + 0.5 * PI * p.hform(&g, &g)).exp())
}

fn unit(n: usize, k: usize) -> Vec<i64> {
    (0..n).map(|i| i64::from(i == k)).collect()
}

/// Worst relative residual of `k̂_{γ₁+γ₂}(z) = k̂_{γ₁}(z+γ₂) k̂_{γ₂}(z)` over
/// all ordered pairs of basis vectors and the given points.
pub fn cocycle_residual(
    p: &PeriodData,
    zs: &[Vec<Complex64>],
    phase: SemicharPhase,
    tol: &ToleranceCtx,
) -> Result<f64> {
    let m = 2 * p.n();
    let mut worst = 0.0f64;
    for z in zs {
        for a in 0..m {
            for b in 0..m {
                let (ua, ub) = (unit(m, a), unit(m, b));
                let sum: Vec<i64> = ua.iter().zip(&ub).map(|(x, y)| x + y).collect();
                let gb = p.lattice_vector(&ub);
                let zb: Vec<Complex64> = z.iter().zip(&gb).map(|(x, y)| x + y).collect();
                let lhs = appell_humbert_cocycle(p, &sum, z, phase, tol)?;
                let rhs = appell_humbert_cocycle(p, &ua, &zb, phase, tol)?
                    * appell_humbert_cocycle(p, &ub, z, phase, tol)?;
                worst = worst.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()));
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseSelection {
    pub residual_pi: f64,
    pub residual_two_pi: f64,
    /// The phase whose cocycle identity holds, preferring `Pi` if both do.
    pub selected: Option<SemicharPhase>,
}

/// Tries both phase constants and keeps the one for which the cocycle
/// identity verifies.
pub fn select_semichar_phase(
    p: &PeriodData,
    zs: &[Vec<Complex64>],
    threshold: f64,
    tol: &ToleranceCtx,
) -> Result<PhaseSelection> {
    let residual_pi = cocycle_residual(p, zs, SemicharPhase::Pi, tol)?;
    let residual_two_pi = cocycle_residual(p, zs, SemicharPhase::TwoPi, tol)?;
    let selected = if residual_pi <= threshold {
        Some(SemicharPhase::Pi)
    } else if residual_two_pi <= threshold {
        Some(SemicharPhase::TwoPi)
    } else {
        None
    };
    Ok(PhaseSelection {
        residual_pi,
        residual_two_pi,
        selected,
    })
}

/// For principal data `Π = (I, τ)`: the ratio
/// `f(z+γ) / (k̂_γ(z) f(z))` at each point, where
/// `f(z) = exp(½π zᵀ(Im τ)⁻¹z) θ(z, τ)`. Theta's own multipliers differ from
/// the normal form by this quadratic factor, after which the ratio should
/// be a unit constant per `γ`.
pub fn theta_cocycle_ratios(
    p: &PeriodData,
    t: &SiegelTau,
    zs: &[Vec<Complex64>],
    radius: usize,
    phase: SemicharPhase,
    tol: &ToleranceCtx,
) -> Result<Vec<Vec<Complex64>>> {
    let n = t.n();
    let ch = ThetaChar::zero(n);
    let f = |z: &[Complex64]| -> Result<Complex64> {
        let q = hform_t(p.h(), z);
        Ok((0.5 * PI * q).exp() * theta_eval(&ch, z, t, radius, tol)?.value)
    };
    let mut out = Vec::new();
    for k in 0..2 * n {
        let uk = unit(2 * n, k);
        let g = p.lattice_vector(&uk);
        let mut row = Vec::new();
        for z in zs {
            let zg: Vec<Complex64> = z.iter().zip(&g).map(|(x, y)| x + y).collect();
            let k_hat = appell_humbert_cocycle(p, &uk, z, phase, tol)?;
            row.push(f(&zg)? / (k_hat * f(z)?));
        }
        out.push(row);
    }
    Ok(out)
}

/// `zᵀ H z` (bilinear, no conjugation).
fn hform_t(h: &DMatrix<Complex64>, z: &[Complex64]) -> Complex64 {
    let n = h.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += z[i] * h[(i, j)] * z[j];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zs(n: usize) -> Vec<Vec<Complex64>> {
        vec![
            (0..n).map(|k| c(0.13 + 0.1 * k as f64, -0.21)).collect(),
            (0..n).map(|k| c(-0.4, 0.3 - 0.05 * k as f64)).collect(),
        ]
    }

    #[test]
    fn genus1_standard_data() {
        let p = PeriodData::principal(&SiegelTau::genus1(c(0.0, 1.0)).unwrap()).unwrap();
        assert_eq!(p.e().as_slice(), &[0, 1, -1, 0]);
        let r = riemann_relations_check(&p, &ToleranceCtx::default());
        assert!(r.first_ok && r.second_ok);
        let neg = p.with_h(-p.h().clone()).unwrap();
        let r = riemann_relations_check(&neg, &ToleranceCtx::default());
        assert!(!r.second_ok);
    }

    #[test]
    fn real_columns_rejected() {
        let pi = DMatrix::from_row_slice(1, 2, &[c(1.0, 0.0), c(2.5, 0.0)]);
        let e = DMatrix::from_row_slice(2, 2, &[0, -1, 1, 0]);
        let h = DMatrix::from_element(1, 1, c(1.0, 0.0));
        assert!(PeriodData::new(pi, e, h, vec![c(1.0, 0.0); 2], &ToleranceCtx::default()).is_err());
    }

    #[test]
    fn cocycle_selects_pi_phase() {
        let tol = ToleranceCtx::default();
        for t in [
            SiegelTau::genus1(c(0.3, 1.1)).unwrap(),
            SiegelTau::diagonal(&[c(0.0, 1.0), c(0.2, 1.5)]).unwrap(),
        ] {
            let p = PeriodData::principal(&t).unwrap();
            let sel = select_semichar_phase(&p, &zs(t.n()), 1e-8, &tol).unwrap();
            assert_eq!(sel.selected, Some(SemicharPhase::Pi), "{sel:?}");
            assert!(sel.residual_two_pi > 1.0);
        }
    }

    #[test]
    fn zero_vector_gives_one() {
        let p = PeriodData::principal(&SiegelTau::genus1(c(0.3, 1.1)).unwrap()).unwrap();
        let v = appell_humbert_cocycle(
            &p,
            &[0, 0],
            &[c(0.7, -0.2)],
            SemicharPhase::Pi,
            &ToleranceCtx::default(),
        )
        .unwrap();
        assert!((v - 1.0).norm() < 1e-15);
    }

    #[test]
    fn theta_ratio_is_unit_constant() {
        let tol = ToleranceCtx::default();
        let t = SiegelTau::genus1(c(0.3, 1.1)).unwrap();
        let p = PeriodData::principal(&t).unwrap();
        let r = theta_cocycle_ratios(&p, &t, &t_points(), 14, SemicharPhase::Pi, &tol).unwrap();
        for row in r {
            assert!((row[0] - row[1]).norm() < 1e-9);
            assert!((row[0].norm() - 1.0).abs() < 1e-9);
        }
    }

    fn t_points() -> Vec<Vec<Complex64>> {
        vec![vec![c(0.11, 0.07)], vec![c(-0.35, 0.22)]]
    }

    #[test]
    fn json_layout() {
        let p = PeriodData::principal(&SiegelTau::genus1(c(0.0, 1.0)).unwrap()).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"e\":[[0,-1],[1,0]]"));
        let back: PeriodData = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
