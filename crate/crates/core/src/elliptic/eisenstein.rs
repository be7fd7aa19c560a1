//! Lattice sums `Σ' ω^{-k}` with an analytic tail correction.
//!
//! The square box `max(|m|,|n|) ≤ N` is summed directly in the reduced basis
//! `ω = ω₁(m + nτ)`. For rows `|n| ≤ N` the missing terms `|m| > N` are
//! evaluated by Euler-Maclaurin with an explicit remainder bound; rows
//! `|n| > N` are exponentially small (Lipschitz formula) and only bounded.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use crate::error::{Error, Result};
use crate::foundations::ToleranceCtx;

pub const DEFAULT_TRUNC: usize = 60;
pub const MIN_TRUNC: usize = 20;

/// Number of tail moments kept, for `k = 4, 6, ..., 18`.
pub(crate) const TAIL_MOMENTS: usize = 8;

const EM_TERMS: usize = 6;
/// `B_{2j}` for `j = 1..=6`.
const BERNOULLI: [f64; EM_TERMS] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];
const ZETA_12: f64 = 1.000_246_086_553_308;

fn rising(k: f64, r: usize) -> f64 {
    (0..r).map(|i| k + i as f64).product()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `Σ_{m ≥ a} (m + c)^{-k}` by Euler-Maclaurin, with a bound on the remainder.
fn em_tail(k: u32, a: f64, c: Complex64) -> (Complex64, f64) {
    let x = c + a;
    let kf = k as f64;
    let ki = k as i32;
    let mut s = x.powi(1 - ki) / (kf - 1.0) + 0.5 * x.powi(-ki);
    for (j, b) in BERNOULLI.iter().enumerate() {
        let j = j + 1;
        let r = 2 * j - 1;
        s += b / factorial(2 * j) * rising(kf, r) * x.powi(-ki - r as i32);
    }
    let p = EM_TERMS;
    let lower = a + c.re;
    let rem = 2.0 * ZETA_12 / (2.0 * PI).powi(2 * p as i32)
        * rising(kf, 2 * p)
        * lower.powf(1.0 - kf - 2.0 * p as f64)
        / (kf + 2.0 * p as f64 - 1.0);
    (s, rem)
}

/// Bound on `|Σ_{|n|>N} Σ_m (m + nτ)^{-k}|` from the Lipschitz formula.
fn far_rows_bound(k: u32, n: usize, tau_im: f64) -> f64 {
    let x = (-2.0 * PI * tau_im).exp();
    let xn = x.powi(n as i32 + 1);
    2.0 * (2.0 * PI).powi(k as i32) * xn / ((1.0 - x) * (1.0 - xn).powi(k as i32))
}

struct RowOut {
    s4: Complex64,
    s6: Complex64,
    abs_sum: f64,
    tails: [Complex64; TAIL_MOMENTS],
    rem: [f64; TAIL_MOMENTS],
}

/// Box sums and tail moments of the reduced lattice, in units of `ω₁`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeSums {
    pub lattice: Lattice,
    pub reduced: Lattice,
    pub trunc: usize,
    /// `Σ'_{box} (m+nτ)^{-4}` and `Σ'_{box} (m+nτ)^{-6}`.
    pub box_sums: [Complex64; 2],
    /// `Σ_{outside box} (m+nτ)^{-k}` for `k = 4, 6, ..., 18`.
    pub tails: [Complex64; TAIL_MOMENTS],
    /// Error bounds on `box_sums + tails[0..2]` (truncation plus rounding).
    pub errors: [f64; 2],
    /// Error bounds on the individual tail moments.
    pub tail_errors: [f64; TAIL_MOMENTS],
}

impl LatticeSums {
    pub fn new(lattice: &Lattice, trunc: usize) -> Result<Self> {
        if trunc < MIN_TRUNC {
            return Err(Error::InvalidInput(format!(
                "lattice truncation must be at least {MIN_TRUNC}, got {trunc}"
            )));
        }
        let reduced = lattice.reduced();
        let tau = reduced.tau();
        let n = trunc as i64;
        let a = (trunc + 1) as f64;
        let rows: Vec<RowOut> = (-n..=n)
            .into_par_iter()
            .map(|row| {
                let shift = tau * row as f64;
                let mut s4 = Complex64::new(0.0, 0.0);
                let mut s6 = Complex64::new(0.0, 0.0);
                let mut abs_sum = 0.0;
                for m in -n..=n {
                    if m == 0 && row == 0 {
                        continue;
                    }
                    let w = shift + m as f64;
                    let w2 = (w * w).inv();
                    let w4 = w2 * w2;
                    s4 += w4;
                    s6 += w4 * w2;
                    abs_sum += w4.norm();
                }
                let mut tails = [Complex64::new(0.0, 0.0); TAIL_MOMENTS];
                let mut rem = [0.0; TAIL_MOMENTS];
                for (i, (t, r)) in tails.iter_mut().zip(rem.iter_mut()).enumerate() {
                    let k = 4 + 2 * i as u32;
                    let (p, ep) = em_tail(k, a, shift);
                    let (q, eq) = em_tail(k, a, -shift);
                    *t = p + q;
                    *r = ep + eq;
                }
                RowOut {
                    s4,
                    s6,
                    abs_sum,
                    tails,
                    rem,
                }
            })
            .collect();

        let mut box_sums = [Complex64::new(0.0, 0.0); 2];
        let mut tails = [Complex64::new(0.0, 0.0); TAIL_MOMENTS];
        let mut tail_errors = [0.0; TAIL_MOMENTS];
        let mut abs_sum = 0.0;
        for r in &rows {
            box_sums[0] += r.s4;
            box_sums[1] += r.s6;
            abs_sum += r.abs_sum;
            for i in 0..TAIL_MOMENTS {
                tails[i] += r.tails[i];
                tail_errors[i] += r.rem[i];
            }
        }
        for (i, e) in tail_errors.iter_mut().enumerate() {
            *e += far_rows_bound(4 + 2 * i as u32, trunc, tau.im);
        }
        let count = ((2 * trunc + 1) * (2 * trunc + 1)) as f64;
        let rounding = 8.0 * f64::EPSILON * count.sqrt() * abs_sum.max(1.0);
        let errors = [tail_errors[0] + rounding, tail_errors[1] + rounding];
        Ok(Self {
            lattice: *lattice,
            reduced,
            trunc,
            box_sums,
            tails,
            errors,
            tail_errors,
        })
    }

    /// `G_k = Σ' ω^{-k}` in lattice units for `k = 4` or `6`.
    pub fn g(&self, k: u32) -> Complex64 {
        let i = match k {
            4 => 0,
            6 => 1,
            _ => panic!("only G4 and G6 are stored"),
        };
        (self.box_sums[i] + self.tails[i]) * self.reduced.omega1().powi(-(k as i32))
    }

    fn g_error(&self, k: u32) -> f64 {
        let i = if k == 4 { 0 } else { 1 };
        self.errors[i] * self.reduced.omega1().norm().powi(-(k as i32))
    }
}

/// `g₂, g₃`, the discriminant and `j = g₂³/Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EisensteinInvariants {
    pub g2: Complex64,
    pub g3: Complex64,
    pub delta: Complex64,
    pub j_paper: Complex64,
    pub tail_bound_g2: f64,
    pub tail_bound_g3: f64,
}

impl EisensteinInvariants {
    /// Derives `Δ` and `j` from given `g₂, g₃`.
    pub fn from_g(g2: Complex64, g3: Complex64) -> Result<Self> {
        let delta = g2 * g2 * g2 - 27.0 * g3 * g3;
        let scale = (g2.norm().powi(3)).max(27.0 * g3.norm_sqr());
        if delta.norm() <= 1e-12 * scale || scale == 0.0 {
            return Err(Error::SingularCurve(delta.norm()));
        }
        Ok(Self {
            g2,
            g3,
            delta,
            j_paper: g2 * g2 * g2 / delta,
            tail_bound_g2: 0.0,
            tail_bound_g3: 0.0,
        })
    }

    /// The classical normalization, `1728 j`.
    pub fn j_classical(&self) -> Complex64 {
        self.j_paper * 1728.0
    }
}

pub fn invariants_from_sums(
    sums: &LatticeSums,
    tol: &ToleranceCtx,
) -> Result<EisensteinInvariants> {
    let g2 = 60.0 * sums.g(4);
    let g3 = 140.0 * sums.g(6);
    let tb2 = 60.0 * sums.g_error(4);
    let tb3 = 140.0 * sums.g_error(6);
    let scale = sums.reduced.omega1().norm();
    // errors are judged against the natural size of G_k for this lattice
    let nat2 = 60.0 * scale.powi(-4);
    let nat3 = 140.0 * scale.powi(-6);
    if tb2 > tol.bound(g2.norm().max(nat2)) {
        return Err(Error::NotConverged {
            tail: tb2,
            tol: tol.bound(g2.norm()),
        });
    }
    if tb3 > tol.bound(g3.norm().max(nat3)) {
        return Err(Error::NotConverged {
            tail: tb3,
            tol: tol.bound(g3.norm()),
        });
    }
    let delta = g2 * g2 * g2 - 27.0 * g3 * g3;
    Ok(EisensteinInvariants {
        g2,
        g3,
        delta,
        j_paper: g2 * g2 * g2 / delta,
        tail_bound_g2: tb2,
        tail_bound_g3: tb3,
    })
}

/// `g₂ = 60 Σ' ω⁻⁴`, `g₃ = 140 Σ' ω⁻⁶` over the lattice.
pub fn eisenstein(
    lattice: &Lattice,
    trunc: usize,
    tol: &ToleranceCtx,
) -> Result<EisensteinInvariants> {
    invariants_from_sums(&LatticeSums::new(lattice, trunc)?, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn direct_tail(k: u32, a: i64, shift: Complex64, terms: i64) -> Complex64 {
        (a..a + terms)
            .map(|m| (shift + m as f64).powi(-(k as i32)))
            .sum()
    }

    #[test]
    fn euler_maclaurin_matches_brute_force() {
        let shift = c(3.0, 20.0);
        let (s, rem) = em_tail(4, 21.0, shift);
        // brute force up to 2e5 plus the integral of what remains
        let m_end = 200_000;
        let head = direct_tail(4, 21, shift, m_end - 21);
        let rest = (shift + m_end as f64).powi(-3) / 3.0;
        assert!(
            (s - head - rest).norm() < 1e-12 * s.norm().max(1e-8),
            "{s} vs {}",
            head + rest
        );
        assert!(rem < 1e-15);
    }

    #[test]
    fn square_lattice_g3_vanishes() {
        let tol = ToleranceCtx::default();
        let inv = eisenstein(&Lattice::from_tau(c(0.0, 1.0)).unwrap(), 60, &tol).unwrap();
        assert!(inv.g3.norm() < 1e-9);
        assert!((inv.j_paper - 1.0).norm() < 1e-9);
        // classical value g2(i) = Γ(1/4)^8 / (16 π^2)
        let gamma_quarter: f64 = 3.625_609_908_221_908;
        let g2 = gamma_quarter.powi(8) / (16.0 * PI * PI);
        assert!((inv.g2.re - g2).abs() < 1e-9, "{} vs {g2}", inv.g2);
    }

    #[test]
    fn hexagonal_g2_vanishes() {
        let tol = ToleranceCtx::default();
        let rho = Complex64::from_polar(1.0, PI / 3.0);
        let inv = eisenstein(&Lattice::from_tau(rho).unwrap(), 60, &tol).unwrap();
        assert!(inv.g2.norm() < 1e-9);
        assert!(inv.j_paper.norm() < 1e-9);
    }

    #[test]
    fn truncation_doubling_within_bound() {
        let tol = ToleranceCtx::default();
        let l = Lattice::from_tau(c(0.3, 1.1)).unwrap();
        let a = eisenstein(&l, 40, &tol).unwrap();
        let b = eisenstein(&l, 80, &tol).unwrap();
        assert!((a.g2 - b.g2).norm() <= a.tail_bound_g2 + b.tail_bound_g2);
        assert!((a.g3 - b.g3).norm() <= a.tail_bound_g3 + b.tail_bound_g3);
    }

    #[test]
    fn rejects_small_trunc() {
        let l = Lattice::from_tau(c(0.0, 1.0)).unwrap();
        assert!(matches!(
            eisenstein(&l, 10, &ToleranceCtx::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn not_converged_with_tight_tolerance() {
        let l = Lattice::from_tau(c(0.0, 1.0)).unwrap();
        let tight = ToleranceCtx::new(1e-30, 1e-30).unwrap();
        assert!(matches!(
            eisenstein(&l, 20, &tight),
            Err(Error::NotConverged { .. })
        ));
    }
}
