use num_complex::Complex64;
use rayon::prelude::*;

use super::eisenstein::{invariants_from_sums, EisensteinInvariants, LatticeSums, TAIL_MOMENTS};
use super::lattice::Lattice;
use crate::error::{fmt_c, Error, Result};
use crate::foundations::ToleranceCtx;

/// `℘` and `℘′` for a fixed lattice, with the lattice sums cached.
#[derive(Debug, Clone)]
pub struct Weierstrass {
    sums: LatticeSums,
    inv: EisensteinInvariants,
    tol: ToleranceCtx,
}

/// One evaluation of `℘`, `℘′` together with an error estimate for `℘`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpValue {
    pub p: Complex64,
    pub dp: Complex64,
    pub error: f64,
}

impl Weierstrass {
    pub fn new(lattice: &Lattice, trunc: usize, tol: &ToleranceCtx) -> Result<Self> {
        let sums = LatticeSums::new(lattice, trunc)?;
        let inv = invariants_from_sums(&sums, tol)?;
        Ok(Self {
            sums,
            inv,
            tol: *tol,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.sums.lattice
    }

    pub fn invariants(&self) -> &EisensteinInvariants {
        &self.inv
    }

    pub fn g2(&self) -> Complex64 {
        self.inv.g2
    }

    pub fn g3(&self) -> Complex64 {
        self.inv.g3
    }

    pub fn tolerance(&self) -> &ToleranceCtx {
        &self.tol
    }

    /// `℘(z)` and `℘′(z)`.
    pub fn eval(&self, z: Complex64) -> Result<WpValue> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidInput("z is not finite".into()));
        }
        let red = &self.sums.reduced;
        let w1 = red.omega1();
        let zr = red.reduce_point(z);
        if zr.norm() <= self.tol.bound(w1.norm()) {
            return Err(Error::PoleAt(fmt_c(z)));
        }
        let u = zr / w1;
        let tau = red.tau();
        let n = self.sums.trunc as i64;

        let rows: Vec<(Complex64, Complex64, f64)> = (-n..=n)
            .into_par_iter()
            .map(|row| {
                let shift = tau * row as f64;
                let mut p = Complex64::new(0.0, 0.0);
                let mut dp = Complex64::new(0.0, 0.0);
                let mut mag = 0.0;
                for m in -n..=n {
                    if m == 0 && row == 0 {
                        continue;
                    }
                    let w = shift + m as f64;
                    let d = (u - w).inv();
                    let d2 = d * d;
                    let t = d2 - (w * w).inv();
                    p += t;
                    dp += d2 * d;
                    mag += t.norm();
                }
                (p, dp, mag)
            })
            .collect();
        let mut p = u.inv() * u.inv();
        let mut dp = -2.0 * p / u;
        let mut mag = p.norm();
        for (rp, rdp, rm) in rows {
            p += rp;
            dp -= 2.0 * rdp;
            mag += rm;
        }
        let u2 = u * u;
        let mut upow = Complex64::new(1.0, 0.0);
        let mut tail_err = 0.0;
        for j in 1..=TAIL_MOMENTS {
            let jf = j as f64;
            let t = self.sums.tails[j - 1];
            // u^{2j-1}
            let odd = upow * u;
            upow *= u2;
            p += (2.0 * jf + 1.0) * upow * t;
            dp += (2.0 * jf + 1.0) * (2.0 * jf) * odd * t;
            tail_err += (2.0 * jf + 1.0) * upow.norm() * self.sums.tail_errors[j - 1];
        }
        let count = ((2 * n + 1) * (2 * n + 1)) as f64;
        let err = tail_err + 8.0 * f64::EPSILON * count.sqrt() * mag;
        Ok(WpValue {
            p: p / (w1 * w1),
            dp: dp / (w1 * w1 * w1),
            error: err / w1.norm_sqr(),
        })
    }

    pub fn p(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(z)?.p)
    }

    /// `℘″ = 6℘² − g₂/2`.
    pub fn p_second(&self, p: Complex64) -> Complex64 {
        6.0 * p * p - 0.5 * self.inv.g2
    }

    /// `(℘′)² − (4℘³ − g₂℘ − g₃)`.
    pub fn ode_residual(&self, z: Complex64) -> Result<Complex64> {
        let v = self.eval(z)?;
        Ok(v.dp * v.dp - (4.0 * v.p * v.p * v.p - self.inv.g2 * v.p - self.inv.g3))
    }

    /// `e₁ = ℘(ω₁/2)`, `e₂ = ℘(ω₂/2)`, `e₃ = ℘((ω₁+ω₂)/2)`.
    pub fn half_period_values(&self) -> Result<[Complex64; 3]> {
        let l = self.lattice();
        let (w1, w2) = (l.omega1(), l.omega2());
        Ok([
            self.p(w1 / 2.0)?,
            self.p(w2 / 2.0)?,
            self.p((w1 + w2) / 2.0)?,
        ])
    }
}

/// One-shot `(℘(z), ℘′(z))`.
pub fn weierstrass_p(
    lattice: &Lattice,
    z: Complex64,
    trunc: usize,
) -> Result<(Complex64, Complex64)> {
    let w = Weierstrass::new(lattice, trunc, &ToleranceCtx::default())?;
    let v = w.eval(z)?;
    Ok((v.p, v.dp))
}

pub fn half_period_values(lattice: &Lattice, trunc: usize) -> Result<[Complex64; 3]> {
    Weierstrass::new(lattice, trunc, &ToleranceCtx::default())?.half_period_values()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{poly_roots, Poly};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn wp(tau: Complex64) -> Weierstrass {
        Weierstrass::new(
            &Lattice::from_tau(tau).unwrap(),
            60,
            &ToleranceCtx::default(),
        )
        .unwrap()
    }

    #[test]
    fn even_and_periodic() {
        let w = wp(c(0.3, 1.1));
        let z = c(0.21, 0.37);
        let a = w.eval(z).unwrap();
        let b = w.eval(-z).unwrap();
        assert!((a.p - b.p).norm() < 1e-10 * a.p.norm());
        assert!((a.dp + b.dp).norm() < 1e-10 * a.dp.norm());
        let s = w.eval(z + 1.0).unwrap();
        assert!((a.p - s.p).norm() < 1e-10 * a.p.norm());
        let s = w.eval(z + c(0.3, 1.1)).unwrap();
        assert!((a.p - s.p).norm() < 1e-10 * a.p.norm());
    }

    #[test]
    fn differential_equation_square_lattice() {
        let w = wp(c(0.0, 1.0));
        for (s, t) in [(0.2, 0.3), (0.7, 0.15), (0.45, 0.8), (0.33, 0.61)] {
            let z = w.lattice().point(s, t);
            let r = w.ode_residual(z).unwrap();
            assert!(r.norm() < 1e-8, "residual {r} at {z}");
        }
    }

    #[test]
    fn pole_detected() {
        let w = wp(c(0.0, 1.0));
        assert!(matches!(w.eval(c(2.0, 1.0)), Err(Error::PoleAt(_))));
    }

    #[test]
    fn half_periods_are_cubic_roots() {
        for tau in [c(0.0, 1.0), c(0.3, 1.1), c(-0.4, 0.8)] {
            let w = wp(tau);
            let e = w.half_period_values().unwrap();
            let sum = e[0] + e[1] + e[2];
            assert!(sum.norm() < 1e-9);
            let cubic = Poly::new(vec![-w.g3(), -w.g2(), c(0.0, 0.0), c(4.0, 0.0)]);
            let roots = poly_roots(&cubic).unwrap();
            for ei in e {
                let d = roots
                    .iter()
                    .map(|r| (r - ei).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(d < 1e-8, "{ei} not a root");
            }
        }
    }

    #[test]
    fn square_lattice_half_periods() {
        let e = wp(c(0.0, 1.0)).half_period_values().unwrap();
        assert!(e[2].norm() < 1e-9);
        assert!((e[0] + e[1]).norm() < 1e-9);
    }
}
