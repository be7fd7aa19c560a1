use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::CongruenceElement;

/// The period lattice `Z ω₁ + Z ω₂`, oriented so that `Im(ω₂/ω₁) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    omega1: Complex64,
    omega2: Complex64,
}

impl Lattice {
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        for w in [omega1, omega2] {
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(Error::InvalidInput(
                    "lattice generator is not finite".into(),
                ));
            }
        }
        if omega1.norm() == 0.0 || omega2.norm() == 0.0 {
            return Err(Error::InvalidInput("lattice generator is zero".into()));
        }
        let ratio = omega2 / omega1;
        if ratio.im.abs() <= 1e-12 * ratio.norm() {
            return Err(Error::InvalidInput(
                "lattice generators are linearly dependent over R".into(),
            ));
        }
        if ratio.im > 0.0 {
            Ok(Self { omega1, omega2 })
        } else {
            Ok(Self {
                omega1: omega2,
                omega2: omega1,
            })
        }
    }

    /// `Z + Z τ`.
    pub fn from_tau(tau: Complex64) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), tau)
    }

    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    pub fn tau(&self) -> Complex64 {
        self.omega2 / self.omega1
    }

    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Self::new(c * self.omega1, c * self.omega2)
    }

    /// Real coordinates `(s, t)` with `z = s ω₁ + t ω₂`.
    pub fn coords(&self, z: Complex64) -> (f64, f64) {
        let (a, b) = (self.omega1, self.omega2);
        let det = a.re * b.im - a.im * b.re;
        let s = (z.re * b.im - z.im * b.re) / det;
        let t = (a.re * z.im - a.im * z.re) / det;
        (s, t)
    }

    pub fn point(&self, s: f64, t: f64) -> Complex64 {
        s * self.omega1 + t * self.omega2
    }

    /// Representative of `z mod Ω` with both lattice coordinates in `[-½, ½]`.
    pub fn reduce_point(&self, z: Complex64) -> Complex64 {
        let (s, t) = self.coords(z);
        self.point(s - s.round(), t - t.round())
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn distance_to_lattice(&self, z: Complex64) -> f64 {
        let base = self.reduce_point(z);
        let mut best = f64::INFINITY;
        for m in -1..=1 {
            for n in -1..=1 {
                let w = self.point(m as f64, n as f64);
                best = best.min((base - w).norm());
            }
        }
        best
    }

    /// Whether `other` spans the same subgroup of C.
    pub fn same_lattice(&self, other: &Lattice, tol: f64) -> bool {
        let near_int = |x: f64| (x - x.round()).abs() <= tol;
        let contains = |l: &Lattice, w: Complex64| {
            let (s, t) = l.coords(w);
            near_int(s) && near_int(t)
        };
        contains(self, other.omega1)
            && contains(self, other.omega2)
            && contains(other, self.omega1)
            && contains(other, self.omega2)
    }

    /// Equivalent basis whose ratio lies in the standard fundamental domain.
    pub fn reduced(&self) -> Lattice {
        let (t, m) = ModulusTau { tau: self.tau() }.reduce();
        let (a, b, c, d) = m.entries();
        let w1 = c as f64 * self.omega2 + d as f64 * self.omega1;
        let w2 = a as f64 * self.omega2 + b as f64 * self.omega1;
        debug_assert!((w2 / w1 - t.tau()).norm() < 1e-9 * t.tau().norm());
        Lattice {
            omega1: w1,
            omega2: w2,
        }
    }
}

/// A point of the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusTau {
    tau: Complex64,
}

impl ModulusTau {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.re.is_finite() && tau.im.is_finite()) || tau.im <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "tau must lie in the upper half plane, got {}",
                crate::error::fmt_c(tau)
            )));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn lattice(&self) -> Lattice {
        Lattice {
            omega1: Complex64::new(1.0, 0.0),
            omega2: self.tau,
        }
    }

    /// T/S descent into `|Re τ| ≤ ½, |τ| ≥ 1`; returns the reduced point and
    /// the element `M` with `M·τ = reduced`.
    pub fn reduce(&self) -> (ModulusTau, CongruenceElement) {
        let mut tau = self.tau;
        let mut m = CongruenceElement::identity();
        for _ in 0..10_000 {
            let k = tau.re.round();
            if k != 0.0 {
                tau -= k;
                m = CongruenceElement::t().pow(-(k as i32)) * m;
            }
            if tau.norm_sqr() < 1.0 - 1e-15 {
                tau = -1.0 / tau;
                m = CongruenceElement::s() * m;
            } else {
                break;
            }
        }
        (ModulusTau { tau }, m)
    }
}

/// `(ατ + β)/(γτ + δ)`.
pub fn modular_action(m: &CongruenceElement, t: ModulusTau) -> ModulusTau {
    let tau = m.act(t.tau);
    ModulusTau {
        tau: Complex64::new(tau.re, tau.im.max(f64::MIN_POSITIVE)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn orientation_swapped() {
        let l = Lattice::new(c(0.0, 1.0), c(1.0, 0.0)).unwrap();
        assert!(l.tau().im > 0.0);
        assert!(Lattice::new(c(1.0, 0.0), c(2.5, 0.0)).is_err());
    }

    #[test]
    fn reduction_lands_in_fundamental_domain() {
        for tau in [c(3.7, 0.05), c(-0.49, 0.2), c(0.3, 1.1), c(10.0, 0.001)] {
            let t = ModulusTau::new(tau).unwrap();
            let (r, m) = t.reduce();
            assert!(r.tau().re.abs() <= 0.5 + 1e-12);
            assert!(r.tau().norm() >= 1.0 - 1e-12);
            assert!((m.act(tau) - r.tau()).norm() < 1e-9);
        }
    }

    #[test]
    fn reduced_basis_spans_same_lattice() {
        let l = Lattice::new(c(1.3, 0.2), c(7.1, 0.4)).unwrap();
        let r = l.reduced();
        assert!(l.same_lattice(&r, 1e-9));
    }

    #[test]
    fn modular_action_examples() {
        let i = ModulusTau::new(c(0.0, 1.0)).unwrap();
        assert_eq!(
            modular_action(&CongruenceElement::identity(), i).tau(),
            c(0.0, 1.0)
        );
        let s = modular_action(&CongruenceElement::s(), i).tau();
        assert!((s - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn point_reduction() {
        let l = Lattice::from_tau(c(0.3, 1.1)).unwrap();
        let z = c(5.2, -3.4);
        let r = l.reduce_point(z);
        let (s, t) = l.coords(z - r);
        assert!((s - s.round()).abs() < 1e-12 && (t - t.round()).abs() < 1e-12);
        assert!(l.distance_to_lattice(l.point(3.0, -2.0)) < 1e-12);
    }
}
