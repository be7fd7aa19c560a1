use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{fmt_c, Error, Result};

/// Distance from the excluded values below which a parameter is rejected.
pub const DEGENERATE_EPS: f64 = 1e-6;

/// Which of two square-root determinations to take.
///
/// For `a_from_lambda`, `Plus` is the root with `|a| ≥ 1` and `Minus` its
/// reciprocal. For `b = √a`, `Plus` is the principal root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn flip(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(Error::InvalidInput(format!("unknown branch '{s}'"))),
        }
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub fn check_lambda(l: Complex64) -> Result<()> {
    if !finite(l) || l.norm() < DEGENERATE_EPS || (l - 1.0).norm() < DEGENERATE_EPS {
        return Err(Error::InvalidLambda(fmt_c(l)));
    }
    Ok(())
}

pub fn check_a(a: Complex64) -> Result<()> {
    if !finite(a)
        || a.norm() < DEGENERATE_EPS
        || (a - 1.0).norm() < DEGENERATE_EPS
        || (a + 1.0).norm() < DEGENERATE_EPS
    {
        return Err(Error::InvalidA(fmt_c(a)));
    }
    Ok(())
}

pub fn check_b(b: Complex64) -> Result<()> {
    let i = Complex64::new(0.0, 1.0);
    let bad = [Complex64::new(0.0, 0.0), 1.0.into(), (-1.0).into(), i, -i];
    if !finite(b) || bad.iter().any(|p| (b - p).norm() < DEGENERATE_EPS) {
        return Err(Error::InvalidForm(format!(
            "Inoue parameter b = {} is excluded",
            fmt_c(b)
        )));
    }
    Ok(())
}

/// `j(λ) = (4/27) (λ² − λ + 1)³ / (λ² (λ − 1)²)`.
pub fn j_of_lambda(l: Complex64) -> Result<Complex64> {
    check_lambda(l)?;
    let q = l * l - l + 1.0;
    Ok(4.0 / 27.0 * q * q * q / (l * l * (l - 1.0) * (l - 1.0)))
}

/// `λ, 1/λ, 1−λ, 1/(1−λ), 1−1/λ, λ/(λ−1)`.
pub fn lambda_orbit(l: Complex64) -> Result<[Complex64; 6]> {
    check_lambda(l)?;
    let one = Complex64::new(1.0, 0.0);
    Ok([
        l,
        one / l,
        one - l,
        one / (one - l),
        one - one / l,
        l / (l - one),
    ])
}

/// `λ(a) = (a − 1)² / (a + 1)²`.
pub fn lambda_from_a(a: Complex64) -> Result<Complex64> {
    check_a(a)?;
    let r = (a - 1.0) / (a + 1.0);
    Ok(r * r)
}

/// Both roots of `(λ−1)a² + 2(λ+1)a + (λ−1) = 0`, ordered as
/// `[Plus, Minus]`.
pub fn a_roots(l: Complex64) -> Result<[Complex64; 2]> {
    check_lambda(l)?;
    let s = l.sqrt();
    let r1 = (-1.0 - l + 2.0 * s) / (l - 1.0);
    let r2 = (-1.0 - l - 2.0 * s) / (l - 1.0);
    let (n1, n2) = (r1.norm(), r2.norm());
    if (n1 - n2).abs() <= 1e-12 * n1.max(n2) || n1 > n2 {
        Ok([r1, r2])
    } else {
        Ok([r2, r1])
    }
}

pub fn a_from_lambda(l: Complex64, branch: Branch) -> Result<Complex64> {
    let [p, m] = a_roots(l)?;
    Ok(match branch {
        Branch::Plus => p,
        Branch::Minus => m,
    })
}

/// `b` with `b² = a`; `Plus` is the principal root.
pub fn b_from_a(a: Complex64, branch: Branch) -> Result<Complex64> {
    check_a(a)?;
    let s = a.sqrt();
    Ok(match branch {
        Branch::Plus => s,
        Branch::Minus => -s,
    })
}

/// Whether `l2` lies in the anharmonic orbit of `l1`.
pub fn same_orbit(l1: Complex64, l2: Complex64, tol: f64) -> Result<bool> {
    check_lambda(l2)?;
    Ok(lambda_orbit(l1)?
        .iter()
        .any(|o| (o - l2).norm() <= tol * (1.0 + o.norm())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn j_special_values() {
        assert!((j_of_lambda(c(-1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        let rho = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        assert!(j_of_lambda(rho).unwrap().norm() < 1e-14);
        assert!((j_of_lambda(c(0.25, 0.0)).unwrap() - 2197.0 / 972.0).norm() < 1e-12);
        assert!(matches!(
            j_of_lambda(c(1.0, 0.0)),
            Err(Error::InvalidLambda(_))
        ));
    }

    #[test]
    fn orbit_values() {
        let o = lambda_orbit(c(2.0, 0.0)).unwrap();
        let want = [2.0, 0.5, -1.0, -1.0, 0.5, 2.0];
        for (a, b) in o.iter().zip(want) {
            assert!((a - b).norm() < 1e-14);
        }
        let o = lambda_orbit(c(0.25, 0.0)).unwrap();
        let want = [0.25, 4.0, 0.75, 4.0 / 3.0, -3.0, -1.0 / 3.0];
        for (a, b) in o.iter().zip(want) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn a_and_lambda() {
        assert!((lambda_from_a(c(3.0, 0.0)).unwrap() - 0.25).norm() < 1e-15);
        assert!((lambda_from_a(c(0.0, 1.0)).unwrap() + 1.0).norm() < 1e-15);
        assert!((a_from_lambda(c(0.25, 0.0), Branch::Plus).unwrap() - 3.0).norm() < 1e-14);
        assert!((a_from_lambda(c(0.25, 0.0), Branch::Minus).unwrap() - 1.0 / 3.0).norm() < 1e-14);
        assert!(matches!(
            lambda_from_a(c(-1.0, 0.0)),
            Err(Error::InvalidA(_))
        ));
    }

    #[test]
    fn near_degenerate_rejected() {
        assert!(check_lambda(c(1e-7, 0.0)).is_err());
        assert!(check_lambda(c(1.0 + 5e-7, 0.0)).is_err());
        assert!(check_lambda(c(1e-5, 0.0)).is_ok());
        assert!(check_b(c(0.0, 1.0)).is_err());
    }
}
