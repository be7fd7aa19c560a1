use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::foundations::Poly;

/// Polynomial in `z` with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(c: &[i64]) -> Self {
        Self::new(
            c.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }

    /// `p(z + 1)`, expanded by the binomial theorem.
    pub fn shifted_by_one(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![BigRational::zero(); n];
        for (j, a) in self.coeffs.iter().enumerate() {
            let mut binom = BigInt::one();
            for (i, slot) in out.iter_mut().enumerate().take(j + 1) {
                *slot += a * BigRational::from_integer(binom.clone());
                binom = binom * (j - i) / (i + 1);
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn to_complex(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
                .collect(),
        )
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let a = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

struct RationalPair<'a>(&'a BigRational);

impl Serialize for RationalPair<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        for part in [self.0.numer(), self.0.denom()] {
            match part.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&part.to_string())?,
            }
        }
        seq.end()
    }
}

/// Coefficients as `[num, den]` pairs; parts beyond `i64` become decimal strings.
impl Serialize for RationalPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&RationalPair(c))?;
        }
        seq.end()
    }
}

/// Exact value of an integer, `a/b`, or finite decimal literal such as `-0.125`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Some(BigRational::from_integer(n));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.')?;
    if int.is_empty() && frac.is_empty()
        || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()))
    {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let v = BigRational::new(n, d);
    Some(if neg { -v } else { v })
}

/// Exact solution of `g(z+1) − g(z) = f(z)` with `g(0) = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct ExactDiffSolution {
    pub g: RationalPoly,
    /// `g(z+1) − g(z) − f(z)` computed exactly; zero for a correct solve.
    pub residual: RationalPoly,
}

/// Back-substitution in `bᵢ = Σ_{j>i} C(j,i) aⱼ`, upper triangular with
/// diagonal `C(i+1, i) = i + 1`.
fn triangular_solve<T, F>(b: &[T], zero: T, from_int: F) -> Vec<T>
where
    T: Clone + std::ops::Sub<Output = T> + std::ops::Mul<Output = T> + std::ops::Div<Output = T>,
    F: Fn(&BigInt) -> T,
{
    let r = b.len();
    if r == 0 {
        return Vec::new();
    }
    // binomials C(j, i) for j ≤ r
    let mut binom = vec![vec![BigInt::zero(); r + 1]; r + 1];
    for j in 0..=r {
        binom[j][0] = BigInt::one();
        for i in 1..=j {
            binom[j][i] = if i == j {
                BigInt::one()
            } else {
                &binom[j - 1][i - 1] + &binom[j - 1][i]
            };
        }
    }
    let mut a = vec![zero; r + 2];
    for i in (0..r).rev() {
        let mut rhs = b[i].clone();
        for j in i + 2..=r {
            rhs = rhs - from_int(&binom[j][i]) * a[j].clone();
        }
        a[i + 1] = rhs / from_int(&binom[i + 1][i]);
    }
    a.truncate(r + 1);
    a
}

pub fn solve_polynomial_difference_exact(f: &RationalPoly) -> ExactDiffSolution {
    let a = triangular_solve(f.coeffs(), BigRational::zero(), |n| {
        BigRational::from_integer(n.clone())
    });
    let g = RationalPoly::new(a);
    let residual = g.shifted_by_one().sub(&g).sub(f);
    ExactDiffSolution { g, residual }
}

/// Floating-point solution; `residual` is the largest `|g(z+1) − g(z) − f(z)|`
/// over fixed sample points, relative to `1 + |f(z)|`.
#[derive(Debug, Clone, Serialize)]
pub struct DiffSolution {
    pub g: Poly,
    pub residual: f64,
}

pub fn difference_sample_points() -> Vec<Complex64> {
    (0..20)
        .map(|k| {
            Complex64::from_polar(
                0.5 + 0.05 * k as f64,
                2.0 * PI * (k as f64 * 0.618_033_988_749_895),
            )
        })
        .collect()
}

pub fn difference_residual(g: &Poly, f: &Poly, zs: &[Complex64]) -> f64 {
    zs.iter()
        .map(|&z| {
            let fz = f.eval(z);
            (g.eval(z + 1.0) - g.eval(z) - fz).norm() / (1.0 + fz.norm())
        })
        .fold(0.0, f64::max)
}

pub fn solve_polynomial_difference(f: &Poly) -> DiffSolution {
    let zero = Complex64::new(0.0, 0.0);
    let a = triangular_solve(f.coeffs(), zero, |n| {
        Complex64::new(n.to_f64().unwrap_or(f64::INFINITY), 0.0)
    });
    let g = Poly::new(a);
    let residual = difference_residual(&g, f, &difference_sample_points());
    DiffSolution { g, residual }
}

/// `|g(z+m) − g(z) − (f(z) + … + f(z+m−1))|`.
pub fn telescoping_residual(g: &Poly, f: &Poly, z: Complex64, m: usize) -> f64 {
    let sum: Complex64 = (0..m).map(|k| f.eval(z + k as f64)).sum();
    (g.eval(z + m as f64) - g.eval(z) - sum).norm()
}

/// Finite Fourier series `Σ c_h e^{2πihz}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierSeries {
    pub terms: Vec<(i64, Complex64)>,
}

impl FourierSeries {
    pub fn new(terms: Vec<(i64, Complex64)>) -> Result<Self> {
        if terms
            .iter()
            .any(|(_, c)| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::InvalidInput(
                "Fourier coefficients must be finite".into(),
            ));
        }
        Ok(Self { terms })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = Complex64::new(0.0, 2.0 * PI) * z;
        self.terms
            .iter()
            .map(|&(h, c)| c * (w * h as f64).exp())
            .sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierReport {
    /// Largest `|p(z+1) − p(z)|` relative to `1 + |p(z)|`.
    pub periodicity_residual: f64,
    pub base_residual: f64,
    /// Residual of `g + p`, relative to `1 + |f(z)| + |p(z)|`.
    pub perturbed_residual: f64,
    /// `|perturbed − base|`; adding a period-1 function must not move it.
    pub residual_change: f64,
}

/// Checks that `p` is 1-periodic at `zs` and that `g + p` still solves the
/// difference equation for `f`.
pub fn homogeneous_fourier_check(p: &FourierSeries, f: &Poly, zs: &[Complex64]) -> FourierReport {
    let periodicity_residual = zs
        .iter()
        .map(|&z| {
            let pz = p.eval(z);
            (p.eval(z + 1.0) - pz).norm() / (1.0 + pz.norm())
        })
        .fold(0.0, f64::max);
    let sol = solve_polynomial_difference(f);
    let base_residual = difference_residual(&sol.g, f, zs);
    let perturbed_residual = zs
        .iter()
        .map(|&z| {
            let (fz, pz) = (f.eval(z), p.eval(z));
            let lhs = sol.g.eval(z + 1.0) + p.eval(z + 1.0) - sol.g.eval(z) - pz;
            (lhs - fz).norm() / (1.0 + fz.norm() + pz.norm())
        })
        .fold(0.0, f64::max);
    FourierReport {
        periodicity_residual,
        base_residual,
        perturbed_residual,
        residual_change: (perturbed_residual - base_residual).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn low_degree_solutions() {
        let s = solve_polynomial_difference_exact(&RationalPoly::from_integers(&[1]));
        assert_eq!(s.g, RationalPoly::from_integers(&[0, 1]));
        assert_eq!(s.g.to_string(), "z");
        let s = solve_polynomial_difference_exact(&RationalPoly::from_integers(&[0, 1]));
        assert_eq!(s.g, RationalPoly::new(vec![q(0, 1), q(-1, 2), q(1, 2)]));
        let s = solve_polynomial_difference_exact(&RationalPoly::from_integers(&[0, 0, 1]));
        assert_eq!(
            s.g,
            RationalPoly::new(vec![q(0, 1), q(1, 6), q(-1, 2), q(1, 3)])
        );
        assert!(s.residual.is_zero());
    }

    #[test]
    fn fifth_power_matches_faulhaber() {
        // Σ_{k<n} k⁵ = n⁶/6 − n⁵/2 + 5n⁴/12 − n²/12
        let s =
            solve_polynomial_difference_exact(&RationalPoly::from_integers(&[0, 0, 0, 0, 0, 1]));
        let want = RationalPoly::new(vec![
            q(0, 1),
            q(0, 1),
            q(-1, 12),
            q(0, 1),
            q(5, 12),
            q(-1, 2),
            q(1, 6),
        ]);
        assert_eq!(s.g, want);
        for n in 0..8i64 {
            let direct: i64 = (0..n).map(|k| k.pow(5)).sum();
            assert_eq!(s.g.eval(&q(n, 1)), q(direct, 1));
        }
    }

    #[test]
    fn zero_gives_zero() {
        let s = solve_polynomial_difference_exact(&RationalPoly::new(vec![]));
        assert!(s.g.is_zero());
        assert!(solve_polynomial_difference(&Poly::zero()).g.is_zero());
    }

    #[test]
    fn float_solver_agrees() {
        let f = Poly::new(vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.5, 0.0),
        ]);
        let s = solve_polynomial_difference(&f);
        assert_eq!(s.g.degree(), Some(3));
        assert_eq!(s.g.coeff(0), Complex64::new(0.0, 0.0));
        assert!(s.residual < 1e-12);
        for m in 1..=5 {
            assert!(telescoping_residual(&s.g, &f, Complex64::new(0.3, -0.7), m) < 1e-11);
        }
    }

    #[test]
    fn rational_parsing_and_serde() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational("0.125"), Some(q(1, 8)));
        assert_eq!(parse_rational("-.5"), Some(q(-1, 2)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("1e-3"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("."), None);
        let g = RationalPoly::new(vec![q(0, 1), q(-1, 2), q(1, 2)]);
        assert_eq!(serde_json::to_string(&g).unwrap(), "[[0,1],[-1,2],[1,2]]");
        assert_eq!(g.to_string(), "1/2*z^2 - 1/2*z");
    }

    #[test]
    fn fourier_addition() {
        let zs = difference_sample_points();
        let p = FourierSeries::new(vec![(1, Complex64::new(1.0, 0.0))]).unwrap();
        let rep = homogeneous_fourier_check(&p, &Poly::x(), &zs);
        assert!(rep.periodicity_residual < 1e-12);
        assert!(rep.perturbed_residual < 1e-12);
        let constant = FourierSeries::new(vec![(0, Complex64::new(1.0, 0.0))]).unwrap();
        assert_eq!(
            homogeneous_fourier_check(&constant, &Poly::x(), &zs).periodicity_residual,
            0.0
        );
    }
}
