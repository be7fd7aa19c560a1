use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly::Poly;
use crate::error::{Error, Result};

/// Polynomial `P(z, y) = sum_k c_k(z) y^k`, stored as coefficient
/// polynomials in `z` indexed by the power of `y`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiPoly {
    ycoeffs: Vec<Poly>,
}

impl BiPoly {
    pub fn new(mut ycoeffs: Vec<Poly>) -> Self {
        while ycoeffs.last().is_some_and(|p| p.is_zero()) {
            ycoeffs.pop();
        }
        Self { ycoeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![Poly::constant(c)])
    }

    pub fn z() -> Self {
        Self::new(vec![Poly::x()])
    }

    pub fn y() -> Self {
        Self::new(vec![Poly::zero(), Poly::constant(Complex64::new(1.0, 0.0))])
    }

    pub fn ycoeffs(&self) -> &[Poly] {
        &self.ycoeffs
    }

    pub fn is_zero(&self) -> bool {
        self.ycoeffs.is_empty()
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.ycoeffs.len().checked_sub(1)
    }

    pub fn degree_z(&self) -> usize {
        self.ycoeffs
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.ycoeffs.len() <= 1
            && self
                .ycoeffs
                .first()
                .is_none_or(|p| p.degree() == Some(0) || p.is_zero())
    }

    /// Leading coefficient in `y`, a polynomial in `z`.
    pub fn leading_y(&self) -> Poly {
        self.ycoeffs.last().cloned().unwrap_or_default()
    }

    /// The univariate polynomial `y -> P(z, y)`.
    pub fn at_z(&self, z: Complex64) -> Poly {
        Poly::new(self.ycoeffs.iter().map(|p| p.eval(z)).collect())
    }

    pub fn eval(&self, z: Complex64, y: Complex64) -> Complex64 {
        self.ycoeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, p| acc * y + p.eval(z))
    }

    pub fn derivative_y(&self) -> BiPoly {
        BiPoly::new(
            self.ycoeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, p)| p.scale(Complex64::new(k as f64, 0.0)))
                .collect(),
        )
    }

    pub fn derivative_z(&self) -> BiPoly {
        BiPoly::new(self.ycoeffs.iter().map(|p| p.derivative()).collect())
    }

    pub fn scale(&self, s: Complex64) -> BiPoly {
        BiPoly::new(self.ycoeffs.iter().map(|p| p.scale(s)).collect())
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut out = BiPoly::constant(Complex64::new(1.0, 0.0));
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `Res_y(P, ∂P/∂y)` as a polynomial in `z`, whose roots contain the
    /// points where two sheets meet. Computed by evaluating the Sylvester
    /// determinant at roots of unity and interpolating with a DFT.
    pub fn discriminant_in_y(&self) -> Result<Poly> {
        let d = match self.degree_y() {
            Some(d) if d >= 1 => d,
            _ => {
                return Err(Error::DegenerateInput(
                    "polynomial has no y-dependence".into(),
                ))
            }
        };
        if d == 1 {
            return Ok(Poly::constant(Complex64::new(1.0, 0.0)));
        }
        let py = self.derivative_y();
        let bound = (2 * d - 1) * self.degree_z();
        let n = bound + 1;
        let values: Vec<Complex64> = (0..n)
            .map(|k| {
                let z =
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
                let f: Vec<Complex64> = self.ycoeffs.iter().map(|p| p.eval(z)).collect();
                let g: Vec<Complex64> = py.ycoeffs.iter().map(|p| p.eval(z)).collect();
                sylvester_det(&f, &g, d, d - 1)
            })
            .collect();
        let coeffs: Vec<Complex64> = (0..n)
            .map(|j| {
                let s: Complex64 = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        v * Complex64::from_polar(
                            1.0,
                            -2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64,
                        )
                    })
                    .sum();
                s / n as f64
            })
            .collect();
        let disc = Poly::new(coeffs).trimmed(1e-11);
        if disc.is_zero() {
            return Err(Error::DegenerateInput(
                "discriminant vanishes identically (P not squarefree in y)".into(),
            ));
        }
        Ok(disc)
    }
}

/// Determinant of the Sylvester matrix of `f` (formal degree `m`) and `g`
/// (formal degree `n`), coefficients lowest first.
fn sylvester_det(f: &[Complex64], g: &[Complex64], m: usize, n: usize) -> Complex64 {
    let size = m + n;
    let coef = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
    let mut s = DMatrix::<Complex64>::zeros(size, size);
    for row in 0..n {
        for k in 0..=m {
            s[(row, row + k)] = coef(f, m - k);
        }
    }
    for row in 0..m {
        for k in 0..=n {
            s[(n + row, row + k)] = coef(g, n - k);
        }
    }
    s.determinant()
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.ycoeffs.len().max(rhs.ycoeffs.len());
        let zero = Poly::zero();
        BiPoly::new(
            (0..n)
                .map(|k| {
                    let a = self.ycoeffs.get(k).unwrap_or(&zero);
                    let b = rhs.ycoeffs.get(k).unwrap_or(&zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.ycoeffs.len() + rhs.ycoeffs.len() - 1];
        for (i, a) in self.ycoeffs.iter().enumerate() {
            for (j, b) in rhs.ycoeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::roots::poly_roots;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn sqrt_discriminant_is_linear() {
        let p = &BiPoly::y().pow(2) - &BiPoly::z();
        let disc = p.discriminant_in_y().unwrap();
        assert_eq!(disc.degree(), Some(1));
        assert!(disc.coeff(0).norm() < 1e-12);
    }

    #[test]
    fn cube_root_discriminant_is_quadratic_monomial() {
        let p = &BiPoly::y().pow(3) - &BiPoly::z();
        let disc = p.discriminant_in_y().unwrap();
        assert_eq!(disc.degree(), Some(2));
        assert!(disc.coeff(0).norm() < 1e-12 && disc.coeff(1).norm() < 1e-12);
    }

    #[test]
    fn elliptic_discriminant_roots() {
        let one = BiPoly::constant(c(1.0));
        let z2 = BiPoly::z().pow(2);
        let r = &(&one - &z2) * &(&one - &z2.scale(c(0.25)));
        let p = &BiPoly::y().pow(2) - &r;
        let disc = p.discriminant_in_y().unwrap();
        let roots = poly_roots(&disc).unwrap();
        assert_eq!(roots.len(), 4);
        for (got, want) in roots.iter().zip([-2.0, -1.0, 1.0, 2.0]) {
            assert!((got - c(want)).norm() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn eval_matches_univariate_slice() {
        let p = &(&BiPoly::y().pow(3) - &(&BiPoly::z() * &BiPoly::y())) + &BiPoly::constant(c(2.0));
        let z = Complex64::new(0.3, 0.7);
        let y = Complex64::new(-1.1, 0.2);
        assert!((p.eval(z, y) - p.at_z(z).eval(y)).norm() < 1e-14);
    }
}
