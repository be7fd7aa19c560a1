use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of PSL(2,Z), stored as the representative of `{M, -M}` with
/// `γ > 0`, or `γ = 0` and `α > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CongruenceElement {
    alpha: i64,
    beta: i64,
    gamma: i64,
    delta: i64,
}

impl CongruenceElement {
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self> {
        let det = alpha as i128 * delta as i128 - beta as i128 * gamma as i128;
        if det != 1 {
            return Err(Error::InvalidInput(format!(
                "matrix ({alpha},{beta};{gamma},{delta}) has determinant {det}, expected 1"
            )));
        }
        Ok(Self::canonical(alpha, beta, gamma, delta))
    }

    fn canonical(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        if gamma < 0 || (gamma == 0 && alpha < 0) {
            Self {
                alpha: -alpha,
                beta: -beta,
                gamma: -gamma,
                delta: -delta,
            }
        } else {
            Self {
                alpha,
                beta,
                gamma,
                delta,
            }
        }
    }

    pub fn identity() -> Self {
        Self::canonical(1, 0, 0, 1)
    }

    /// `S = (0, -1; 1, 0)`.
    pub fn s() -> Self {
        Self::canonical(0, -1, 1, 0)
    }

    /// `T = (1, 1; 0, 1)`.
    pub fn t() -> Self {
        Self::canonical(1, 1, 0, 1)
    }

    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.alpha, self.beta, self.gamma, self.delta)
    }

    /// The other sign representative, `-M`.
    pub fn negated_entries(&self) -> (i64, i64, i64, i64) {
        (-self.alpha, -self.beta, -self.gamma, -self.delta)
    }

    pub fn inverse(&self) -> Self {
        Self::canonical(self.delta, -self.beta, -self.gamma, self.alpha)
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inverse() } else { *self };
        (0..e.unsigned_abs()).fold(Self::identity(), |acc, _| acc * base)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `(ατ + β)/(γτ + δ)`.
    pub fn act(&self, tau: Complex64) -> Complex64 {
        let (a, b, c, d) = (
            self.alpha as f64,
            self.beta as f64,
            self.gamma as f64,
            self.delta as f64,
        );
        (a * tau + b) / (c * tau + d)
    }

    /// Automorphy factor `γτ + δ`.
    pub fn cocycle(&self, tau: Complex64) -> Complex64 {
        self.gamma as f64 * tau + self.delta as f64
    }
}

impl Mul for CongruenceElement {
    type Output = CongruenceElement;
    fn mul(self, o: CongruenceElement) -> CongruenceElement {
        Self::canonical(
            self.alpha * o.alpha + self.beta * o.gamma,
            self.alpha * o.beta + self.beta * o.delta,
            self.gamma * o.alpha + self.delta * o.gamma,
            self.gamma * o.beta + self.delta * o.delta,
        )
    }
}

impl fmt::Display for CongruenceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{};{},{})",
            self.alpha, self.beta, self.gamma, self.delta
        )
    }
}
