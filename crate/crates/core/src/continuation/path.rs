use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{fmt_c, Error, Result};

/// A polygonal path through its vertices. A single vertex is the constant path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct PathPoly {
    vertices: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for PathPoly {
    type Error = Error;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        PathPoly::new(v)
    }
}

impl From<PathPoly> for Vec<Complex64> {
    fn from(p: PathPoly) -> Self {
        p.vertices
    }
}

impl PathPoly {
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("path needs at least one vertex".into()));
        }
        if let Some(z) = vertices
            .iter()
            .find(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidInput(format!(
                "path vertex {} is not finite",
                fmt_c(*z)
            )));
        }
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!(
                "repeated consecutive vertex {}",
                fmt_c(w[0])
            )));
        }
        Ok(Self { vertices })
    }

    /// Vertices `center + r·e^{i(θ₀ ± 2πk/n)}` for `k = 0..=n`, ending where
    /// they start after one full turn.
    pub fn circle(
        center: Complex64,
        radius: f64,
        start_angle: f64,
        n: usize,
        ccw: bool,
    ) -> Result<Self> {
        if !(radius > 0.0) || n < 3 {
            return Err(Error::InvalidInput(
                "circle needs positive radius and n ≥ 3".into(),
            ));
        }
        let sign = if ccw { 1.0 } else { -1.0 };
        let mut v: Vec<Complex64> = (0..n)
            .map(|k| {
                center
                    + Complex64::from_polar(
                        radius,
                        start_angle + sign * 2.0 * PI * k as f64 / n as f64,
                    )
            })
            .collect();
        v.push(v[0]);
        Self::new(v)
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn start(&self) -> Complex64 {
        self.vertices[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.vertices.last().expect("nonempty")
    }

    pub fn is_closed(&self, eps: f64) -> bool {
        (self.start() - self.end()).norm() <= eps
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self { vertices: v }
    }

    /// `self` followed by `other`, which must start where `self` ends.
    pub fn then(&self, other: &PathPoly) -> Result<Self> {
        if (self.end() - other.start()).norm() > 1e-12 * (1.0 + self.end().norm()) {
            return Err(Error::InvalidInput("paths do not join".into()));
        }
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[1..]);
        Self::new(v)
    }

    /// Every segment split at its midpoint.
    pub fn refined(&self) -> Self {
        let mut v = vec![self.vertices[0]];
        for w in self.vertices.windows(2) {
            v.push((w[0] + w[1]) / 2.0);
            v.push(w[1]);
        }
        Self { vertices: v }
    }

    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    /// Distance from `p` to the polyline.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        if self.vertices.len() == 1 {
            return (p - self.vertices[0]).norm();
        }
        self.vertices
            .windows(2)
            .map(|w| super::germ::path_distance(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest vertex-to-polyline distance, taken both ways.
    pub fn closeness(&self, other: &PathPoly) -> f64 {
        let a = self
            .vertices
            .iter()
            .map(|&p| other.distance_to(p))
            .fold(0.0, f64::max);
        let b = other
            .vertices
            .iter()
            .map(|&p| self.distance_to(p))
            .fold(0.0, f64::max);
        a.max(b)
    }
}

/// Straight segment from `a` to `b`, bent around the small disks
/// `|z − cᵢ| < ρᵢ` it would cross. Each disk stays on the side of the
/// segment it started on; a center on the segment is passed on the left.
pub(crate) fn detoured_segment(
    a: Complex64,
    b: Complex64,
    disks: &[(Complex64, f64)],
) -> Vec<Complex64> {
    let len = (b - a).norm();
    let u = (b - a) / len;
    let mut hits: Vec<(f64, f64, Complex64, f64, f64)> = Vec::new();
    for &(c, rho) in disks {
        let w = (c - a) * u.conj();
        let (t, d) = (w.re, w.im);
        if d.abs() < rho {
            let half = (rho * rho - d * d).sqrt();
            if t - half > 0.0 && t + half < len {
                hits.push((t - half, t + half, c, rho, d));
            }
        }
    }
    hits.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out = vec![a];
    for (t_in, t_out, c, rho, d) in hits {
        let p_in = a + u * t_in;
        let p_out = a + u * t_out;
        let (phi_in, phi_out) = ((p_in - c).arg(), (p_out - c).arg());
        // pass on the left (clockwise about c) unless c lies strictly to the left
        let sweep = if d <= 0.0 {
            -(phi_in - phi_out).rem_euclid(2.0 * PI)
        } else {
            (phi_out - phi_in).rem_euclid(2.0 * PI)
        };
        let m = ((sweep.abs() / (2.0 * PI) * 64.0).ceil() as usize).max(8);
        out.push(p_in);
        for k in 1..m {
            out.push(c + Complex64::from_polar(rho, phi_in + sweep * k as f64 / m as f64));
        }
        out.push(p_out);
    }
    out.push(b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rules() {
        assert!(PathPoly::new(vec![]).is_err());
        let z = Complex64::new(1.0, 0.0);
        assert!(PathPoly::new(vec![z, z]).is_err());
        assert!(PathPoly::new(vec![z]).is_ok());
        let c = PathPoly::circle(Complex64::new(0.0, 0.0), 2.0, 0.0, 16, true).unwrap();
        assert!(c.is_closed(1e-12));
        assert!((c.length() - 4.0 * PI).abs() < 0.2);
        assert_eq!(c.refined().vertices().len(), 33);
    }

    #[test]
    fn serde_as_vertex_list() {
        let p: PathPoly = serde_json::from_str("[[1,0],[0,1],[-1,0]]").unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert!(serde_json::from_str::<PathPoly>("[[1,0],[1,0]]").is_err());
    }
}
