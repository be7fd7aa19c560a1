use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

const SELF_CELL_SUBDIV: usize = 16;
const MAX_ASPECT: f64 = 16.0;

/// Samples on the polar grid of an annulus `r₀ ≤ |z| ≤ r₁`: cell-centered
/// rings `rᵢ = r₀ + (i+½)Δr` and rays `θₖ = kΔθ`, stored ring by ring.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub r0: f64,
    pub r1: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(
        r0: f64,
        r1: f64,
        n_r: usize,
        n_theta: usize,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if !(r0 > 0.0 && r1 > r0 && r1.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "annulus needs 0 < r0 < r1, got [{r0}, {r1}]"
            )));
        }
        if n_r < 3 || n_theta < 4 {
            return Err(Error::InvalidInput(
                "grid needs n_r ≥ 3 and n_theta ≥ 4".into(),
            ));
        }
        if values.len() != n_r * n_theta {
            return Err(Error::InvalidInput(format!(
                "expected {} grid values, got {}",
                n_r * n_theta,
                values.len()
            )));
        }
        if values
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::InvalidInput("grid values must be finite".into()));
        }
        Ok(Self {
            r0,
            r1,
            n_r,
            n_theta,
            values,
        })
    }

    pub fn from_fn(
        r0: f64,
        r1: f64,
        n_r: usize,
        n_theta: usize,
        f: impl Fn(Complex64) -> Complex64,
    ) -> Result<Self> {
        let dr = (r1 - r0) / n_r as f64;
        let dt = 2.0 * PI / n_theta as f64;
        let values = (0..n_r)
            .flat_map(|i| {
                (0..n_theta)
                    .map(move |k| Complex64::from_polar(r0 + (i as f64 + 0.5) * dr, k as f64 * dt))
            })
            .map(f)
            .collect();
        Self::new(r0, r1, n_r, n_theta, values)
    }

    pub fn dr(&self) -> f64 {
        (self.r1 - self.r0) / self.n_r as f64
    }

    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.n_theta as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r0 + (i as f64 + 0.5) * self.dr()
    }

    pub fn theta(&self, k: usize) -> f64 {
        k as f64 * self.dtheta()
    }

    pub fn node(&self, i: usize, k: usize) -> Complex64 {
        Complex64::from_polar(self.radius(i), self.theta(k))
    }

    pub fn value(&self, i: usize, k: usize) -> Complex64 {
        self.values[i * self.n_theta + k]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `∂̄ = ½e^{iθ}(∂_r + (i/r)∂_θ)` by centered differences; second-order
    /// one-sided differences in `r` on the first and last ring.
    pub fn dbar(&self) -> GridFunction {
        let (dr, dt) = (self.dr(), self.dtheta());
        let nt = self.n_theta;
        let mut out = Vec::with_capacity(self.values.len());
        for i in 0..self.n_r {
            let r = self.radius(i);
            for k in 0..nt {
                let v = |ii: usize| self.value(ii, k);
                let d_r = if i == 0 {
                    (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * dr)
                } else if i + 1 == self.n_r {
                    (3.0 * v(i) - 4.0 * v(i - 1) + v(i - 2)) / (2.0 * dr)
                } else {
                    (v(i + 1) - v(i - 1)) / (2.0 * dr)
                };
                let d_t =
                    (self.value(i, (k + 1) % nt) - self.value(i, (k + nt - 1) % nt)) / (2.0 * dt);
                let e = Complex64::from_polar(0.5, self.theta(k));
                out.push(e * (d_r + Complex64::i() * d_t / r));
            }
        }
        GridFunction {
            values: out,
            ..self.clone()
        }
    }

    /// Rows `r,theta,re,im`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidInput(format!("csv output failed: {e}"));
        wr.write_record(["r", "theta", "re", "im"]).map_err(io)?;
        for i in 0..self.n_r {
            for k in 0..self.n_theta {
                let v = self.value(i, k);
                wr.serialize((self.radius(i), self.theta(k), v.re, v.im))
                    .map_err(io)?;
            }
        }
        wr.flush()
            .map_err(|e| Error::InvalidInput(format!("csv output failed: {e}")))
    }
}

/// `∫ dA / (ζ − rᵢ)` over the cell of ring `i` on the ray `θ = 0`, by a
/// midpoint rule on an even subgrid that never samples the center.
fn self_cell_integral(u: &GridFunction, i: usize) -> Complex64 {
    let (dr, dt) = (u.dr(), u.dtheta());
    let r = u.radius(i);
    let m = SELF_CELL_SUBDIV;
    let (hr, ht) = (dr / m as f64, dt / m as f64);
    let mut s = Complex64::new(0.0, 0.0);
    for a in 0..m {
        let rho = r - dr / 2.0 + (a as f64 + 0.5) * hr;
        for b in 0..m {
            let phi = -dt / 2.0 + (b as f64 + 0.5) * ht;
            s += rho / (Complex64::from_polar(rho, phi) - r);
        }
    }
    s * hr * ht
}

/// `ψ(z) = (1/2πi) ∫ u(ζ)/(ζ − z) dζ∧dζ̄ = −(1/π) ∫ u(ζ)/(ζ − z) dA` at every
/// node, by the midpoint rule with the node's own cell integrated separately.
pub fn cauchy_pompeiu_solve(u: &GridFunction, support_tol: f64) -> Result<GridFunction> {
    let (dr, dt) = (u.dr(), u.dtheta());
    if u.n_r < 4 || u.n_theta < 8 {
        return Err(Error::SingularQuadrature(format!(
            "{} × {} nodes",
            u.n_r, u.n_theta
        )));
    }
    for i in [0, u.n_r - 1] {
        let aspect = dr / (u.radius(i) * dt);
        if !(1.0 / MAX_ASPECT..=MAX_ASPECT).contains(&aspect) {
            return Err(Error::SingularQuadrature(format!(
                "cell aspect ratio {aspect:.2} on ring {i}"
            )));
        }
    }
    let edge = (0..u.n_theta)
        .map(|k| u.value(0, k).norm().max(u.value(u.n_r - 1, k).norm()))
        .fold(0.0, f64::max);
    if edge > support_tol {
        return Err(Error::InvalidInput(format!(
            "u is {edge:.3e} on the boundary rings; support must lie inside the annulus"
        )));
    }
    let self_cells: Vec<Complex64> = (0..u.n_r).map(|i| self_cell_integral(u, i)).collect();
    let nodes: Vec<Complex64> = (0..u.n_r)
        .flat_map(|i| (0..u.n_theta).map(move |k| (i, k)))
        .map(|(i, k)| u.node(i, k))
        .collect();
    let weights: Vec<f64> = (0..u.n_r).map(|i| u.radius(i) * dr * dt).collect();
    let nt = u.n_theta;
    let values: Vec<Complex64> = (0..nodes.len())
        .into_par_iter()
        .map(|t| {
            let z = nodes[t];
            let mut s = Complex64::new(0.0, 0.0);
            for (src, (&zeta, &val)) in nodes.iter().zip(&u.values).enumerate() {
                if src != t && val != Complex64::new(0.0, 0.0) {
                    s += val * weights[src / nt] / (zeta - z);
                }
            }
            let (i, k) = (t / nt, t % nt);
            s += u.values[t] * Complex64::from_polar(1.0, -u.theta(k)) * self_cells[i];
            -s / PI
        })
        .collect();
    Ok(GridFunction {
        values,
        ..u.clone()
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DbarLevel {
    pub n_r: usize,
    pub n_theta: usize,
    pub h: f64,
    /// `max |∂̄ψ − u| / max |u|` over rings at least two cells from the edge.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DbarConvergenceReport {
    pub levels: Vec<DbarLevel>,
    /// Residual ratios between consecutive levels.
    pub ratios: Vec<f64>,
}

fn bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

/// Smooth test function supported in `0.85 < |z| < 1.65`.
pub fn manufactured_psi(z: Complex64) -> Complex64 {
    let (r, t) = z.to_polar();
    let ang = Complex64::new(1.0, 0.0)
        + Complex64::from_polar(0.5, t)
        + Complex64::from_polar(0.25, PI / 2.0 - 2.0 * t);
    bump((r - 1.25) / 0.4) * ang
}

pub const MANUFACTURED_ANNULUS: (f64, f64) = (0.5, 2.0);

pub fn dbar_residual(u: &GridFunction, psi: &GridFunction) -> f64 {
    let d = psi.dbar();
    let scale = u.max_abs().max(f64::MIN_POSITIVE);
    (2..u.n_r.saturating_sub(2))
        .flat_map(|i| (0..u.n_theta).map(move |k| (i, k)))
        .map(|(i, k)| (d.value(i, k) - u.value(i, k)).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Manufactured-solution study: `u := ∂̄ψ₀` on each grid, `ψ := CP(u)`, and
/// the residual of `∂̄ψ = u` per level.
pub fn dbar_convergence_study(grids: &[(usize, usize)]) -> Result<DbarConvergenceReport> {
    let (r0, r1) = MANUFACTURED_ANNULUS;
    let mut levels = Vec::with_capacity(grids.len());
    for &(n_r, n_theta) in grids {
        let psi0 = GridFunction::from_fn(r0, r1, n_r, n_theta, manufactured_psi)?;
        let u = psi0.dbar();
        let psi = cauchy_pompeiu_solve(&u, 1e-12)?;
        levels.push(DbarLevel {
            n_r,
            n_theta,
            h: psi0.dr(),
            residual: dbar_residual(&u, &psi),
        });
    }
    let ratios = levels
        .windows(2)
        .map(|w| w[0].residual / w[1].residual)
        .collect();
    Ok(DbarConvergenceReport { levels, ratios })
}
