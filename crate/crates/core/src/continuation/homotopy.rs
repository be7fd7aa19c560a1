use rayon::prelude::*;
use serde::Serialize;

use super::germ::{continue_along, germ_distance, Germ};
use super::path::PathPoly;
use crate::error::{Error, Result};
use crate::foundations::ToleranceCtx;

/// A discretized homotopy: paths with common endpoints, each uniformly close
/// to the next.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Homotopy {
    paths: Vec<PathPoly>,
}

impl Homotopy {
    pub fn new(paths: Vec<PathPoly>, closeness_bound: f64) -> Result<Self> {
        let Some(first) = paths.first() else {
            return Err(Error::InvalidInput(
                "homotopy needs at least one path".into(),
            ));
        };
        let (s, e) = (first.start(), first.end());
        let eps = 1e-12 * (1.0 + s.norm().max(e.norm()));
        for (i, p) in paths.iter().enumerate() {
            if (p.start() - s).norm() > eps || (p.end() - e).norm() > eps {
                return Err(Error::InvalidInput(format!(
                    "path {i} does not share the endpoints"
                )));
            }
        }
        for (i, w) in paths.windows(2).enumerate() {
            let d = w[0].closeness(&w[1]);
            if d > closeness_bound {
                return Err(Error::InvalidInput(format!(
                    "paths {i} and {} are {d:e} apart, above the bound {closeness_bound:e}",
                    i + 1
                )));
            }
        }
        Ok(Self { paths })
    }

    /// Straight-line interpolation `(1−t)γ + tδ` between two paths with the
    /// same vertex count, in `steps` stages.
    pub fn linear(
        gamma: &PathPoly,
        delta: &PathPoly,
        steps: usize,
        closeness_bound: f64,
    ) -> Result<Self> {
        let (a, b) = (gamma.vertices(), delta.vertices());
        if a.len() != b.len() || steps == 0 {
            return Err(Error::InvalidInput(
                "linear homotopy needs equal vertex counts".into(),
            ));
        }
        let paths = (0..=steps)
            .map(|k| {
                let t = k as f64 / steps as f64;
                PathPoly::new(
                    a.iter()
                        .zip(b)
                        .map(|(&x, &y)| x * (1.0 - t) + y * t)
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(paths, closeness_bound)
    }

    pub fn paths(&self) -> &[PathPoly] {
        &self.paths
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonodromyTheoremReport {
    /// Distance between end germs of consecutive paths.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub pass: bool,
    pub end_values: Vec<num_complex::Complex64>,
}

/// Continues `g` along every path of `h` and compares consecutive end germs.
pub fn check_monodromy_theorem(
    g: &Germ,
    h: &Homotopy,
    step_ctl: f64,
    tol: &ToleranceCtx,
) -> Result<MonodromyTheoremReport> {
    let ends: Vec<Germ> = h
        .paths
        .par_iter()
        .map(|p| continue_along(g, p, step_ctl, tol))
        .collect::<Result<Vec<_>>>()?;
    let deviations: Vec<f64> = ends
        .windows(2)
        .map(|w| germ_distance(&w[0], &w[1]))
        .collect();
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    let scale = ends.iter().map(|e| e.value().norm()).fold(0.0, f64::max);
    Ok(MonodromyTheoremReport {
        pass: max_deviation <= 100.0 * tol.bound(scale),
        max_deviation,
        deviations,
        end_values: ends.iter().map(Germ::value).collect(),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;

    use super::*;
    use crate::continuation::germ::{germ_builtin, BuiltinKind};

    fn arc(end: Complex64, bulge: f64, n: usize) -> PathPoly {
        let a = Complex64::new(1.0, 0.0);
        PathPoly::new(
            (0..=n)
                .map(|k| {
                    let t = k as f64 / n as f64;
                    a * (1.0 - t) + end * t + Complex64::new(0.0, bulge * (PI * t).sin())
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn sqrt_upper_arcs_agree() {
        let g = germ_builtin(BuiltinKind::Sqrt, Complex64::new(1.0, 0.0), 24).unwrap();
        let end = Complex64::new(-1.0, 0.5);
        let paths: Vec<_> = [0.3, 0.6, 0.9, 1.2, 1.5]
            .iter()
            .map(|&b| arc(end, b, 40))
            .collect();
        let h = Homotopy::new(paths, 0.5).unwrap();
        let r = check_monodromy_theorem(&g, &h, 0.5, &ToleranceCtx::default()).unwrap();
        assert!(r.pass && r.max_deviation < 1e-8, "{}", r.max_deviation);
        assert!((r.end_values[0] - end.sqrt()).norm() < 1e-12);
    }

    #[test]
    fn constant_germ_has_zero_deviation() {
        let g =
            Germ::from_series(Complex64::new(1.0, 0.0), vec![Complex64::new(3.0, 1.0)]).unwrap();
        let end = Complex64::new(-1.0, 0.5);
        let h = Homotopy::new(vec![arc(end, 0.2, 10), arc(end, -0.2, 10)], 1.0).unwrap();
        let r = check_monodromy_theorem(&g, &h, 0.5, &ToleranceCtx::default()).unwrap();
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn log_loops_with_same_winding() {
        let g = germ_builtin(BuiltinKind::Log, Complex64::new(1.0, 0.0), 24).unwrap();
        let c1 = PathPoly::circle(Complex64::new(0.0, 0.0), 1.0, 0.0, 64, true).unwrap();
        let c2 = PathPoly::new(
            c1.vertices()
                .iter()
                .map(|z| z * (1.0 + 0.3 * (z.im * 2.0).sin().powi(2)))
                .collect(),
        )
        .unwrap();
        let h = Homotopy::linear(&c1, &c2, 4, 0.5).unwrap();
        let r = check_monodromy_theorem(&g, &h, 0.5, &ToleranceCtx::default()).unwrap();
        assert!(r.pass);
        for v in r.end_values {
            assert!((v - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-9);
        }
    }

    #[test]
    fn rejects_far_apart_paths() {
        let end = Complex64::new(-1.0, 0.5);
        assert!(Homotopy::new(vec![arc(end, 0.1, 10), arc(end, 2.0, 10)], 0.5).is_err());
    }
}
