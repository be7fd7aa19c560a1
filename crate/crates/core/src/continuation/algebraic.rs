use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::path::{detoured_segment, PathPoly};
use crate::error::{fmt_c, Error, Result};
use crate::foundations::{poly_roots, BiPoly, ToleranceCtx};
use crate::perm::{generate_group, is_transitive, product, Perm};

const MAX_DEGREE: usize = 8;
const CIRCLE_SEGMENTS: usize = 64;
const NEWTON_ITERS: usize = 12;
const HALVINGS: usize = 3;

/// `P(z, y) = 0` seen as a `d`-valued function of `z`, with its fiber over a
/// base point.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraicFunction {
    #[serde(skip)]
    pub poly: BiPoly,
    pub degree: usize,
    pub branch_points: Vec<Complex64>,
    pub base_point: Complex64,
    pub fiber: Vec<Complex64>,
}

impl AlgebraicFunction {
    pub fn new(poly: &BiPoly, base: Complex64, tol: &ToleranceCtx) -> Result<Self> {
        let degree = poly
            .degree_y()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::DegenerateInput("polynomial has no y-dependence".into()))?;
        if degree > MAX_DEGREE {
            return Err(Error::InvalidInput(format!(
                "y-degree {degree} exceeds {MAX_DEGREE}"
            )));
        }
        let disc = poly.discriminant_in_y()?;
        if disc.is_zero() {
            return Err(Error::DegenerateInput("P is not squarefree in y".into()));
        }
        let branch_points = match disc.degree() {
            Some(d) if d >= 1 => cluster(poly_roots(&disc)?),
            _ => Vec::new(),
        };
        for &b in &branch_points {
            if (b - base).norm() <= 1e-6 * (1.0 + b.norm()) {
                return Err(Error::InvalidInput(format!(
                    "base point {} is a branch point",
                    fmt_c(base)
                )));
            }
        }
        let fiber = poly_roots(&poly.at_z(base))?;
        if fiber.len() != degree {
            return Err(Error::InvalidInput(
                "leading coefficient vanishes at the base point".into(),
            ));
        }
        let sep = min_separation(&fiber);
        let scale = fiber.iter().map(|y| y.norm()).fold(0.0, f64::max);
        if sep <= tol.bound(scale) {
            return Err(Error::InvalidInput(
                "fiber over the base point has a repeated root".into(),
            ));
        }
        Ok(Self {
            poly: poly.clone(),
            degree,
            branch_points,
            base_point: base,
            fiber,
        })
    }
}

/// Merges roots of the discriminant that belong to one multiple root.
fn cluster(roots: Vec<Complex64>) -> Vec<Complex64> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for r in roots {
        match groups
            .iter_mut()
            .find(|g| (g[0] - r).norm() <= 1e-5 * (1.0 + r.norm()))
        {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    groups
        .into_iter()
        .map(|g| g.iter().sum::<Complex64>() / g.len() as f64)
        .collect()
}

fn min_separation(ys: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..ys.len() {
        for j in i + 1..ys.len() {
            m = m.min((ys[i] - ys[j]).norm());
        }
    }
    m
}

#[derive(Debug, Clone, Serialize)]
pub struct MonodromyRep {
    pub base_point: Complex64,
    pub fiber: Vec<Complex64>,
    /// Finite branch points in loop order.
    pub branch_points: Vec<Complex64>,
    /// One permutation per finite branch point, then the loop around ∞.
    pub generators: Vec<Perm>,
    pub image_order: usize,
    pub transitive: bool,
    pub product_is_identity: bool,
}

/// Geometry of the loops: the ray direction left free for the ∞ loop, the
/// loop order, and the circle radii.
struct LoopPlan {
    cut: f64,
    order: Vec<usize>,
    radii: Vec<f64>,
}

fn plan(branch: &[Complex64], base: Complex64) -> LoopPlan {
    let n = branch.len();
    let args: Vec<f64> = branch.iter().map(|b| (b - base).arg()).collect();
    let mut sorted = args.clone();
    sorted.sort_by(f64::total_cmp);
    let mut cut = args.first().map_or(0.0, |a| a + PI);
    let mut best = -1.0;
    for k in 0..sorted.len() {
        let lo = sorted[k];
        let hi = if k + 1 < sorted.len() {
            sorted[k + 1]
        } else {
            sorted[0] + 2.0 * PI
        };
        if hi - lo > best + 1e-12 {
            best = hi - lo;
            cut = lo + (hi - lo) / 2.0;
        }
    }
    let key = |i: usize| (args[i] - cut).rem_euclid(2.0 * PI);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (ki, kj) = (key(i), key(j));
        if (ki - kj).abs() <= 1e-9 {
            (branch[i] - base)
                .norm()
                .total_cmp(&(branch[j] - base).norm())
        } else {
            ki.total_cmp(&kj)
        }
    });
    let radii = (0..n)
        .map(|i| {
            let others = (0..n)
                .filter(|&j| j != i)
                .map(|j| (branch[i] - branch[j]).norm())
                .fold(f64::INFINITY, f64::min);
            0.5 * others.min((branch[i] - base).norm())
        })
        .collect();
    LoopPlan { cut, order, radii }
}

fn build_loop(
    base: Complex64,
    center: Complex64,
    radius: f64,
    start_dir: Complex64,
    ccw: bool,
    segments: usize,
    disks: &[(Complex64, f64)],
) -> Result<PathPoly> {
    let entry = center + start_dir * radius;
    let spoke = PathPoly::new(detoured_segment(base, entry, disks))?;
    let circle = PathPoly::circle(center, radius, start_dir.arg(), segments, ccw)?;
    spoke.then(&circle)?.then(&spoke.reversed())
}

struct Tracker<'a> {
    p: &'a BiPoly,
    py: BiPoly,
    pz: BiPoly,
    branch: &'a [Complex64],
    collision: f64,
}

impl Tracker<'_> {
    fn newton(&self, z: Complex64, mut y: Complex64) -> Option<Complex64> {
        for _ in 0..NEWTON_ITERS {
            let f = self.p.eval(z, y);
            let df = self.py.eval(z, y);
            if df.norm() == 0.0 {
                return None;
            }
            let dy = f / df;
            y -= dy;
            if dy.norm() <= 1e-14 * (1.0 + y.norm()) {
                return Some(y);
            }
        }
        let res = self.p.eval(z, y).norm() / (1.0 + self.py.eval(z, y).norm() * (1.0 + y.norm()));
        (res < 1e-12).then_some(y)
    }

    fn slope(&self, z: Complex64, y: Complex64) -> Complex64 {
        -self.pz.eval(z, y) / self.py.eval(z, y)
    }

    fn try_step(
        &self,
        z0: Complex64,
        ys: &[Complex64],
        z1: Complex64,
        sep: f64,
    ) -> Option<Vec<Complex64>> {
        let h = z1 - z0;
        let mut out = Vec::with_capacity(ys.len());
        for &y in ys {
            let pred = y + h * self.slope(z0, y);
            let y1 = self.newton(z1, pred)?;
            if (y1 - pred).norm() > 0.1 * sep || (y1 - y).norm() > 0.5 * sep {
                return None;
            }
            out.push(y1);
        }
        (min_separation(&out) > self.collision).then_some(out)
    }

    fn track(&self, path: &PathPoly, start: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut ys = start.to_vec();
        for w in path.vertices().windows(2) {
            let (a, b) = (w[0], w[1]);
            let mut z = a;
            while z != b {
                let sep = min_separation(&ys);
                let speed = ys
                    .iter()
                    .map(|&y| self.slope(z, y).norm())
                    .fold(0.0, f64::max);
                let dist_b = self
                    .branch
                    .iter()
                    .map(|c| (c - z).norm())
                    .fold(f64::INFINITY, f64::min);
                let rem = (b - z).norm();
                let mut h = rem.min(0.25 * dist_b);
                if speed > 0.0 {
                    h = h.min(0.25 * sep / speed);
                }
                let mut done = None;
                for _ in 0..=HALVINGS {
                    let z1 = if h >= rem { b } else { z + (b - z) * (h / rem) };
                    if let Some(next) = self.try_step(z, &ys, z1, sep) {
                        done = Some((z1, next));
                        break;
                    }
                    h /= 2.0;
                }
                let Some((z1, next)) = done else {
                    return Err(Error::TrackingCollision(fmt_c(z)));
                };
                z = z1;
                ys = next;
            }
        }
        Ok(ys)
    }
}

fn match_fiber(end: &[Complex64], fiber: &[Complex64], at: Complex64) -> Result<Perm> {
    let sep = min_separation(fiber);
    let images: Vec<usize> = end
        .iter()
        .map(|y| {
            let (k, d) = fiber
                .iter()
                .enumerate()
                .map(|(k, f)| (k, (f - y).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("nonempty fiber");
            if d < 0.25 * sep {
                Ok(k)
            } else {
                Err(Error::TrackingCollision(fmt_c(at)))
            }
        })
        .collect::<Result<_>>()?;
    Perm::from_images(images).ok_or_else(|| Error::TrackingCollision(fmt_c(at)))
}

/// Monodromy of `P(z, y) = 0` from loops around every branch point and ∞.
pub fn algebraic_monodromy(
    p: &BiPoly,
    base: Complex64,
    tol: &ToleranceCtx,
) -> Result<MonodromyRep> {
    let f = AlgebraicFunction::new(p, base, tol)?;
    let d = f.degree;
    let LoopPlan { cut, order, radii } = plan(&f.branch_points, base);
    let disks: Vec<(Complex64, f64)> = f
        .branch_points
        .iter()
        .zip(&radii)
        .map(|(&b, &r)| (b, 0.5 * r))
        .collect();
    let mut loops = Vec::with_capacity(order.len() + 1);
    for &i in &order {
        let b = f.branch_points[i];
        let u = (b - base) / (b - base).norm();
        let others: Vec<_> = disks
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| x)
            .collect();
        loops.push((
            b,
            build_loop(base, b, radii[i], -u, true, CIRCLE_SEGMENTS, &others)?,
        ));
    }
    if !f.branch_points.is_empty() {
        let reach = f
            .branch_points
            .iter()
            .map(|b| (b - base).norm())
            .fold(0.0, f64::max);
        let big = 2.0 * reach + 1.0;
        // circle centered at base, entered from base along the cut direction
        let start = base + Complex64::from_polar(big, cut);
        let spoke = PathPoly::new(detoured_segment(base, start, &disks))?;
        let circle = PathPoly::circle(base, big, cut, 2 * CIRCLE_SEGMENTS, false)?;
        loops.push((
            Complex64::new(f64::INFINITY, 0.0),
            spoke.then(&circle)?.then(&spoke.reversed())?,
        ));
    }
    let scale = f.fiber.iter().map(|y| y.norm()).fold(1.0, f64::max);
    let tracker = Tracker {
        p,
        py: p.derivative_y(),
        pz: p.derivative_z(),
        branch: &f.branch_points,
        collision: tol.bound(scale),
    };
    let generators: Vec<Perm> = loops
        .par_iter()
        .map(|(at, path)| {
            let end = tracker.track(path, &f.fiber)?;
            match_fiber(&end, &f.fiber, *at)
        })
        .collect::<Result<_>>()?;
    let image_order = generate_group(&generators, d, usize::MAX).map_or(0, |g| g.len());
    let transitive = is_transitive(&generators, d);
    let product_is_identity = product(&generators, d).is_identity();
    Ok(MonodromyRep {
        base_point: base,
        fiber: f.fiber,
        branch_points: order.iter().map(|&i| f.branch_points[i]).collect(),
        generators,
        image_order,
        transitive,
        product_is_identity,
    })
}
