use num_complex::Complex64;
use serde::Serialize;

use super::curve::{CurveForm, FormTag};
use super::lambda::{a_from_lambda, b_from_a, check_lambda, lambda_from_a, Branch};
use crate::elliptic::{Lattice, Weierstrass, DEFAULT_TRUNC};
use crate::error::{Error, Result};
use crate::foundations::{cross_ratio, poly_roots, ExtComplex, Poly, ToleranceCtx};

#[derive(Debug, Clone, Copy)]
pub struct ConvertOptions {
    /// Square-root choice for `λ → a` (required) and `a → b` (principal if unset).
    pub branch: Option<Branch>,
    /// Period ratio used to label the cubic's roots by half periods.
    pub tau: Option<Complex64>,
    pub trunc: usize,
    pub tol: ToleranceCtx,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        Self {
            branch: None,
            tau: None,
            trunc: DEFAULT_TRUNC,
            tol: ToleranceCtx::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Conversion {
    pub form: CurveForm,
    pub j_paper: Complex64,
    /// Forms visited, source first.
    pub path: Vec<FormTag>,
}

/// Roots `e₁, e₂, e₃` of `4x³ − g₂x − g₃`: half-period labeled when `tau`
/// is given, otherwise in the lexicographic order of `poly_roots`.
pub fn weierstrass_roots(
    g2: Complex64,
    g3: Complex64,
    tau: Option<Complex64>,
    trunc: usize,
    tol: &ToleranceCtx,
) -> Result<[Complex64; 3]> {
    let cubic = Poly::new(vec![
        -g3,
        -g2,
        Complex64::new(0.0, 0.0),
        Complex64::new(4.0, 0.0),
    ]);
    let roots = poly_roots(&cubic)?;
    let Some(tau) = tau else {
        return Ok([roots[0], roots[1], roots[2]]);
    };
    // The lattice Z + Zτ has the right shape; rescale its half-period values
    // onto the given cubic by matching each to the nearest root.
    let wp = Weierstrass::new(&Lattice::from_tau(tau)?, trunc, tol)?;
    let e = wp.half_period_values()?;
    let lam_tau = (e[2] - e[0]) / (e[1] - e[0]);
    let mut best: Option<([Complex64; 3], f64)> = None;
    for perm in [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ] {
        let r = [roots[perm[0]], roots[perm[1]], roots[perm[2]]];
        let lam = (r[2] - r[0]) / (r[1] - r[0]);
        let d = (lam - lam_tau).norm();
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((r, d));
        }
    }
    let (r, d) = best.expect("six candidates");
    if d > 1e-6 * (1.0 + lam_tau.norm()) {
        return Err(Error::InvalidForm(format!(
            "tau is inconsistent with g2, g3 (cross-ratio mismatch {d:e})"
        )));
    }
    Ok(r)
}

fn weierstrass_to_lambda(g2: Complex64, g3: Complex64, opts: &ConvertOptions) -> Result<Complex64> {
    let e = weierstrass_roots(g2, g3, opts.tau, opts.trunc, &opts.tol)?;
    let l = cross_ratio(
        ExtComplex::Infinity,
        e[0].into(),
        e[1].into(),
        e[2].into(),
        &opts.tol,
    )?;
    l.as_finite()
        .ok_or_else(|| Error::InvalidForm("cross-ratio of the roots is infinite".into()))
}

/// `g₂, g₃` of the Weierstrass model of `y² = x(x−1)(x−λ)`.
pub fn lambda_to_weierstrass(l: Complex64) -> Result<(Complex64, Complex64)> {
    check_lambda(l)?;
    let shift = (1.0 + l) / 3.0;
    let (e1, e2, e3) = (-shift, 1.0 - shift, l - shift);
    let g2 = -4.0 * (e1 * e2 + e2 * e3 + e3 * e1);
    let g3 = 4.0 * e1 * e2 * e3;
    Ok((g2, g3))
}

fn step(c: CurveForm, down: bool, opts: &ConvertOptions) -> Result<CurveForm> {
    Ok(match (c, down) {
        (CurveForm::Weierstrass { g2, g3 }, true) => CurveForm::Lambda {
            lambda: weierstrass_to_lambda(g2, g3, opts)?,
        },
        (CurveForm::Lambda { lambda }, true) => {
            let branch = opts.branch.ok_or(Error::BranchRequired)?;
            CurveForm::LegendreAffine {
                a: a_from_lambda(lambda, branch)?,
            }
        }
        (CurveForm::LegendreAffine { a }, true) => CurveForm::Inoue {
            b: b_from_a(a, opts.branch.unwrap_or_default())?,
        },
        (CurveForm::Inoue { b }, false) => CurveForm::LegendreAffine { a: b * b },
        (CurveForm::LegendreAffine { a }, false) => CurveForm::Lambda {
            lambda: lambda_from_a(a)?,
        },
        (CurveForm::Lambda { lambda }, false) => {
            let (g2, g3) = lambda_to_weierstrass(lambda)?;
            CurveForm::Weierstrass { g2, g3 }
        }
        (other, _) => {
            return Err(Error::InvalidForm(format!(
                "no conversion step from {:?}",
                other.tag()
            )));
        }
    })
}

/// Walks the chain `Weierstrass ↔ Lambda ↔ LegendreAffine ↔ Inoue` from
/// the source form to `target`, recording `j` at the end.
pub fn convert(c: &CurveForm, target: FormTag, opts: &ConvertOptions) -> Result<Conversion> {
    c.validate()?;
    let j0 = c.j_paper()?;
    let mut cur = *c;
    let mut path = vec![cur.tag()];
    while cur.tag() != target {
        let down = target.rank() > cur.tag().rank();
        cur = step(cur, down, opts)?;
        cur.validate()?;
        path.push(cur.tag());
    }
    let j = cur.j_paper()?;
    let drift = (j - j0).norm();
    if drift > 1e-6 * (1.0 + j0.norm()) {
        return Err(Error::InvalidForm(format!(
            "conversion changed j by {drift:e}"
        )));
    }
    Ok(Conversion {
        form: cur,
        j_paper: j,
        path,
    })
}
