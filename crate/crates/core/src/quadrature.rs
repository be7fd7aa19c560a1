//! Globally adaptive Gauss-Kronrod (G7/K15) quadrature for complex-valued
//! integrands on a real interval.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Result<(Complex64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    let (k, g) = (k * h, g * h);
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::QuadratureFailed(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    Ok((k, (k - g).norm()))
}

/// Integrates `f` over `[a, b]` until the summed error estimate drops below
/// `abs_tol`, bisecting the worst interval at each step.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult> {
    let (v, e) = kronrod(&f, a, b)?;
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total_err: f64 = parts.iter().map(|p| p.3).sum();
        if total_err <= abs_tol {
            break;
        }
        if parts.len() >= max_intervals {
            return Err(Error::QuadratureFailed(format!(
                "error estimate {total_err:e} above {abs_tol:e} after {max_intervals} intervals"
            )));
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::QuadratureFailed("interval underflow".into()));
        }
        let (v1, e1) = kronrod(&f, lo, mid)?;
        let (v2, e2) = kronrod(&f, mid, hi)?;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
    parts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let value = parts.iter().map(|p| p.2).sum();
    let error = parts.iter().map(|p| p.3).sum();
    Ok(QuadResult { value, error })
}
