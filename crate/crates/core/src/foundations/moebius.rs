use num_complex::Complex64;

use super::ext::ExtComplex;
use super::tolerance::ToleranceCtx;
use crate::error::{Error, Result};

/// `z -> (a z + b) / (c z + d)` acting on the projective line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Self { a, b, c, d };
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if m.det().norm() <= 1e-14 * scale * scale || scale == 0.0 {
            return Err(Error::DegenerateInput(
                "Moebius determinant vanishes".into(),
            ));
        }
        Ok(m.normalized())
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Rescales so that `ad - bc = 1`.
    fn normalized(self) -> Self {
        let s = self.det().sqrt();
        Self {
            a: self.a / s,
            b: self.b / s,
            c: self.c / s,
            d: self.d / s,
        }
    }

    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        match z {
            ExtComplex::Infinity => {
                if self.c == Complex64::new(0.0, 0.0) {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(self.a / self.c)
                }
            }
            ExtComplex::Finite(z) => {
                let den = self.c * z + self.d;
                if den == Complex64::new(0.0, 0.0) {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Finite image, `None` at the pole.
    pub fn apply_finite(&self, z: Complex64) -> Option<Complex64> {
        self.apply(ExtComplex::Finite(z)).as_finite()
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .normalized()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
        .normalized()
    }

    /// Unique map sending `src[i]` to `dst[i]`.
    pub fn from_three_points(
        src: [ExtComplex; 3],
        dst: [ExtComplex; 3],
        tol: &ToleranceCtx,
    ) -> Result<Self> {
        let m_src = to_standard(src, tol)?;
        let m_dst = to_standard(dst, tol)?;
        Ok(m_dst.inverse().compose(&m_src))
    }
}

fn distinct(p: &[ExtComplex], tol: &ToleranceCtx) -> Result<()> {
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i].approx_eq(&p[j], tol) {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    Ok(())
}

/// The map sending `(p1, p2, p3)` to `(∞, 0, 1)`.
fn to_standard(p: [ExtComplex; 3], tol: &ToleranceCtx) -> Result<MoebiusMap> {
    distinct(&p, tol)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (a, b, c, d) = match (p[0], p[1], p[2]) {
        (ExtComplex::Infinity, ExtComplex::Finite(z2), ExtComplex::Finite(z3)) => {
            (one, -z2, zero, z3 - z2)
        }
        (ExtComplex::Finite(z1), ExtComplex::Infinity, ExtComplex::Finite(z3)) => {
            (zero, z3 - z1, one, -z1)
        }
        (ExtComplex::Finite(z1), ExtComplex::Finite(z2), ExtComplex::Infinity) => {
            (one, -z2, one, -z1)
        }
        (ExtComplex::Finite(z1), ExtComplex::Finite(z2), ExtComplex::Finite(z3)) => {
            (z3 - z1, -z2 * (z3 - z1), z3 - z2, -z1 * (z3 - z2))
        }
        _ => return Err(Error::CoincidentPoints),
    };
    MoebiusMap::new(a, b, c, d)
}

/// Image of `p4` under the map sending `(p1, p2, p3)` to `(∞, 0, 1)`,
/// i.e. `(p4 - p2)/(p4 - p1) · (p3 - p1)/(p3 - p2)` with limits at ∞.
pub fn cross_ratio(
    p1: ExtComplex,
    p2: ExtComplex,
    p3: ExtComplex,
    p4: ExtComplex,
    tol: &ToleranceCtx,
) -> Result<ExtComplex> {
    distinct(&[p1, p2, p3, p4], tol)?;
    Ok(to_standard([p1, p2, p3], tol)?.apply(p4))
}
