use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lambda::{check_a, check_b, check_lambda, j_of_lambda, lambda_from_a};
use crate::elliptic::EisensteinInvariants;
use crate::error::{Error, Result};

/// The four normal forms of a smooth plane cubic.
///
/// - `Weierstrass`: `y² = 4x³ − g₂x − g₃`
/// - `Lambda`: `y² = x(x−1)(x−λ)`
/// - `LegendreAffine`: `y² = (x²−1)(x²−a²)`
/// - `Inoue`: `y² = (ξ²−1)(ξ²−b⁴)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum CurveForm {
    Weierstrass {
        g2: Complex64,
        g3: Complex64,
    },
    Lambda {
        lambda: Complex64,
    },
    #[serde(rename = "legendre_a")]
    LegendreAffine {
        a: Complex64,
    },
    Inoue {
        b: Complex64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormTag {
    Weierstrass,
    Lambda,
    #[serde(rename = "legendre_a")]
    LegendreAffine,
    Inoue,
}

impl FormTag {
    /// Position along `Weierstrass → Lambda → LegendreAffine → Inoue`.
    pub(crate) fn rank(self) -> u8 {
        match self {
            FormTag::Weierstrass => 0,
            FormTag::Lambda => 1,
            FormTag::LegendreAffine => 2,
            FormTag::Inoue => 3,
        }
    }
}

impl std::str::FromStr for FormTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weierstrass" => Ok(FormTag::Weierstrass),
            "lambda" => Ok(FormTag::Lambda),
            "legendre_a" | "legendre" => Ok(FormTag::LegendreAffine),
            "inoue" => Ok(FormTag::Inoue),
            _ => Err(Error::InvalidForm(format!("unknown form '{s}'"))),
        }
    }
}

impl CurveForm {
    pub fn tag(&self) -> FormTag {
        match self {
            CurveForm::Weierstrass { .. } => FormTag::Weierstrass,
            CurveForm::Lambda { .. } => FormTag::Lambda,
            CurveForm::LegendreAffine { .. } => FormTag::LegendreAffine,
            CurveForm::Inoue { .. } => FormTag::Inoue,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CurveForm::Weierstrass { g2, g3 } => EisensteinInvariants::from_g(g2, g3).map(|_| ()),
            CurveForm::Lambda { lambda } => check_lambda(lambda),
            CurveForm::LegendreAffine { a } => check_a(a),
            CurveForm::Inoue { b } => check_b(b),
        }
    }

    /// `j = g₂³/Δ`, equivalently `j(λ)` for the λ attached to the form.
    pub fn j_paper(&self) -> Result<Complex64> {
        self.validate()?;
        match *self {
            CurveForm::Weierstrass { g2, g3 } => Ok(EisensteinInvariants::from_g(g2, g3)?.j_paper),
            CurveForm::Lambda { lambda } => j_of_lambda(lambda),
            CurveForm::LegendreAffine { a } => j_of_lambda(lambda_from_a(a)?),
            CurveForm::Inoue { b } => j_of_lambda(lambda_from_a(b * b)?),
        }
    }

    /// Right-hand side of the defining equation `y² = f(x)`.
    pub fn rhs(&self, x: Complex64) -> Complex64 {
        match *self {
            CurveForm::Weierstrass { g2, g3 } => 4.0 * x * x * x - g2 * x - g3,
            CurveForm::Lambda { lambda } => x * (x - 1.0) * (x - lambda),
            CurveForm::LegendreAffine { a } => (x * x - 1.0) * (x * x - a * a),
            CurveForm::Inoue { b } => {
                let b2 = b * b;
                (x * x - 1.0) * (x * x - b2 * b2)
            }
        }
    }
}

/// A curve as read from JSON, optionally carrying a period ratio `τ` that
/// fixes the labeling of the half periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveInput {
    #[serde(flatten)]
    pub form: CurveForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Complex64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let s = r#"{"form":"weierstrass","g2":[4.0,0.0],"g3":[0.0,0.0]}"#;
        let c: CurveInput = serde_json::from_str(s).unwrap();
        assert_eq!(
            c.form,
            CurveForm::Weierstrass {
                g2: Complex64::new(4.0, 0.0),
                g3: Complex64::new(0.0, 0.0)
            }
        );
        assert_eq!(c.tau, None);
        let s = r#"{"form":"legendre_a","a":[3,0],"tau":[0,1]}"#;
        let c: CurveInput = serde_json::from_str(s).unwrap();
        assert_eq!(c.form.tag(), FormTag::LegendreAffine);
        assert_eq!(c.tau, Some(Complex64::new(0.0, 1.0)));
        let back = serde_json::to_string(&c).unwrap();
        assert!(back.contains("\"form\":\"legendre_a\""));
    }

    #[test]
    fn validation() {
        assert!(CurveForm::Weierstrass {
            g2: 3.0.into(),
            g3: 1.0.into()
        }
        .validate()
        .is_err());
        assert!(CurveForm::Lambda { lambda: 1.0.into() }.validate().is_err());
        assert!(CurveForm::Inoue {
            b: Complex64::new(0.0, -1.0)
        }
        .validate()
        .is_err());
    }

    #[test]
    fn j_values() {
        let j = CurveForm::Weierstrass {
            g2: 4.0.into(),
            g3: 0.0.into(),
        }
        .j_paper()
        .unwrap();
        assert!((j - 1.0).norm() < 1e-14);
        let j = CurveForm::Inoue { b: 3.0.into() }.j_paper().unwrap();
        let j2 = CurveForm::LegendreAffine { a: 9.0.into() }
            .j_paper()
            .unwrap();
        assert!((j - j2).norm() < 1e-12);
    }
}
