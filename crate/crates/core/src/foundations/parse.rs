//! Small recursive-descent parser for polynomial expressions in `z` and `y`
//! with complex constants, e.g. `y^2 - (1-z^2)(1-z^2/4)` or `0.3+1.1i`.

use num_complex::Complex64;

use super::bipoly::BiPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Z,
    Y,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            ' ' | '\t' | '\n' => {}
            '+' => out.push(Tok::Plus),
            '-' | '\u{2212}' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            'z' | 'x' => out.push(Tok::Z),
            'y' | 'w' => out.push(Tok::Y),
            'i' | 'j' => out.push(Tok::I),
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut k = i + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        i = k;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 = text
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad number '{text}'")))?;
                out.push(Tok::Num(v));
                continue;
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "unexpected character '{other}'"
                )));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let den = self.unary()?;
                    if !den.is_constant() || den.is_zero() {
                        return Err(Error::InvalidInput(
                            "division is only allowed by nonzero constants".into(),
                        ));
                    }
                    let c = den.ycoeffs()[0].coeff(0);
                    acc = acc.scale(1.0 / c);
                }
                Some(Tok::Num(_)) | Some(Tok::Z) | Some(Tok::Y) | Some(Tok::I)
                | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BiPoly> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(e)) if e >= 0.0 && e.fract() == 0.0 && e <= 64.0 => {
                    Ok(base.pow(e as u32))
                }
                _ => Err(Error::InvalidInput(
                    "exponent must be a small non-negative integer".into(),
                )),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<BiPoly> {
        match self.next() {
            Some(Tok::Num(v)) => {
                // `2i` reads as an imaginary literal
                if self.peek() == Some(&Tok::I) {
                    self.pos += 1;
                    Ok(BiPoly::constant(Complex64::new(0.0, v)))
                } else {
                    Ok(BiPoly::constant(Complex64::new(v, 0.0)))
                }
            }
            Some(Tok::Z) => Ok(BiPoly::z()),
            Some(Tok::Y) => Ok(BiPoly::y()),
            Some(Tok::I) => Ok(BiPoly::constant(Complex64::new(0.0, 1.0))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::InvalidInput("missing ')'".into())),
                }
            }
            other => Err(Error::InvalidInput(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a polynomial in `z` and `y` (`x` and `w` are accepted as aliases).
pub fn parse_bipoly(s: &str) -> Result<BiPoly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::InvalidInput("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::InvalidInput(format!("trailing input in '{s}'")));
    }
    Ok(e)
}

/// Parses a complex constant such as `-0.5+1.2i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let p = parse_bipoly(s)?;
    if !p.is_constant() {
        return Err(Error::InvalidInput(format!("'{s}' is not a constant")));
    }
    let v = p.ycoeffs().first().map(|q| q.coeff(0)).unwrap_or_default();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::InvalidInput(format!("'{s}' is not finite")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_elliptic_curve() {
        let p = parse_bipoly("y^2 - (1-z^2)(1-z^2/4)").unwrap();
        assert_eq!(p.degree_y(), Some(2));
        let z = Complex64::new(0.3, 0.2);
        let y = Complex64::new(1.0, -0.5);
        let want = y * y - (1.0 - z * z) * (1.0 - z * z / 4.0);
        assert!((p.eval(z, y) - want).norm() < 1e-14);
    }

    #[test]
    fn parses_complex_constants() {
        assert_eq!(parse_complex("0.3+1.1i").unwrap(), Complex64::new(0.3, 1.1));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3").unwrap(), Complex64::new(1e-3, 0.0));
        assert!(parse_complex("z").is_err());
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let p = parse_bipoly("-z^2").unwrap();
        let z = Complex64::new(2.0, 0.0);
        assert_eq!(p.eval(z, z), Complex64::new(-4.0, 0.0));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_bipoly("y^2 - ").is_err());
        assert!(parse_bipoly("y / z").is_err());
        assert!(parse_bipoly("(y").is_err());
        assert!(parse_bipoly("q").is_err());
    }
}
