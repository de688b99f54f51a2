//! Text form of polynomials.
//!
//! Grammar (whitespace between tokens is ignored, implicit multiplication is
//! rejected):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' UINT)?
//! base   := RAT | 'i' | VAR | '(' expr ')'
//! VAR    := ('z'|'u') UINT
//! RAT    := '-'? UINT ('/' UINT)?
//! ```
//!
//! `u1..un` spell the symbol variables. The printer emits text that parses
//! back to the same polynomial.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{Coeff, FieldTag};
use crate::laurent::LaurentPoly;
use crate::poly::{Block, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Signed summands; `true` marks subtraction.
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Power(Box<Expr>, u32),
    Rational(BigRational),
    Imag,
    /// 1-based variable index.
    Var(Block, usize),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, nvars: usize, field: FieldTag) -> Result<Poly> {
        Ok(match self {
            Expr::Sum(items) => {
                let mut acc = Poly::zero(nvars, field);
                for (neg, e) in items {
                    let v = e.eval(nvars, field)?;
                    acc = if *neg { &acc - &v } else { &acc + &v };
                }
                acc
            }
            Expr::Product(items) => {
                let mut acc = Poly::one(nvars, field);
                for e in items {
                    acc = &acc * &e.eval(nvars, field)?;
                }
                acc
            }
            Expr::Power(base, e) => base.eval(nvars, field)?.pow(*e),
            Expr::Rational(q) => Poly::constant(nvars, Coeff::from_rational(field, q)?),
            Expr::Imag => Poly::constant(nvars, Coeff::imaginary_unit(field)?),
            Expr::Var(block, i) => {
                if *i == 0 || *i > nvars {
                    return Err(Error::IndexOutOfRange { index: *i, nvars });
                }
                Poly::var(nvars, field, *block, i - 1)?
            }
        })
    }
}

/// Parses `src` into a canonical polynomial.
pub fn parse_poly(src: &str, nvars: usize, field: FieldTag) -> Result<Poly> {
    Expr::parse(src)?.eval(nvars, field)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse as BigInt"))
    }

    fn small_uint(&mut self) -> Result<u32> {
        let start = self.pos;
        let v = self.uint()?;
        u32::try_from(v).map_err(|_| Error::Syntax {
            offset: start,
            message: "integer too large".into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut items = vec![(false, self.term()?)];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    items.push((false, self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    items.push((true, self.term()?));
                }
                _ => break,
            }
        }
        Ok(if items.len() == 1 && !items[0].0 {
            items.pop().expect("one item").1
        } else {
            Expr::Sum(items)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut items = vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            items.push(self.factor()?);
        }
        Ok(if items.len() == 1 { items.pop().expect("one item") } else { Expr::Product(items) })
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.small_uint()?;
            return Ok(Expr::Power(Box::new(base), e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Expr::Imag)
            }
            Some(c @ (b'z' | b'u')) => {
                self.pos += 1;
                let idx = self.small_uint()?;
                let block = if c == b'z' { Block::Z } else { Block::U };
                Ok(Expr::Var(block, idx as usize))
            }
            Some(b'-' | b'0'..=b'9') => self.rational(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn rational(&mut self) -> Result<Expr> {
        let negative = self.src[self.pos] == b'-';
        if negative {
            self.pos += 1;
        }
        let mut num = self.uint()?;
        if negative {
            num = -num;
        }
        let mut den = BigInt::from(1);
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            den = self.uint()?;
            if den.is_zero() {
                return Err(Error::ZeroDenominator);
            }
        }
        Ok(Expr::Rational(BigRational::new(num, den)))
    }
}

fn write_var_power(out: &mut String, letter: char, idx: usize, e: i64) {
    if !out.is_empty() {
        out.push('*');
    }
    let _ = write!(out, "{letter}{}", idx + 1);
    if e != 1 {
        let _ = write!(out, "^{e}");
    }
}

fn write_terms<'a, I>(f: &mut impl fmt::Write, terms: I) -> fmt::Result
where
    I: Iterator<Item = (String, &'a Coeff)>,
{
    let mut first = true;
    for (mono, c) in terms {
        let negative = c.is_negative();
        let abs = if negative { -c } else { c.clone() };
        let body = if mono.is_empty() {
            abs.to_string()
        } else if abs.is_one() {
            mono
        } else {
            format!("{abs}*{mono}")
        };
        if first {
            if negative {
                if body.starts_with(|ch: char| ch.is_ascii_digit()) {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "-1*{body}")?;
                }
            } else {
                f.write_str(&body)?;
            }
            first = false;
        } else {
            write!(f, " {} {body}", if negative { '-' } else { '+' })?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

pub(crate) fn format_poly(p: &Poly, f: &mut impl fmt::Write) -> fmt::Result {
    write_terms(
        f,
        p.terms().map(|(m, c)| {
            let mut s = String::new();
            for (i, &e) in m.u().iter().enumerate() {
                if e > 0 {
                    write_var_power(&mut s, 'u', i, e as i64);
                }
            }
            for (i, &e) in m.z().iter().enumerate() {
                if e > 0 {
                    write_var_power(&mut s, 'z', i, e as i64);
                }
            }
            (s, c)
        }),
    )
}

pub(crate) fn format_laurent(p: &LaurentPoly, var: char) -> String {
    let mut out = String::new();
    let _ = write_terms(
        &mut out,
        p.terms().map(|(e, c)| {
            let mut s = String::new();
            for (i, &x) in e.0.iter().enumerate() {
                if x != 0 {
                    write_var_power(&mut s, var, i, x);
                }
            }
            (s, c)
        }),
    );
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_poly(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldTag = FieldTag::Rational;
    const G: FieldTag = FieldTag::Gaussian;

    #[test]
    fn parses_mixed_monomial() {
        let p = parse_poly("u1^2*z1^4", 1, Q).unwrap();
        assert_eq!(p, &Poly::u(1, Q, 0).pow(2) * &Poly::z(1, Q, 0).pow(4));
        assert_eq!(p.to_string(), "u1^2*z1^4");
    }

    #[test]
    fn gaussian_quartic_matches_binomial_expansion() {
        let p = parse_poly("(z1+i*z2)^4", 2, G).unwrap();
        // sum_k C(4,k) i^k z1^(4-k) z2^k, i^k cycling 1, i, -1, -i, 1
        let binom = [1, 4, 6, 4, 1];
        let i = Coeff::imaginary_unit(G).unwrap();
        let mut expect = Poly::zero(2, G);
        for (k, &b) in binom.iter().enumerate() {
            let c = &Coeff::from_i64(G, b) * &i.pow(k as u32);
            expect = &expect
                + &Poly::monomial(2, &[4 - k as u32, k as u32], &[0, 0], c);
        }
        assert_eq!(p, expect);
        assert_eq!(p.to_string(), "z1^4 + 4*i*z1^3*z2 - 6*z1^2*z2^2 - 4*i*z1*z2^3 + z2^4");
    }

    #[test]
    fn errors() {
        assert_eq!(parse_poly("3/0", 1, Q), Err(Error::ZeroDenominator));
        assert!(matches!(parse_poly("z1 z1", 1, Q), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_poly("2z1", 1, Q), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse_poly("-z1", 1, Q), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("(z1", 1, Q), Err(Error::Syntax { .. })));
        assert_eq!(parse_poly("z3", 2, Q), Err(Error::IndexOutOfRange { index: 3, nvars: 2 }));
        assert_eq!(parse_poly("z0", 2, Q), Err(Error::IndexOutOfRange { index: 0, nvars: 2 }));
        assert_eq!(parse_poly("i*z1", 1, Q), Err(Error::ImaginaryInNonGaussianField));
        assert!(parse_poly("z1/3", 1, Q).is_err());
    }

    #[test]
    fn signs_and_rationals() {
        let p = parse_poly(" -3/6 * z1 - z2 + 2 ", 2, Q).unwrap();
        assert_eq!(p.to_string(), "-1/2*z1 - z2 + 2");
        assert_eq!(parse_poly(&p.to_string(), 2, Q).unwrap(), p);
        let q = parse_poly("0 - z1", 1, Q).unwrap();
        assert_eq!(q.to_string(), "-1*z1");
        assert_eq!(parse_poly("z1 - z1", 1, Q).unwrap().to_string(), "0");
        let g = parse_poly("(-1 - 2*i)*z1 - i", 1, G).unwrap();
        assert_eq!(g.to_string(), "-1*(1 + 2*i)*z1 - i");
        assert_eq!(parse_poly(&g.to_string(), 1, G).unwrap(), g);
        let fp = parse_poly("-1*z1 + 1/2", 1, FieldTag::Prime(5)).unwrap();
        assert_eq!(fp.to_string(), "4*z1 + 3");
    }
}
