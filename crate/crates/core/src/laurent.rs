use std::collections::BTreeMap;
use std::ops::Add;

use crate::error::Result;
use crate::field::{Coeff, FieldTag};
use crate::monomial::{LaurentExp, Monomial};
use crate::poly::Poly;

/// Sparse Laurent polynomial in `n` variables with integer exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    field: FieldTag,
    terms: BTreeMap<LaurentExp, Coeff>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize, field: FieldTag) -> LaurentPoly {
        LaurentPoly { nvars, field, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(nvars: usize, field: FieldTag, terms: I) -> LaurentPoly
    where
        I: IntoIterator<Item = (Vec<i64>, Coeff)>,
    {
        let mut p = LaurentPoly::zero(nvars, field);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(LaurentExp(e), c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: LaurentExp, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(e, merged);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&LaurentExp, &Coeff)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient_of(&self, exp: &[i64]) -> Coeff {
        self.terms
            .get(&LaurentExp(exp.to_vec()))
            .cloned()
            .unwrap_or_else(|| Coeff::zero(self.field))
    }

    /// The sub-sum over exponent vectors with every entry `>= 0`, as a
    /// pure-z polynomial.
    pub fn holomorphic_part(&self) -> Poly {
        let zero = vec![0u32; self.nvars];
        Poly::from_terms(
            self.nvars,
            self.field,
            self.terms.iter().filter(|(e, _)| e.is_nonnegative()).map(|(e, c)| {
                let z: Vec<u32> = e.0.iter().map(|&x| x as u32).collect();
                (Monomial::new(&z, &zero), c.clone())
            }),
        )
    }

    /// The sub-sum over exponent vectors with every entry `<= -1`.
    pub fn strictly_negative_part(&self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.is_strictly_negative())
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Embeds a pure-z polynomial; u exponents are ignored by the caller's
    /// contract and must be zero.
    pub fn from_z_poly(p: &Poly) -> LaurentPoly {
        assert!(p.is_z_pure(), "only pure-z polynomials embed as Laurent polynomials");
        LaurentPoly::from_terms(
            p.nvars(),
            p.field(),
            p.terms().map(|(m, c)| (m.z().iter().map(|&e| e as i64).collect(), c.clone())),
        )
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        if self.nvars != other.nvars || self.field != other.field {
            return Err(crate::Error::MismatchedContext("laurent polynomial contexts".into()));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Renders with the given variable letter, e.g. `24*z1^2 + z1^-1*z2`.
    pub fn display_with(&self, var: char) -> String {
        crate::expr::format_laurent(self, var)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.display_with('z'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldTag = FieldTag::Rational;

    fn c(v: i64) -> Coeff {
        Coeff::from_i64(Q, v)
    }

    #[test]
    fn holomorphic_part_keeps_nonnegative_exponents() {
        let q = LaurentPoly::from_terms(1, Q, [(vec![-1], c(1)), (vec![1], c(1))]);
        assert_eq!(q.holomorphic_part(), Poly::z(1, Q, 0));
        let q = LaurentPoly::from_terms(2, Q, [(vec![1, 0], c(2)), (vec![-2, 1], c(24))]);
        assert_eq!(q.holomorphic_part(), Poly::z(2, Q, 0).scale(&c(2)));
    }

    #[test]
    fn negative_part_and_coefficients() {
        let q = LaurentPoly::from_terms(
            2,
            Q,
            [(vec![-1, -2], c(3)), (vec![-1, 0], c(5)), (vec![0, 0], c(1))],
        );
        let neg = q.strictly_negative_part();
        assert_eq!(neg.len(), 1);
        assert_eq!(neg.coefficient_of(&[-1, -2]), c(3));
        assert!(q.coefficient_of(&[4, 4]).is_zero());
        let cancel = LaurentPoly::from_terms(1, Q, [(vec![-3], c(2)), (vec![-3], c(-2))]);
        assert!(cancel.is_zero());
    }
}
