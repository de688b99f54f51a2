//! Sparse polynomials in `z_1..z_n, u_1..u_n` over an exact field.
//!
//! The `u` block plays the role of the symbol variables `xi`: a term
//! `c * u^alpha * z^beta` is stored under the packed key `(beta, alpha)`.
//! Terms live in a `BTreeMap` keyed by graded-lex order, so iteration,
//! printing and serialization are deterministic. Zero coefficients are never
//! stored.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{falling_factorial, Coeff, FieldTag};
use crate::linalg::Matrix;
use crate::monomial::{Monomial, MultiIndex};

/// Which variable block an operation addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    Z,
    U,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    field: FieldTag,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero(nvars: usize, field: FieldTag) -> Poly {
        Poly { nvars, field, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Coeff) -> Poly {
        Poly::monomial(nvars, &vec![0; nvars], &vec![0; nvars], c)
    }

    pub fn one(nvars: usize, field: FieldTag) -> Poly {
        Poly::constant(nvars, Coeff::one(field))
    }

    pub fn from_i64(nvars: usize, field: FieldTag, c: i64) -> Poly {
        Poly::constant(nvars, Coeff::from_i64(field, c))
    }

    /// `c * z^zexp * u^uexp`.
    pub fn monomial(nvars: usize, zexp: &[u32], uexp: &[u32], c: Coeff) -> Poly {
        assert!(zexp.len() == nvars && uexp.len() == nvars, "exponent length mismatch");
        let field = c.field();
        let mut p = Poly::zero(nvars, field);
        if !c.is_zero() {
            p.terms.insert(Monomial::new(zexp, uexp), c);
        }
        p
    }

    /// The variable `z_{i+1}` or `u_{i+1}` (0-based `i`).
    pub fn var(nvars: usize, field: FieldTag, block: Block, i: usize) -> Result<Poly> {
        if i >= nvars {
            return Err(Error::IndexOutOfRange { index: i + 1, nvars });
        }
        let mut e = vec![0; nvars];
        e[i] = 1;
        let zero = vec![0; nvars];
        Ok(match block {
            Block::Z => Poly::monomial(nvars, &e, &zero, Coeff::one(field)),
            Block::U => Poly::monomial(nvars, &zero, &e, Coeff::one(field)),
        })
    }

    pub fn z(nvars: usize, field: FieldTag, i: usize) -> Poly {
        Poly::var(nvars, field, Block::Z, i).expect("variable index in range")
    }

    pub fn u(nvars: usize, field: FieldTag, i: usize) -> Poly {
        Poly::var(nvars, field, Block::U, i).expect("variable index in range")
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I>(nvars: usize, field: FieldTag, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut p = Poly::zero(nvars, field);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial length mismatch");
            assert_eq!(c.field(), field, "coefficient from another field");
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
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
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> + '_ {
        self.terms.iter().rev()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Coeff)> {
        self.terms.into_iter().rev()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest total degree of a term; `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn deg_z(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::deg_z).max()
    }

    pub fn deg_u(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::deg_u).max()
    }

    /// Largest exponent of each `u` variable across all terms.
    pub fn u_exponent_bounds(&self) -> Vec<u32> {
        let mut b = vec![0; self.nvars];
        for m in self.terms.keys() {
            for (bi, &e) in b.iter_mut().zip(m.u()) {
                *bi = (*bi).max(e);
            }
        }
        b
    }

    pub fn is_z_pure(&self) -> bool {
        self.terms.keys().all(|m| m.deg_u() == 0)
    }

    pub fn is_u_pure(&self) -> bool {
        self.terms.keys().all(|m| m.deg_z() == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Homogeneous of some degree (zero counts as homogeneous of any degree,
    /// reported as `None`).
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let Some(d) = it.next() else { return Ok(None) };
        if it.all(|e| e == d) {
            Ok(Some(d))
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(|| Coeff::zero(self.field))
    }

    /// Coefficient of `z^zexp u^uexp`, or zero when absent.
    pub fn coefficient_of(&self, zexp: &[u32], uexp: &[u32]) -> Coeff {
        if zexp.len() != self.nvars || uexp.len() != self.nvars {
            return Coeff::zero(self.field);
        }
        self.terms
            .get(&Monomial::new(zexp, uexp))
            .cloned()
            .unwrap_or_else(|| Coeff::zero(self.field))
    }

    pub fn same_context(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::MismatchedContext(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.field != other.field {
            return Err(Error::MismatchedContext(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.same_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_context(other)?;
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc: HashMap<Monomial, Coeff> =
            HashMap::with_capacity(small.len().saturating_mul(large.len()).min(1 << 20));
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let m = ma.mul(mb);
                let prod = ca * cb;
                match acc.get_mut(&m) {
                    Some(c) => *c = &*c + &prod,
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        Ok(Poly {
            nvars: self.nvars,
            field: self.field,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        assert_eq!(c.field(), self.field, "scalar from another field");
        if c.is_zero() {
            return Poly::zero(self.nvars, self.field);
        }
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Repeated squaring.
    pub fn pow(&self, mut exp: u32) -> Poly {
        let mut acc = Poly::one(self.nvars, self.field);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Keeps the terms of total degree at most `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Poly {
        self.filter_terms(|m| m.degree() <= max_degree)
    }

    pub(crate) fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `z_{i+1}` or `u_{i+1}`.
    pub fn partial_derivative(&self, block: Block, i: usize) -> Result<Poly> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange { index: i + 1, nvars: self.nvars });
        }
        Ok(self.derivative_multi(block, &MultiIndex::unit(self.nvars, i)))
    }

    /// Partial derivative in `z_{i+1}`; panics on a bad index.
    pub fn dz(&self, i: usize) -> Poly {
        self.partial_derivative(Block::Z, i).expect("index in range")
    }

    /// Partial derivative in `u_{i+1}`; panics on a bad index.
    pub fn du(&self, i: usize) -> Poly {
        self.partial_derivative(Block::U, i).expect("index in range")
    }

    /// `d^alpha` in the chosen block.
    pub fn derivative_multi(&self, block: Block, alpha: &MultiIndex) -> Poly {
        assert_eq!(alpha.len(), self.nvars, "multi-index length mismatch");
        let offset = match block {
            Block::Z => 0,
            Block::U => self.nvars,
        };
        let mut out = Poly::zero(self.nvars, self.field);
        'terms: for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut key = m.clone();
            for (k, &a) in alpha.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let e = key.raw()[offset + k];
                if e < a {
                    continue 'terms;
                }
                coeff = &coeff * &falling_factorial(self.field, e, a);
                key.raw_mut()[offset + k] = e - a;
            }
            out.add_term(key, coeff);
        }
        out
    }

    /// Replaces the chosen block of variables `x` by `M x`, i.e.
    /// `x_i -> sum_j M[i][j] x_j`.
    pub fn substitute_linear(&self, m: &Matrix, block: Block) -> Result<Poly> {
        if !m.is_square() || m.rows() != self.nvars {
            return Err(Error::Invalid(format!(
                "expected a {n}x{n} matrix, got {}x{}",
                m.rows(),
                m.cols(),
                n = self.nvars
            )));
        }
        if m.field() != self.field {
            return Err(Error::MismatchedContext("matrix field differs".into()));
        }
        if m.determinant().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let n = self.nvars;
        let images: Vec<Poly> = (0..n)
            .map(|i| {
                let mut img = Poly::zero(n, self.field);
                for j in 0..n {
                    let v = Poly::var(n, self.field, block, j).expect("in range");
                    img = &img + &v.scale(m.get(i, j));
                }
                img
            })
            .collect();
        let offset = match block {
            Block::Z => 0,
            Block::U => n,
        };
        let mut powers = PowerCache::new(&images);
        let mut out = Poly::zero(n, self.field);
        for (mono, c) in &self.terms {
            let mut rest = mono.clone();
            let mut term = Poly::constant(n, c.clone());
            for i in 0..n {
                let e = rest.raw()[offset + i];
                if e > 0 {
                    term = &term * powers.get(i, e);
                    rest.raw_mut()[offset + i] = 0;
                }
            }
            let rest = Poly::from_terms(n, self.field, [(rest, Coeff::one(self.field))]);
            out = &out + &(&term * &rest);
        }
        Ok(out)
    }

    /// Composition `f(s_1, ..., s_n)` for a pure-z `f`.
    pub fn substitute(&self, subs: &[Poly]) -> Result<Poly> {
        if !self.is_z_pure() {
            return Err(Error::NonZPure);
        }
        if subs.len() != self.nvars {
            return Err(Error::Invalid(format!(
                "expected {} substitutions, got {}",
                self.nvars,
                subs.len()
            )));
        }
        let target = subs.first().map(|s| (s.nvars, s.field));
        if let Some((tn, tf)) = target {
            if tf != self.field {
                return Err(Error::MismatchedContext("substitution field differs".into()));
            }
            if subs.iter().any(|s| s.nvars != tn || s.field != tf) {
                return Err(Error::MismatchedContext("substitutions disagree".into()));
            }
        }
        let tn = target.map_or(self.nvars, |t| t.0);
        let mut powers = PowerCache::new(subs);
        let mut out = Poly::zero(tn, self.field);
        for (mono, c) in &self.terms {
            let mut term = Poly::constant(tn, c.clone());
            for (i, &e) in mono.z().iter().enumerate() {
                if e > 0 {
                    term = &term * powers.get(i, e);
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Applies `f` to every term, merging the results.
    pub(crate) fn map_terms(&self, f: impl Fn(&Monomial, &Coeff) -> Option<(Monomial, Coeff)>) -> Poly {
        let mut out = Poly::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                out.add_term(m2, c2);
            }
        }
        out
    }

    /// The pure-z coefficient of `u^alpha`, i.e. `f` viewed in `K[z][u]`.
    pub fn u_coefficient(&self, alpha: &[u32]) -> Poly {
        self.map_terms(|m, c| {
            (m.u() == alpha).then(|| (Monomial::new(m.z(), &vec![0; self.nvars]), c.clone()))
        })
    }

    /// Swaps the roles of the two blocks.
    pub fn swap_blocks(&self) -> Poly {
        self.map_terms(|m, c| Some((Monomial::new(m.u(), m.z()), c.clone())))
    }

    /// Debug scan of the canonical-form invariant.
    pub fn is_canonical(&self) -> bool {
        self.terms.iter().all(|(m, c)| {
            !c.is_zero() && c.field() == self.field && m.nvars() == self.nvars
        })
    }
}

/// Lazily computed powers `s_i^e` for composition.
struct PowerCache<'a> {
    base: &'a [Poly],
    powers: Vec<Vec<Poly>>,
}

impl<'a> PowerCache<'a> {
    fn new(base: &'a [Poly]) -> PowerCache<'a> {
        PowerCache { base, powers: vec![Vec::new(); base.len()] }
    }

    fn get(&mut self, i: usize, e: u32) -> &Poly {
        let cache = &mut self.powers[i];
        if cache.is_empty() {
            cache.push(self.base[i].clone());
        }
        while cache.len() < e as usize {
            let next = cache.last().expect("nonempty") * &self.base[i];
            cache.push(next);
        }
        &cache[e as usize - 1]
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;

    /// Panics when contexts differ; use [`Poly::checked_add`] to get an error.
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}
