//! Exponent vectors.
//!
//! [`MultiIndex`] is a plain `alpha in N^n`; [`Monomial`] is the key of a
//! [`Poly`](crate::Poly) term, the split exponent pair `(zexp, uexp)` packed
//! into one vector of length `2n`; [`LaurentExp`] allows negative entries.
//! Monomial keys order by total degree, then lexicographically.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::field::{factorial_int, Coeff, FieldTag};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> MultiIndex {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> MultiIndex {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `alpha! = prod alpha_i!`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&e| factorial_int(e)).product()
    }

    pub fn factorial_in(&self, field: FieldTag) -> Coeff {
        Coeff::from_bigint(field, &self.factorial())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All `alpha in N^n` with `|alpha| = m`, in lexicographically
    /// decreasing order.
    pub fn with_degree(n: usize, m: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fill_degree(&mut cur, 0, m, &mut out);
        out
    }

    /// All `alpha` with `alpha <= bound` componentwise.
    pub fn all_below(bound: &[u32]) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::new())];
        for &b in bound {
            out = out
                .into_iter()
                .flat_map(|a| {
                    (0..=b).map(move |e| {
                        let mut v = a.0.clone();
                        v.push(e);
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out
    }

    /// All `alpha in N^n` with `|alpha| <= m`, grouped by degree.
    pub fn up_to_degree(n: usize, m: u32) -> Vec<MultiIndex> {
        (0..=m).flat_map(|d| MultiIndex::with_degree(n, d)).collect()
    }
}

fn fill_degree(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    if cur.is_empty() {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill_degree(cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Term key of a polynomial in `z_1..z_n, u_1..u_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial { exps: vec![0; 2 * nvars] }
    }

    pub fn new(z: &[u32], u: &[u32]) -> Monomial {
        assert_eq!(z.len(), u.len(), "z and u blocks must have the same length");
        let mut exps = Vec::with_capacity(2 * z.len());
        exps.extend_from_slice(z);
        exps.extend_from_slice(u);
        Monomial { exps }
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.exps
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [u32] {
        &mut self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn z(&self) -> &[u32] {
        &self.exps[..self.nvars()]
    }

    pub fn u(&self) -> &[u32] {
        &self.exps[self.nvars()..]
    }

    pub fn z_index(&self) -> MultiIndex {
        MultiIndex(self.z().to_vec())
    }

    pub fn u_index(&self) -> MultiIndex {
        MultiIndex(self.u().to_vec())
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn deg_z(&self) -> u32 {
        self.z().iter().sum()
    }

    pub fn deg_u(&self) -> u32 {
        self.u().iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

fn grlex<T: Ord + Copy + std::iter::Sum<T>>(a: &[T], b: &[T]) -> Ordering {
    let da: T = a.iter().copied().sum();
    let db: T = b.iter().copied().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex(&self.exps, &other.exps)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exponent vector of a Laurent monomial; entries may be negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentExp(pub Vec<i64>);

impl LaurentExp {
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.0.iter().all(|&e| e <= -1)
    }
}

impl Ord for LaurentExp {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex(&self.0, &other.0)
    }
}

impl PartialOrd for LaurentExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_fixed_degree() {
        let all = MultiIndex::with_degree(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|a| a.degree() == 2));
        assert_eq!(all[0], MultiIndex(vec![2, 0, 0]));
        assert_eq!(MultiIndex::with_degree(1, 4), vec![MultiIndex(vec![4])]);
        assert_eq!(MultiIndex::up_to_degree(2, 3).len(), 10);
    }

    #[test]
    fn factorial_and_order() {
        assert_eq!(MultiIndex(vec![3, 2]).factorial(), BigInt::from(12));
        assert!(MultiIndex(vec![1, 2]).le(&MultiIndex(vec![1, 3])));
        assert!(!MultiIndex(vec![2, 0]).le(&MultiIndex(vec![1, 3])));
    }

    #[test]
    fn graded_order() {
        let a = Monomial::new(&[2, 0], &[0, 0]);
        let b = Monomial::new(&[0, 1], &[1, 1]);
        assert!(a < b);
        let c = Monomial::new(&[1, 1], &[0, 0]);
        assert!(c < a);
    }
}
