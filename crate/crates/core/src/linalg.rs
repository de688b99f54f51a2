//! Exact linear algebra over a coefficient field: small dense matrices for
//! coordinate changes, and a sparse incremental echelon form for the large
//! truncated systems solved by the membership and codimension oracles.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Coeff, FieldTag};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldTag,
    data: Vec<Coeff>,
}

impl Matrix {
    pub fn zeros(field: FieldTag, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, field, data: vec![Coeff::zero(field); rows * cols] }
    }

    pub fn identity(field: FieldTag, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Coeff::one(field));
        }
        m
    }

    pub fn from_rows(field: FieldTag, rows: Vec<Vec<Coeff>>) -> Result<Matrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|c| c.field() != field) {
            return Err(Error::MismatchedContext("matrix entry from another field".into()));
        }
        Ok(Matrix { rows: nrows, cols: ncols, field, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(field: FieldTag, rows: &[&[i64]]) -> Matrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Coeff::from_i64(field, v)).collect())
            .collect();
        Matrix::from_rows(field, rows).expect("well-formed integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Coeff {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Coeff) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Coeff] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Coeff> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Coeff::zero(self.field);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Coeff]) -> Vec<Coeff> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Coeff::zero(self.field), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> Coeff {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Coeff::one(self.field);
        }
        let mut m = self.clone();
        let mut prev = Coeff::one(self.field);
        let mut negate = false;
        for k in 0..n {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !m.get(r, k).is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        negate = !negate;
                    }
                    None => return Coeff::zero(self.field),
                }
            }
            let prev_inv = prev.inverse().expect("nonzero Bareiss pivot");
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(m.get(i, j) * m.get(k, k)) - &(m.get(i, k) * m.get(k, j));
                    m.set(i, j, &v * &prev_inv);
                }
                m.set(i, k, Coeff::zero(self.field));
            }
            prev = m.get(k, k).clone();
        }
        let det = m.get(n - 1, n - 1).clone();
        if negate {
            -det
        } else {
            det
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let factor = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - &(&factor * m.get(r, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Invalid("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Coeff::one(self.field));
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A sparse vector, column index to nonzero value.
pub type SparseRow = BTreeMap<usize, Coeff>;

/// Incremental semi-echelon basis of a row space. Rows are reduced against
/// existing pivots on their leading column only; the pivot is always the
/// first nonzero entry.
#[derive(Debug, Clone)]
pub struct SparseEchelon {
    field: FieldTag,
    pivots: HashMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new(field: FieldTag) -> SparseEchelon {
        SparseEchelon { field, pivots: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the basis; returns the leading column of the
    /// remainder, or `None` if the row was dependent.
    fn reduce(&self, mut row: SparseRow) -> (SparseRow, Option<usize>) {
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else {
                return (row, None);
            };
            let Some(pivot) = self.pivots.get(&lead) else {
                return (row, Some(lead));
            };
            let factor = lead_val.clone();
            for (&c, v) in pivot {
                let entry = row.entry(c).or_insert_with(|| Coeff::zero(self.field));
                *entry = &*entry - &(&factor * v);
                if entry.is_zero() {
                    row.remove(&c);
                }
            }
        }
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let (row, lead) = self.reduce(row);
        let Some(lead) = lead else {
            return false;
        };
        let inv = row[&lead].inverse().expect("nonzero leading entry");
        let normalized = row.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
        self.pivots.insert(lead, normalized);
        true
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).1.is_none()
    }
}

/// Solves `A x = b` where `A` is given by its sparse columns. Returns one
/// solution (free variables set to zero) or `None` if inconsistent.
pub fn solve_sparse(
    field: FieldTag,
    columns: &[SparseRow],
    rhs: &SparseRow,
) -> Option<Vec<Coeff>> {
    let ncols = columns.len();
    let mut rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for (c, col) in columns.iter().enumerate() {
        for (&r, v) in col {
            rows.entry(r).or_default().insert(c, v.clone());
        }
    }
    for (&r, v) in rhs {
        rows.entry(r).or_default().insert(ncols, v.clone());
    }
    let mut ech = SparseEchelon::new(field);
    for (_, row) in rows {
        let (rem, lead) = ech.reduce(row);
        match lead {
            Some(l) if l == ncols => return None,
            Some(_) => {
                ech.insert(rem);
            }
            None => {}
        }
    }
    let mut x = vec![Coeff::zero(field); ncols];
    let mut leads: Vec<usize> = ech.pivots.keys().copied().collect();
    leads.sort_unstable_by(|a, b| b.cmp(a));
    for lead in leads {
        let row = &ech.pivots[&lead];
        let mut val = row.get(&ncols).cloned().unwrap_or_else(|| Coeff::zero(field));
        for (&c, v) in row.range(lead + 1..ncols) {
            val = &val - &(v * &x[c]);
        }
        x[lead] = val;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldTag = FieldTag::Rational;

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_i64(Q, &[&[0, 2, 1], &[1, 1, 0], &[3, 0, 1]]);
        // cofactor expansion: 0*(1) - 2*(1) + 1*(0 - 3) = -5
        assert_eq!(m.determinant(), Coeff::from_i64(Q, -5));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(Q, 3));
        let s = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        assert!(s.determinant().is_zero());
        assert_eq!(s.inverse(), Err(Error::SingularMatrix));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn solves_sparse_systems() {
        // x0 + x1 = 3, x1 = 1  (rows 0, 1)
        let one = Coeff::one(Q);
        let cols = vec![
            SparseRow::from([(0, one.clone())]),
            SparseRow::from([(0, one.clone()), (1, one.clone())]),
        ];
        let rhs = SparseRow::from([(0, Coeff::from_i64(Q, 3)), (1, one.clone())]);
        let x = solve_sparse(Q, &cols, &rhs).unwrap();
        assert_eq!(x, vec![Coeff::from_i64(Q, 2), one.clone()]);
        let bad = SparseRow::from([(2, one)]);
        assert!(solve_sparse(Q, &cols, &bad).is_none());
    }

    #[test]
    fn echelon_rank() {
        let mut e = SparseEchelon::new(Q);
        let r = |v: &[(usize, i64)]| -> SparseRow {
            v.iter().map(|&(c, x)| (c, Coeff::from_i64(Q, x))).collect()
        };
        assert!(e.insert(r(&[(0, 1), (1, 1)])));
        assert!(e.insert(r(&[(1, 1), (2, 1)])));
        assert!(!e.insert(r(&[(0, 1), (2, -1)])));
        assert!(e.contains(r(&[(0, 2), (1, 4), (2, 2)])));
        assert_eq!(e.rank(), 2);
    }
}
