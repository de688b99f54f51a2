//! Independent reference computations shared by the integration tests.
//! These deliberately avoid the library routines they are used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use imtheta::harness::PolyMap;
use imtheta::{parse_poly, Coeff, FieldTag, Monomial, MultiIndex, Poly};

pub fn p(src: &str, n: usize) -> Poly {
    parse_poly(src, n, FieldTag::Rational).unwrap()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn multi_factorial(a: &[u32]) -> BigInt {
    a.iter().map(|&e| factorial(e)).product()
}

/// `E` by repeated differentiation: each `u^alpha z^beta` becomes
/// `d^alpha (z^beta)`.
pub fn eval_e(f: &Poly) -> Poly {
    let n = f.nvars();
    let zero = vec![0; n];
    let mut out = Poly::zero(n, f.field());
    for (m, c) in f.terms() {
        let mut t = Poly::monomial(n, m.z(), &zero, c.clone());
        for (i, &a) in m.u().iter().enumerate() {
            for _ in 0..a {
                t = t.dz(i);
            }
        }
        out = &out + &t;
    }
    out
}

/// Coefficients of `Z(f)` keyed by exponent, from `beta! z^(beta - alpha)`.
pub fn eval_z(f: &Poly) -> BTreeMap<Vec<i64>, Coeff> {
    let mut out: BTreeMap<Vec<i64>, Coeff> = BTreeMap::new();
    for (m, c) in f.terms() {
        let e: Vec<i64> = m.z().iter().zip(m.u()).map(|(&b, &a)| b as i64 - a as i64).collect();
        let v = c * &Coeff::from_bigint(f.field(), &multi_factorial(m.z()));
        let slot = out.entry(e).or_insert_with(|| Coeff::zero(f.field()));
        *slot = &*slot + &v;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `Theta_i g = u_i g - d_i g`.
pub fn theta(g: &Poly, i: usize) -> Poly {
    &(&Poly::u(g.nvars(), g.field(), i) * g) - &g.dz(i)
}

/// `sum_alpha (1/alpha!) Theta^alpha a_alpha`.
pub fn taylor_sum(n: usize, field: FieldTag, coeffs: &BTreeMap<MultiIndex, Poly>) -> Poly {
    let mut out = Poly::zero(n, field);
    for (alpha, a) in coeffs {
        let mut t = a.clone();
        for (i, &e) in alpha.0.iter().enumerate() {
            for _ in 0..e {
                t = theta(&t, i);
            }
        }
        let inv = BigRational::new(BigInt::one(), multi_factorial(&alpha.0));
        out = &out + &t.scale(&Coeff::from_rational(field, &inv).unwrap());
    }
    out
}

/// Formal inverse of `z - H` by the fixed-point iteration `G <- z + H(G)`,
/// truncated to `degree` after each step.
pub fn fixed_point_inverse(h: &PolyMap, degree: u32) -> Vec<Poly> {
    let n = h.nvars();
    let id: Vec<Poly> = (0..n).map(|i| Poly::z(n, h.field(), i)).collect();
    let mut g = id.clone();
    for _ in 0..=degree {
        let next: Vec<Poly> = h
            .components()
            .iter()
            .zip(&id)
            .map(|(hi, zi)| (zi + &hi.substitute(&g).unwrap()).truncate(degree))
            .collect();
        if next == g {
            break;
        }
        g = next;
    }
    g
}

/// Rank of a dense rational matrix by plain Gauss-Jordan elimination.
pub fn dense_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let pivot = rows[rank][col].clone();
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = &row[col] / &pivot;
                for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &factor * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Codimension of `(d/dz - q')(K[z]_{<= D + 1 - deg q})` in `K[z]_{<= D}`
/// for one variable, with `q` given by its integer coefficient list.
pub fn codim_one_var(q: &[i64], degree: u32) -> usize {
    let dq = q.iter().rposition(|&c| c != 0).unwrap_or(0) as u32;
    // q' as a coefficient list
    let dq_coeffs: Vec<BigRational> =
        (1..q.len()).map(|k| BigRational::from_integer(BigInt::from(q[k] * k as i64))).collect();
    let width = degree as usize + 1;
    let mut rows = Vec::new();
    if degree + 1 >= dq {
        for j in 0..=(degree + 1 - dq) as usize {
            let mut row = vec![BigRational::zero(); width];
            if j > 0 {
                row[j - 1] += BigRational::from_integer(BigInt::from(j));
            }
            for (k, c) in dq_coeffs.iter().enumerate() {
                if !c.is_zero() {
                    row[j + k] -= c.clone();
                }
            }
            rows.push(row);
        }
    }
    width - dense_rank(rows)
}

pub fn monomial_z(n: usize, field: FieldTag, z: &[u32]) -> Poly {
    Poly::from_terms(n, field, [(Monomial::new(z, &vec![0; n]), Coeff::one(field))])
}
