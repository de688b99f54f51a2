//! Seeded generators for harness instances and randomized checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Coeff, FieldTag};
use crate::harness::PolyMap;
use crate::linalg::Matrix;
use crate::monomial::{Monomial, MultiIndex};
use crate::poly::Poly;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero coefficient: an integer in `[-5, 5]`, sometimes divided
/// by 2 or 3 in characteristic 0, with an imaginary part over `Q(i)`.
pub fn small_coeff<R: Rng>(rng: &mut R, field: FieldTag) -> Coeff {
    loop {
        let num = rng.gen_range(-5i64..=5);
        let den = if field.is_char_zero() && rng.gen_bool(0.25) { rng.gen_range(2..=3) } else { 1 };
        let mut c = Coeff::from_ratio(field, num, den).expect("nonzero denominator");
        if field == FieldTag::Gaussian && rng.gen_bool(0.3) {
            let im = Coeff::from_i64(field, rng.gen_range(-3i64..=3));
            c = &c + &(&im * &Coeff::imaginary_unit(field).expect("gaussian"));
        }
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random polynomial with at most `nterms` terms, `deg_z <= max_z`,
/// `deg_u <= max_u`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    nvars: usize,
    field: FieldTag,
    max_z: u32,
    max_u: u32,
    nterms: usize,
) -> Poly {
    let mut terms = Vec::with_capacity(nterms);
    for _ in 0..nterms {
        let z = random_exponent(rng, nvars, max_z);
        let u = random_exponent(rng, nvars, max_u);
        terms.push((Monomial::new(&z, &u), small_coeff(rng, field)));
    }
    Poly::from_terms(nvars, field, terms)
}

pub fn random_z_poly<R: Rng>(rng: &mut R, nvars: usize, field: FieldTag, max_z: u32, nterms: usize) -> Poly {
    random_poly(rng, nvars, field, max_z, 0, nterms)
}

fn random_exponent<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32) -> Vec<u32> {
    let total = rng.gen_range(0..=max_degree);
    let mut e = vec![0; nvars];
    if nvars > 0 {
        for _ in 0..total {
            e[rng.gen_range(0..nvars)] += 1;
        }
    }
    e
}

/// Random homogeneous polynomial of degree `d` in `z_start..z_{n-1}`
/// (0-based), possibly zero.
pub fn random_homogeneous<R: Rng>(
    rng: &mut R,
    nvars: usize,
    field: FieldTag,
    start: usize,
    d: u32,
    nterms: usize,
) -> Poly {
    if start >= nvars {
        return Poly::zero(nvars, field);
    }
    let zero = vec![0; nvars];
    let candidates = MultiIndex::with_degree(nvars - start, d);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let tail = &candidates[rng.gen_range(0..candidates.len())];
        let mut z = vec![0; start];
        z.extend_from_slice(&tail.0);
        terms.push((Monomial::new(&z, &zero), small_coeff(rng, field)));
    }
    Poly::from_terms(nvars, field, terms)
}

/// Strictly triangular homogeneous map of degree `d`: `H_i` depends only on
/// `z_{i+1}, ..., z_n`, so `JH` is nilpotent and `j(z - H) = 1`.
pub fn random_triangular_map<R: Rng>(rng: &mut R, nvars: usize, field: FieldTag, d: u32) -> PolyMap {
    let comps = (0..nvars)
        .map(|i| random_homogeneous(rng, nvars, field, i + 1, d, 3))
        .collect();
    PolyMap::new(comps).expect("well-formed map")
}

/// Homogeneous map of degree `d` with unrestricted components.
pub fn random_homogeneous_map<R: Rng>(rng: &mut R, nvars: usize, field: FieldTag, d: u32) -> PolyMap {
    let comps = (0..nvars).map(|_| random_homogeneous(rng, nvars, field, 0, d, 3)).collect();
    PolyMap::new(comps).expect("well-formed map")
}

/// Random invertible matrix with small integer entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, field: FieldTag) -> Matrix {
    loop {
        let mut m = Matrix::zeros(field, n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, Coeff::from_i64(field, rng.gen_range(-2i64..=2)));
            }
        }
        if !m.determinant().is_zero() {
            return m;
        }
    }
}
