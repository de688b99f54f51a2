//! The image of `Theta_i = u_i - d/dz_i` on `K[u, z]`.
//!
//! Membership is decided two ways: through the evaluation map `E`
//! (`u^alpha z^beta -> d^alpha z^beta`), whose kernel is exactly the image,
//! and through the Laurent map `Z` (`u^alpha z^beta -> beta! z^(beta-alpha)`),
//! whose holomorphic part vanishes exactly on the image. A third, independent
//! route solves the truncated linear system `f = sum_i op_i(w_i)` directly and
//! works for any first-order family, in any characteristic.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::field::{falling_factorial, Coeff, FieldTag};
use crate::laurent::LaurentPoly;
use crate::linalg::{solve_sparse, SparseEchelon, SparseRow};
use crate::monomial::{LaurentExp, Monomial, MultiIndex};
use crate::poly::{Block, Poly};
use crate::weyl::FirstOrderOp;

/// `E(g(u) h(z)) = g(d) h(z)`. Allowed in any characteristic.
pub fn eval_e(f: &Poly) -> Poly {
    let n = f.nvars();
    let field = f.field();
    let zero = vec![0; n];
    f.map_terms(|m, c| {
        let (z, u) = (m.z(), m.u());
        if u.iter().zip(z).any(|(a, b)| a > b) {
            return None;
        }
        let mut coeff = c.clone();
        let mut exps = Vec::with_capacity(n);
        for (&a, &b) in u.iter().zip(z) {
            if a > 0 {
                coeff = &coeff * &falling_factorial(field, b, a);
            }
            exps.push(b - a);
        }
        Some((Monomial::new(&exps, &zero), coeff))
    })
}

/// `Z(g(u) z^beta) = beta! g(z^-1) z^beta`.
pub fn eval_z(f: &Poly) -> Result<LaurentPoly> {
    f.field().require_char_zero()?;
    let mut out = LaurentPoly::zero(f.nvars(), f.field());
    for (m, c) in f.terms() {
        let beta = m.z_index();
        let exp = m.z().iter().zip(m.u()).map(|(&b, &a)| b as i64 - a as i64).collect();
        out.add_term(LaurentExp(exp), c * &beta.factorial_in(f.field()));
    }
    Ok(out)
}

/// Symbolic multivariate Laplace transform in the `z` variables,
/// `L(f)(u) = u^[-1] * Z(f)(z = u^-1)`, returned as a Laurent polynomial in
/// `u`. Each `u^alpha z^beta` maps to `beta! u^(alpha - beta - 1)`.
pub fn laplace_transform(f: &Poly) -> Result<LaurentPoly> {
    let z = eval_z(f)?;
    Ok(LaurentPoly::from_terms(
        f.nvars(),
        f.field(),
        z.terms().map(|(e, c)| (e.0.iter().map(|&g| -g - 1).collect(), c.clone())),
    ))
}

/// The `u^[-1] K[u^-1]` part of the Laplace transform; zero exactly on the
/// image of `Theta`.
pub fn laplace_principal_part(f: &Poly) -> Result<LaurentPoly> {
    Ok(laplace_transform(f)?.strictly_negative_part())
}

/// `Theta_i g = u_i g - d_i g`.
pub fn apply_theta(g: &Poly, i: usize) -> Poly {
    &(&Poly::u(g.nvars(), g.field(), i) * g) - &g.dz(i)
}

/// `Theta^alpha g`.
pub fn apply_theta_power(g: &Poly, alpha: &MultiIndex) -> Poly {
    let mut out = g.clone();
    for (i, &e) in alpha.0.iter().enumerate() {
        for _ in 0..e {
            if out.is_zero() {
                return out;
            }
            out = apply_theta(&out, i);
        }
    }
    out
}

/// `f = sum_alpha (1/alpha!) Theta^alpha a_alpha` with pure-z `a_alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorDecomposition {
    pub nvars: usize,
    pub field: FieldTag,
    /// Nonzero coefficients only.
    pub coefficients: BTreeMap<MultiIndex, Poly>,
}

impl TaylorDecomposition {
    pub fn coefficient(&self, alpha: &MultiIndex) -> Poly {
        self.coefficients
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars, self.field))
    }

    pub fn reconstruct(&self) -> Poly {
        let mut out = Poly::zero(self.nvars, self.field);
        for (alpha, a) in &self.coefficients {
            let inv = alpha.factorial_in(self.field).inverse().expect("char 0");
            out = &out + &apply_theta_power(a, alpha).scale(&inv);
        }
        out
    }

    /// `w` with `f - a_0 = sum_i Theta_i w_i`: each term with `alpha != 0`
    /// is charged to its first nonzero index `i`.
    pub fn theta_witness(&self) -> Vec<Poly> {
        let mut w = vec![Poly::zero(self.nvars, self.field); self.nvars];
        for (alpha, a) in &self.coefficients {
            let Some(i) = alpha.0.iter().position(|&e| e > 0) else { continue };
            let mut rest = alpha.clone();
            rest.0[i] -= 1;
            let inv = alpha.factorial_in(self.field).inverse().expect("char 0");
            w[i] = &w[i] + &apply_theta_power(a, &rest).scale(&inv);
        }
        w
    }
}

/// `a_alpha = E(d_u^alpha f)` for every `alpha` up to the u-exponents of `f`.
pub fn twisted_taylor(f: &Poly) -> Result<TaylorDecomposition> {
    f.field().require_char_zero()?;
    let mut coefficients = BTreeMap::new();
    for alpha in MultiIndex::all_below(&f.u_exponent_bounds()) {
        let a = eval_e(&f.derivative_multi(Block::U, &alpha));
        if !a.is_zero() {
            coefficients.insert(alpha, a);
        }
    }
    Ok(TaylorDecomposition { nvars: f.nvars(), field: f.field(), coefficients })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipReport {
    pub is_member: bool,
    pub e_value: Poly,
    pub z_holomorphic: Poly,
    /// `w` with `f = sum_i Theta_i w_i`, when requested and `f` is a member.
    pub witness: Option<Vec<Poly>>,
}

/// Decides `f in im Theta` by both the `E` and the `Z` criteria.
pub fn member_theta(f: &Poly) -> Result<MembershipReport> {
    f.field().require_char_zero()?;
    let e_value = eval_e(f);
    let z_holomorphic = eval_z(f)?.holomorphic_part();
    let is_member = e_value.is_zero();
    if is_member != z_holomorphic.is_zero() {
        return Err(Error::OracleDisagreement(format!(
            "E(f) = {e_value} but hol Z(f) = {z_holomorphic} for f = {f}"
        )));
    }
    Ok(MembershipReport { is_member, e_value, z_holomorphic, witness: None })
}

/// [`member_theta`] plus an explicit witness from the twisted Taylor
/// decomposition, checked by applying `Theta`.
pub fn member_theta_with_witness(f: &Poly) -> Result<MembershipReport> {
    let mut report = member_theta(f)?;
    if report.is_member {
        let w = twisted_taylor(f)?.theta_witness();
        let mut check = Poly::zero(f.nvars(), f.field());
        for (i, wi) in w.iter().enumerate() {
            check = &check + &apply_theta(wi, i);
        }
        if &check != f {
            return Err(Error::OracleDisagreement("taylor witness does not reproduce f".into()));
        }
        report.witness = Some(w);
    }
    Ok(report)
}

/// Witness degree bounds `(D_z, D_u)` under which the bounded search is a
/// complete decision procedure for `im Theta`: the Taylor witness has
/// `deg_u <= deg_u f - 1` and `deg_z <= deg_z f + deg_u f`.
pub fn theta_witness_bounds(f: &Poly) -> (u32, u32) {
    let du = f.deg_u().unwrap_or(0);
    let dz = f.deg_z().unwrap_or(0);
    (dz + du, du.saturating_sub(1))
}

/// All monomials `z^beta u^gamma` with `|beta| <= dz`, `|gamma| <= du`.
pub fn bounded_monomials(nvars: usize, dz: u32, du: u32) -> Vec<Monomial> {
    let zs = MultiIndex::up_to_degree(nvars, dz);
    let us = MultiIndex::up_to_degree(nvars, du);
    let mut out = Vec::with_capacity(zs.len() * us.len());
    for z in &zs {
        for u in &us {
            out.push(Monomial::new(&z.0, &u.0));
        }
    }
    out
}

/// Looks for `w_i` with `f = sum_i ops[i](w_i)`, `deg_z w_i <= dz`,
/// `deg_u w_i <= du`, by exact elimination. `None` means no witness inside
/// the bounds, which proves non-membership only when the bounds are known
/// to be sufficient.
pub fn member_bruteforce(
    f: &Poly,
    ops: &[FirstOrderOp],
    dz: u32,
    du: u32,
) -> Result<Option<Vec<Poly>>> {
    let n = f.nvars();
    let field = f.field();
    for op in ops {
        f.same_context(op.zero_order())?;
    }
    if f.is_zero() {
        return Ok(Some(vec![Poly::zero(n, field); ops.len()]));
    }
    let basis = bounded_monomials(n, dz, du);
    let mut rows: HashMap<Monomial, usize> = HashMap::new();
    let mut row_of = |m: &Monomial| -> usize {
        let next = rows.len();
        *rows.entry(m.clone()).or_insert(next)
    };
    let mut columns: Vec<SparseRow> = Vec::with_capacity(basis.len() * ops.len());
    for op in ops {
        for m in &basis {
            let img = op.apply(&Poly::from_terms(n, field, [(m.clone(), Coeff::one(field))]))?;
            columns.push(img.terms().map(|(t, c)| (row_of(t), c.clone())).collect());
        }
    }
    let rhs: SparseRow = f.terms().map(|(t, c)| (row_of(t), c.clone())).collect();
    let Some(x) = solve_sparse(field, &columns, &rhs) else {
        return Ok(None);
    };
    let mut witness = Vec::with_capacity(ops.len());
    for k in 0..ops.len() {
        let chunk = &x[k * basis.len()..(k + 1) * basis.len()];
        witness.push(Poly::from_terms(
            n,
            field,
            basis.iter().cloned().zip(chunk.iter().cloned()),
        ));
    }
    let mut check = Poly::zero(n, field);
    for (op, w) in ops.iter().zip(&witness) {
        check = &check + &op.apply(w)?;
    }
    if &check != f {
        return Err(Error::OracleDisagreement("linear solve produced a bad witness".into()));
    }
    Ok(Some(witness))
}

/// Codimension of `sum_i Phi_i(K[z]_{<= D - deg q + 1})` inside
/// `K[z]_{<= D}` for `Phi_i = d_i - d_i(q)`, `i = 1..n`.
pub fn codim_truncated(q: &Poly, degree: u32) -> Result<usize> {
    q.field().require_char_zero()?;
    if !q.is_z_pure() {
        return Err(Error::NonZPure);
    }
    let n = q.nvars();
    let field = q.field();
    let dq = q.degree().unwrap_or(0);
    let target = MultiIndex::up_to_degree(n, degree);
    let index: HashMap<Vec<u32>, usize> =
        target.iter().enumerate().map(|(k, a)| (a.0.clone(), k)).collect();
    let ops = FirstOrderOp::gradient_family(q, n);
    let mut ech = SparseEchelon::new(field);
    if degree + 1 >= dq {
        let zero = vec![0; n];
        for beta in MultiIndex::up_to_degree(n, degree + 1 - dq) {
            let src = Poly::monomial(n, &beta.0, &zero, Coeff::one(field));
            for op in &ops {
                let img = op.apply(&src)?;
                let row: SparseRow = img
                    .terms()
                    .map(|(m, c)| (index[m.z()], c.clone()))
                    .collect();
                ech.insert(row);
            }
        }
    }
    Ok(target.len() - ech.rank())
}

/// Codimension at each truncation degree of a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodimSweep {
    pub values: Vec<(u32, usize)>,
}

impl CodimSweep {
    /// The common value when the last two sweep entries agree; `None` means
    /// the sweep is inconclusive (possibly infinite codimension).
    pub fn stable_value(&self) -> Option<usize> {
        match self.values.as_slice() {
            [.., (_, a), (_, b)] if a == b => Some(*b),
            _ => None,
        }
    }
}

pub fn codim_sweep(q: &Poly, degrees: &[u32]) -> Result<CodimSweep> {
    let values = degrees
        .iter()
        .map(|&d| codim_truncated(q, d).map(|c| (d, c)))
        .collect::<Result<_>>()?;
    Ok(CodimSweep { values })
}
