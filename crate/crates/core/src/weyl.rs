//! First-order differential operators `a_1(z) d_1 + ... + a_n(z) d_n + h`
//! acting on `K[u, z]` (derivatives only ever act on the z block), constant
//! coefficient operators `Lambda(d)`, commutators, potentials and the
//! reduction of commuting families with constant leading coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Coeff, FieldTag};
use crate::json::PolyJson;
use crate::linalg::{Matrix, SparseEchelon, SparseRow};
use crate::monomial::Monomial;
use crate::poly::{Block, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOrderOp {
    leading: Vec<Poly>,
    zero_order: Poly,
}

impl FirstOrderOp {
    /// `leading[i]` multiplies `d/dz_{i+1}`; leading coefficients must be
    /// pure-z polynomials. The zero-order part may involve `u`.
    pub fn new(leading: Vec<Poly>, zero_order: Poly) -> Result<FirstOrderOp> {
        let n = zero_order.nvars();
        if leading.len() != n {
            return Err(Error::MismatchedContext(format!(
                "{} leading coefficients for {n} variables",
                leading.len()
            )));
        }
        for a in &leading {
            a.same_context(&zero_order)?;
            if !a.is_z_pure() {
                return Err(Error::NonZPure);
            }
        }
        Ok(FirstOrderOp { leading, zero_order })
    }

    /// `d/dz_{i+1}`.
    pub fn derivation(nvars: usize, field: FieldTag, i: usize) -> FirstOrderOp {
        let mut leading = vec![Poly::zero(nvars, field); nvars];
        leading[i] = Poly::one(nvars, field);
        FirstOrderOp { leading, zero_order: Poly::zero(nvars, field) }
    }

    pub fn multiplication(h: Poly) -> FirstOrderOp {
        FirstOrderOp { leading: vec![Poly::zero(h.nvars(), h.field()); h.nvars()], zero_order: h }
    }

    /// `sum_i c_i d_i + h` with constant `c`.
    pub fn with_constant_leading(c: &[Coeff], h: Poly) -> Result<FirstOrderOp> {
        let n = h.nvars();
        let leading = c.iter().map(|ci| Poly::constant(n, ci.clone())).collect();
        FirstOrderOp::new(leading, h)
    }

    /// `Theta_i = u_i - d/dz_i`.
    pub fn theta(nvars: usize, field: FieldTag, i: usize) -> FirstOrderOp {
        let mut leading = vec![Poly::zero(nvars, field); nvars];
        leading[i] = Poly::from_i64(nvars, field, -1);
        FirstOrderOp { leading, zero_order: Poly::u(nvars, field, i) }
    }

    pub fn theta_family(nvars: usize, field: FieldTag) -> Vec<FirstOrderOp> {
        (0..nvars).map(|i| FirstOrderOp::theta(nvars, field, i)).collect()
    }

    /// `d_i - d_i(q)` for `i < k`.
    pub fn gradient_family(q: &Poly, k: usize) -> Vec<FirstOrderOp> {
        (0..k)
            .map(|i| {
                let mut op = FirstOrderOp::derivation(q.nvars(), q.field(), i);
                op.zero_order = -q.dz(i);
                op
            })
            .collect()
    }

    pub fn nvars(&self) -> usize {
        self.zero_order.nvars()
    }

    pub fn field(&self) -> FieldTag {
        self.zero_order.field()
    }

    pub fn leading(&self) -> &[Poly] {
        &self.leading
    }

    pub fn zero_order(&self) -> &Poly {
        &self.zero_order
    }

    pub fn is_constant_leading(&self) -> bool {
        self.leading.iter().all(Poly::is_constant)
    }

    pub fn is_zero_order(&self) -> bool {
        self.leading.iter().all(Poly::is_zero)
    }

    /// The constant leading vector, if the leading part is constant.
    pub fn leading_vector(&self) -> Option<Vec<Coeff>> {
        self.is_constant_leading()
            .then(|| self.leading.iter().map(Poly::constant_term).collect())
    }

    /// `sum_i a_i d_i f + h f`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        f.same_context(&self.zero_order)?;
        let mut out = &self.zero_order * f;
        for (i, a) in self.leading.iter().enumerate() {
            if !a.is_zero() {
                out = &out + &(a * &f.dz(i));
            }
        }
        Ok(out)
    }
}

/// `[A, B]` for constant-leading `A = u.d + h_A`, `B = v.d + h_B`: the
/// multiplication operator by `u.grad(h_B) - v.grad(h_A)`.
pub fn commutator(a: &FirstOrderOp, b: &FirstOrderOp) -> Result<FirstOrderOp> {
    a.zero_order.same_context(&b.zero_order)?;
    let (Some(u), Some(v)) = (a.leading_vector(), b.leading_vector()) else {
        return Err(Error::NonConstantLeading);
    };
    let mut h = Poly::zero(a.nvars(), a.field());
    for i in 0..a.nvars() {
        if !u[i].is_zero() {
            h = &h + &b.zero_order.dz(i).scale(&u[i]);
        }
        if !v[i].is_zero() {
            h = &h - &a.zero_order.dz(i).scale(&v[i]);
        }
    }
    Ok(FirstOrderOp::multiplication(h))
}

/// First pair `(i, j)`, `i < j`, whose commutator is nonzero.
pub fn find_noncommuting_pair(ops: &[FirstOrderOp]) -> Result<Option<(usize, usize)>> {
    if ops.iter().any(|op| !op.is_constant_leading()) {
        return Err(Error::NonConstantLeading);
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if !commutator(&ops[i], &ops[j])?.zero_order.is_zero() {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_commuting_family(ops: &[FirstOrderOp]) -> Result<bool> {
    Ok(find_noncommuting_pair(ops)?.is_none())
}

/// Constant-coefficient operator `Lambda(d)` given by its symbol in the `u`
/// variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstCoeffOp {
    symbol: Poly,
}

impl ConstCoeffOp {
    pub fn new(symbol: Poly) -> Result<ConstCoeffOp> {
        if !symbol.is_u_pure() {
            return Err(Error::Invalid("operator symbol must only involve u variables".into()));
        }
        Ok(ConstCoeffOp { symbol })
    }

    /// The Laplacian `d_1^2 + ... + d_n^2`.
    pub fn laplacian(nvars: usize, field: FieldTag) -> ConstCoeffOp {
        let mut s = Poly::zero(nvars, field);
        for i in 0..nvars {
            s = &s + &Poly::u(nvars, field, i).pow(2);
        }
        ConstCoeffOp { symbol: s }
    }

    pub fn symbol(&self) -> &Poly {
        &self.symbol
    }

    /// `Lambda(d) f`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        f.same_context(&self.symbol)?;
        Ok(apply_symbol(&self.symbol, f))
    }

    /// `Lambda(d)^m f` by `m` successive applications.
    pub fn apply_power(&self, f: &Poly, m: u32) -> Result<Poly> {
        f.same_context(&self.symbol)?;
        let mut g = f.clone();
        for _ in 0..m {
            if g.is_zero() {
                break;
            }
            g = apply_symbol(&self.symbol, &g);
        }
        Ok(g)
    }

    /// `Lambda(d)^m f` by applying the symbol `Lambda^m` once.
    pub fn apply_power_via_symbol(&self, f: &Poly, m: u32) -> Result<Poly> {
        f.same_context(&self.symbol)?;
        Ok(apply_symbol(&self.symbol.pow(m), f))
    }
}

fn apply_symbol(symbol: &Poly, f: &Poly) -> Poly {
    let mut out = Poly::zero(f.nvars(), f.field());
    for (m, c) in symbol.terms() {
        let d = f.derivative_multi(Block::Z, &m.u_index());
        out = &out + &d.scale(c);
    }
    out
}

/// A primitive `q` with `d_i q = h_i` for `i < k = h.len()`, normalized by
/// `q(0, z'') = 0`, from the radial homotopy formula
/// `q = sum_i int_0^1 z_i h_i(t z', z'') dt` in the first `k` variables.
pub fn recover_potential(h: &[Poly]) -> Result<Poly> {
    let Some(first) = h.first() else {
        return Err(Error::Invalid("empty gradient list".into()));
    };
    let n = first.nvars();
    let field = first.field();
    field.require_char_zero()?;
    let k = h.len();
    if k > n {
        return Err(Error::Invalid(format!("{k} components for {n} variables")));
    }
    for hi in h {
        hi.same_context(first)?;
        if !hi.is_z_pure() {
            return Err(Error::NonZPure);
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if h[i].dz(j) != h[j].dz(i) {
                return Err(Error::NotIntegrable { i, j });
            }
        }
    }
    let mut q = Poly::zero(n, field);
    for (i, hi) in h.iter().enumerate() {
        q = &q
            + &hi.map_terms(|m, c| {
                let radial: u32 = m.z()[..k].iter().sum();
                let mut z = m.z().to_vec();
                z[i] += 1;
                let scale = Coeff::from_ratio(field, 1, radial as i64 + 1).expect("char 0");
                Some((Monomial::new(&z, m.u()), c * &scale))
            });
    }
    Ok(q)
}

/// The normal form of a commuting constant-leading family: in coordinates
/// `w = coord_change * z` the family has the same image as
/// `{d_{w_j} - d_{w_j}(q) : j < k}` together with multiplication by the
/// generators, which do not involve `w_1..w_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedFamily {
    pub k: usize,
    /// `M` with `M b_j = e_j` for the chosen basis `b_j` of the leading span.
    pub coord_change: Matrix,
    /// `P = M^-1`; polynomials move to the new coordinates by `f(P w)`.
    pub substitution: Matrix,
    pub q: Poly,
    pub zero_order_gens: Vec<Poly>,
}

impl ReducedFamily {
    /// Rewrites a polynomial in the new coordinates.
    pub fn transform(&self, f: &Poly) -> Result<Poly> {
        f.substitute_linear(&self.substitution, Block::Z)
    }

    /// The operators `d_{w_j} - d_{w_j}(q)` followed by the generators.
    pub fn operators(&self) -> Vec<FirstOrderOp> {
        let mut ops = FirstOrderOp::gradient_family(&self.q, self.k);
        ops.extend(self.zero_order_gens.iter().cloned().map(FirstOrderOp::multiplication));
        ops
    }
}

/// Brings a commuting family with constant leading coefficients to the form
/// of [`ReducedFamily`].
pub fn reduce_family(ops: &[FirstOrderOp]) -> Result<ReducedFamily> {
    let Some(first) = ops.first() else {
        return Err(Error::AllZeroOrder);
    };
    let n = first.nvars();
    let field = first.field();
    field.require_char_zero()?;
    for op in ops {
        op.zero_order.same_context(&first.zero_order)?;
        if !op.zero_order.is_z_pure() {
            return Err(Error::NonZPure);
        }
    }
    if let Some((i, j)) = find_noncommuting_pair(ops)? {
        return Err(Error::NonCommuting { i, j });
    }
    let vectors: Vec<Vec<Coeff>> =
        ops.iter().map(|op| op.leading_vector().expect("constant leading")).collect();

    // basis of the leading span, chosen greedily among the operators
    let as_row = |v: &[Coeff]| -> SparseRow {
        v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
    };
    let mut ech = SparseEchelon::new(field);
    let mut basis_ops = Vec::new();
    for (r, v) in vectors.iter().enumerate() {
        if ech.insert(as_row(v)) {
            basis_ops.push(r);
        }
    }
    let k = basis_ops.len();
    if k == 0 {
        return Err(Error::AllZeroOrder);
    }
    let mut columns: Vec<Vec<Coeff>> = basis_ops.iter().map(|&r| vectors[r].clone()).collect();
    for i in 0..n {
        if columns.len() == n {
            break;
        }
        let mut e = vec![Coeff::zero(field); n];
        e[i] = Coeff::one(field);
        if ech.insert(as_row(&e)) {
            columns.push(e);
        }
    }
    let mut p = Matrix::zeros(field, n, n);
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col.iter().enumerate() {
            p.set(i, j, c.clone());
        }
    }
    let m = p.inverse()?;

    let moved: Vec<Poly> = ops
        .iter()
        .map(|op| op.zero_order.substitute_linear(&p, Block::Z))
        .collect::<Result<_>>()?;
    let basis_h: Vec<&Poly> = basis_ops.iter().map(|&r| &moved[r]).collect();

    let mut gens = Vec::new();
    for (r, v) in vectors.iter().enumerate() {
        if basis_ops.contains(&r) {
            continue;
        }
        let lambda = m.mul_vec(v);
        debug_assert!(lambda[k..].iter().all(Coeff::is_zero));
        let mut g = moved[r].clone();
        for (j, h) in basis_h.iter().enumerate() {
            if !lambda[j].is_zero() {
                g = &g - &h.scale(&lambda[j]);
            }
        }
        if !g.is_zero() {
            gens.push(g);
        }
    }
    for g in &gens {
        for j in 0..k {
            if !g.dz(j).is_zero() {
                return Err(Error::Invalid(format!(
                    "generator depends on reduced variable w{}",
                    j + 1
                )));
            }
        }
    }

    let neg: Vec<Poly> = basis_h.iter().map(|h| -*h).collect();
    let q = recover_potential(&neg)?;
    Ok(ReducedFamily { k, coord_change: m, substitution: p, q, zero_order_gens: gens })
}

/// JSON form `{"leading": [<poly>...], "zero_order": <poly>}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpJson {
    pub leading: Vec<PolyJson>,
    pub zero_order: PolyJson,
}

impl OpJson {
    pub fn from_op(op: &FirstOrderOp) -> OpJson {
        OpJson {
            leading: op.leading.iter().map(PolyJson::from_poly).collect(),
            zero_order: PolyJson::from_poly(&op.zero_order),
        }
    }

    pub fn to_op(&self) -> Result<FirstOrderOp> {
        let leading = self.leading.iter().map(PolyJson::to_poly).collect::<Result<_>>()?;
        FirstOrderOp::new(leading, self.zero_order.to_poly()?)
    }
}

/// JSON form `{"symbol": <poly in u>}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaJson {
    pub symbol: PolyJson,
}

impl LambdaJson {
    pub fn from_op(op: &ConstCoeffOp) -> LambdaJson {
        LambdaJson { symbol: PolyJson::from_poly(&op.symbol) }
    }

    pub fn to_op(&self) -> Result<ConstCoeffOp> {
        ConstCoeffOp::new(self.symbol.to_poly()?)
    }
}
