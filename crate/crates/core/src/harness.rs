//! Finite instance checks of the vanishing, image and Jacobian conjectures:
//! Hessians and nilpotency, `Lambda^m(P^m)` tables, the power sums
//! `sum_{|alpha|=m} d^alpha(H^alpha)/alpha!`, and formal inversion of
//! `F = z - H` through the Abhyankar-Gurjar series.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldTag;
use crate::image::member_theta;
use crate::monomial::MultiIndex;
use crate::poly::{Block, Poly};
use crate::weyl::ConstCoeffOp;

/// Square matrix with polynomial entries, row major.
pub type PolyMatrix = Vec<Vec<Poly>>;

/// A polynomial self-map `z -> (F_1(z), ..., F_n(z))` with pure-z components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(components: Vec<Poly>) -> Result<PolyMap> {
        let Some(first) = components.first() else {
            return Err(Error::Invalid("a map needs at least one component".into()));
        };
        if components.len() != first.nvars() {
            return Err(Error::MismatchedContext(format!(
                "{} components in {} variables",
                components.len(),
                first.nvars()
            )));
        }
        for c in &components {
            c.same_context(first)?;
            if !c.is_z_pure() {
                return Err(Error::NonZPure);
            }
        }
        Ok(PolyMap { components })
    }

    pub fn identity(nvars: usize, field: FieldTag) -> PolyMap {
        PolyMap { components: (0..nvars).map(|i| Poly::z(nvars, field, i)).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn field(&self) -> FieldTag {
        self.components[0].field()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// `z - H`.
    pub fn identity_minus(&self) -> PolyMap {
        let id = PolyMap::identity(self.nvars(), self.field());
        PolyMap {
            components: id.components.iter().zip(&self.components).map(|(z, h)| z - h).collect(),
        }
    }

    /// `self(other(z))`.
    pub fn compose(&self, other: &PolyMap) -> Result<PolyMap> {
        Ok(PolyMap {
            components: self
                .components
                .iter()
                .map(|c| c.substitute(&other.components))
                .collect::<Result<_>>()?,
        })
    }

    pub fn truncate(&self, degree: u32) -> PolyMap {
        PolyMap { components: self.components.iter().map(|c| c.truncate(degree)).collect() }
    }

    /// Entries `d F_i / d z_j`.
    pub fn jacobian_matrix(&self) -> PolyMatrix {
        self.components
            .iter()
            .map(|f| (0..self.nvars()).map(|j| f.dz(j)).collect())
            .collect()
    }

    pub fn jacobian_determinant(&self) -> Poly {
        determinant(&self.jacobian_matrix())
    }

    /// The common degree `d` when every nonzero component is homogeneous of
    /// degree `d`; `Ok(None)` for the zero map.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut deg = None;
        for c in &self.components {
            match c.homogeneous_degree()? {
                None => {}
                Some(d) => match deg {
                    None => deg = Some(d),
                    Some(e) if e == d => {}
                    Some(_) => return Err(Error::NotHomogeneous),
                },
            }
        }
        Ok(deg)
    }

    /// `H^alpha = prod_i H_i^alpha_i`.
    pub fn power(&self, alpha: &MultiIndex) -> Poly {
        let mut out = Poly::one(self.nvars(), self.field());
        for (h, &e) in self.components.iter().zip(&alpha.0) {
            if e > 0 {
                out = &out * &h.pow(e);
            }
        }
        out
    }

    /// `sum_i u_i H_i`.
    pub fn symbol_pairing(&self) -> Poly {
        let mut f = Poly::zero(self.nvars(), self.field());
        for (i, h) in self.components.iter().enumerate() {
            f = &f + &(&Poly::u(self.nvars(), self.field(), i) * h);
        }
        f
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &PolyMatrix) -> Poly {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    match n {
        0 => panic!("empty matrix"),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut det = Poly::zero(m[0][0].nvars(), m[0][0].field());
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: PolyMatrix = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][j] * &determinant(&minor);
                det = if j % 2 == 0 { &det + &term } else { &det - &term };
            }
            det
        }
    }
}

pub fn matrix_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Poly::zero(a[0][0].nvars(), a[0][0].field());
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(&a[i][k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Second partials `d^2 P / dz_i dz_j`.
pub fn hessian_matrix(p: &Poly) -> PolyMatrix {
    let n = p.nvars();
    let first: Vec<Poly> = (0..n).map(|i| p.dz(i)).collect();
    first.iter().map(|d| (0..n).map(|j| d.dz(j)).collect()).collect()
}

/// `M^n = 0` for an `n x n` polynomial matrix.
pub fn is_nilpotent_matrix(m: &PolyMatrix) -> bool {
    let n = m.len();
    if n == 0 {
        return true;
    }
    let mut power = m.clone();
    for _ in 1..n {
        if power.iter().flatten().all(Poly::is_zero) {
            return true;
        }
        power = matrix_mul(&power, m);
    }
    power.iter().flatten().all(Poly::is_zero)
}

/// Evidence table for one instance: a hypothesis and a conclusion sequence
/// indexed by `m = 1..M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub instance: serde_json::Value,
    pub hypothesis: Vec<bool>,
    pub conclusion: Vec<bool>,
    /// Least `m0` with the conclusion holding for every tested `m >= m0`.
    pub threshold: Option<u32>,
    pub timings_ms: Vec<u64>,
}

impl InstanceReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis.iter().all(|&b| b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Least `m0` (1-based) such that every entry from `m0` on is true.
pub fn stable_threshold(pattern: &[bool]) -> Option<u32> {
    let last_false = pattern.iter().rposition(|&b| !b);
    match last_false {
        None if pattern.is_empty() => None,
        None => Some(1),
        Some(k) if k + 1 == pattern.len() => None,
        Some(k) => Some(k as u32 + 2),
    }
}

/// `Lambda^m(P^m) = 0` and `Lambda^m(P^m Q) = 0` for `m = 1..max_power`,
/// each entry cross-checked against membership of `Lambda(u)^m P^m (Q)` in
/// the image of `Theta`.
pub fn vc_check(lambda: &ConstCoeffOp, p: &Poly, q: &Poly, max_power: u32) -> Result<InstanceReport> {
    p.field().require_char_zero()?;
    p.same_context(lambda.symbol())?;
    p.same_context(q)?;
    if !p.is_z_pure() || !q.is_z_pure() {
        return Err(Error::NonZPure);
    }
    let mut hypothesis = Vec::new();
    let mut conclusion = Vec::new();
    let mut timings_ms = Vec::new();
    let mut pm = Poly::one(p.nvars(), p.field());
    let mut sym_m = Poly::one(p.nvars(), p.field());
    for m in 1..=max_power {
        let start = Instant::now();
        pm = &pm * p;
        sym_m = &sym_m * lambda.symbol();
        let pmq = &pm * q;
        let h = lambda.apply_power(&pm, m)?.is_zero();
        let c = lambda.apply_power(&pmq, m)?.is_zero();
        let hm = member_theta(&(&sym_m * &pm))?.is_member;
        let cm = member_theta(&(&sym_m * &pmq))?.is_member;
        if h != hm || c != cm {
            return Err(Error::OracleDisagreement(format!(
                "Lambda^m(P^m Q) vanishing disagrees with membership at m = {m}"
            )));
        }
        hypothesis.push(h);
        conclusion.push(c);
        timings_ms.push(start.elapsed().as_millis() as u64);
    }
    Ok(InstanceReport {
        instance: serde_json::json!({
            "kind": "vc",
            "nvars": p.nvars(),
            "field": p.field().to_string(),
            "lambda": lambda.symbol().to_string(),
            "P": p.to_string(),
            "Q": q.to_string(),
            "max_power": max_power,
        }),
        threshold: stable_threshold(&conclusion),
        hypothesis,
        conclusion,
        timings_ms,
    })
}

/// `sum_{|alpha| = m} (1/alpha!) d^alpha(H^alpha * g)`.
pub fn ag_term(h: &PolyMap, g: &Poly, m: u32) -> Poly {
    let field = h.field();
    let mut out = Poly::zero(h.nvars(), field);
    for alpha in MultiIndex::with_degree(h.nvars(), m) {
        let ha = h.power(&alpha);
        if ha.is_zero() {
            continue;
        }
        let inv = alpha.factorial_in(field).inverse().expect("char 0");
        out = &out + &(&ha * g).derivative_multi(Block::Z, &alpha).scale(&inv);
    }
    out
}

/// The power sums `sum_{|alpha| = m} (1/alpha!) d^alpha(H^alpha)` for
/// `m = 1..max_power`. All vanish exactly when `j(z - H) = 1`.
pub fn jc_power_sums(h: &PolyMap, max_power: u32) -> Result<Vec<Poly>> {
    h.field().require_char_zero()?;
    let one = Poly::one(h.nvars(), h.field());
    Ok((1..=max_power).map(|m| ag_term(h, &one, m)).collect())
}

/// `g(G)` truncated to total degree `degree`, where `G` is the formal
/// inverse of `F = z - H`, from
/// `sum_m sum_{|alpha|=m} (1/alpha!) d^alpha(H^alpha j(F) g)`.
/// `H` must be homogeneous of degree at least 2 with `j(F) = 1`.
pub fn ag_inverse_poly(h: &PolyMap, g: &Poly, degree: u32) -> Result<Poly> {
    h.field().require_char_zero()?;
    g.same_context(&h.components[0])?;
    let Some(lowest) = g.min_degree() else {
        return Ok(g.clone());
    };
    let d = match h.homogeneous_degree()? {
        None => return Ok(g.truncate(degree)),
        Some(d) if d < 2 => return Err(Error::NotHomogeneous),
        Some(d) => d,
    };
    let jf = h.identity_minus().jacobian_determinant();
    if jf != Poly::one(h.nvars(), h.field()) {
        return Err(Error::NotUnimodular);
    }
    let operand = &jf * g;
    let mut out = Poly::zero(h.nvars(), h.field());
    // the m-th term has degrees >= (d - 1) m + lowest
    let mut m = 0;
    while (d - 1) * m + lowest <= degree {
        out = &out + &ag_term(h, &operand, m);
        m += 1;
    }
    Ok(out.truncate(degree))
}

/// [`ag_inverse_poly`] applied to every component of `g`; with `g = z` this
/// is the truncated formal inverse `G` itself.
pub fn ag_inverse(h: &PolyMap, g: &PolyMap, degree: u32) -> Result<PolyMap> {
    Ok(PolyMap {
        components: g
            .components
            .iter()
            .map(|gi| ag_inverse_poly(h, gi, degree))
            .collect::<Result<_>>()?,
    })
}

/// Membership table for `f^m` and `f^m g` in the image of `Theta`.
pub fn ic_instance_check(f: &Poly, g: &Poly, max_power: u32) -> Result<InstanceReport> {
    f.field().require_char_zero()?;
    f.same_context(g)?;
    let mut hypothesis = Vec::new();
    let mut conclusion = Vec::new();
    let mut timings_ms = Vec::new();
    let mut fm = Poly::one(f.nvars(), f.field());
    for _ in 1..=max_power {
        let start = Instant::now();
        fm = &fm * f;
        hypothesis.push(member_theta(&fm)?.is_member);
        conclusion.push(member_theta(&(&fm * g))?.is_member);
        timings_ms.push(start.elapsed().as_millis() as u64);
    }
    Ok(InstanceReport {
        instance: serde_json::json!({
            "kind": "ic",
            "nvars": f.nvars(),
            "field": f.field().to_string(),
            "f": f.to_string(),
            "g": g.to_string(),
            "max_power": max_power,
        }),
        threshold: stable_threshold(&conclusion),
        hypothesis,
        conclusion,
        timings_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    const Q: FieldTag = FieldTag::Rational;
    const G: FieldTag = FieldTag::Gaussian;

    fn p(s: &str, n: usize) -> Poly {
        parse_poly(s, n, Q).unwrap()
    }

    fn map(parts: &[&str]) -> PolyMap {
        PolyMap::new(parts.iter().map(|s| p(s, parts.len())).collect()).unwrap()
    }

    #[test]
    fn hessians() {
        assert_eq!(hessian_matrix(&p("z1^2", 1)), vec![vec![p("2", 1)]]);
        assert_eq!(
            hessian_matrix(&p("z1*z2", 2)),
            vec![vec![p("0", 2), p("1", 2)], vec![p("1", 2), p("0", 2)]]
        );
        let pg = parse_poly("(z1 + i*z2)^2", 2, G).unwrap();
        let e = |s: &str| parse_poly(s, 2, G).unwrap();
        assert_eq!(hessian_matrix(&pg), vec![vec![e("2"), e("2*i")], vec![e("2*i"), e("-2")]]);
    }

    #[test]
    fn nilpotency() {
        let pg = parse_poly("(z1 + i*z2)^4", 2, G).unwrap();
        assert!(is_nilpotent_matrix(&hessian_matrix(&pg)));
        assert!(is_nilpotent_matrix(&map(&["z2^3", "0"]).jacobian_matrix()));
        let id = PolyMap::identity(2, Q).jacobian_matrix();
        assert!(!is_nilpotent_matrix(&id));
    }

    #[test]
    fn thresholds() {
        assert_eq!(stable_threshold(&[true, true]), Some(1));
        assert_eq!(stable_threshold(&[false, true, true]), Some(2));
        assert_eq!(stable_threshold(&[true, false]), None);
        assert_eq!(stable_threshold(&[]), None);
    }

    #[test]
    fn vc_instances() {
        let r = vc_check(&ConstCoeffOp::new(p("u1^2", 2)).unwrap(), &p("z2", 2), &p("z1", 2), 4).unwrap();
        assert_eq!(r.hypothesis, vec![true; 4]);
        assert_eq!(r.conclusion, vec![true; 4]);
        assert_eq!(r.threshold, Some(1));

        let pg = parse_poly("(z1 + i*z2)^4", 2, G).unwrap();
        let r = vc_check(&ConstCoeffOp::laplacian(2, G), &pg, &pg, 4).unwrap();
        assert!(r.hypothesis_holds());

        let r = vc_check(&ConstCoeffOp::new(p("u1", 1)).unwrap(), &p("z1", 1), &p("1", 1), 2).unwrap();
        assert!(!r.hypothesis[0]);
        assert!(!r.hypothesis_holds());
    }

    #[test]
    fn power_sums() {
        let sums = jc_power_sums(&map(&["z2^3", "0"]), 3).unwrap();
        assert!(sums.iter().all(Poly::is_zero));
        assert_eq!(map(&["z2^3", "0"]).identity_minus().jacobian_determinant(), p("1", 2));

        let h = map(&["z1^2", "0"]);
        assert_eq!(jc_power_sums(&h, 1).unwrap()[0], p("2*z1", 2));
        assert_eq!(h.identity_minus().jacobian_determinant(), p("1 - 2*z1", 2));
        assert!(jc_power_sums(&map(&["0", "0"]), 3).unwrap().iter().all(Poly::is_zero));
    }

    #[test]
    fn inversion() {
        let h = map(&["z2^3", "0"]);
        let g = ag_inverse(&h, &PolyMap::identity(2, Q), 9).unwrap();
        assert_eq!(g, map(&["z1 + z2^3", "z2"]));
        assert_eq!(h.identity_minus().compose(&g).unwrap(), PolyMap::identity(2, Q));

        let zero = map(&["0", "0"]);
        assert_eq!(ag_inverse(&zero, &PolyMap::identity(2, Q), 5).unwrap(), PolyMap::identity(2, Q));

        assert_eq!(ag_inverse(&map(&["z1^2", "0"]), &PolyMap::identity(2, Q), 5), Err(Error::NotUnimodular));
        assert_eq!(ag_inverse(&map(&["z2^3 + z2^2", "0"]), &PolyMap::identity(2, Q), 5), Err(Error::NotHomogeneous));
        assert_eq!(ag_inverse(&map(&["z2", "0"]), &PolyMap::identity(2, Q), 5), Err(Error::NotHomogeneous));
    }

    #[test]
    fn ic_instances() {
        let h = map(&["z2^3", "0"]);
        let r = ic_instance_check(&h.symbol_pairing(), &p("z1", 2), 4).unwrap();
        assert!(r.hypothesis_holds());

        let pg = parse_poly("(z1 + i*z2)^4", 2, G).unwrap();
        let f = &parse_poly("u1^2 + u2^2", 2, G).unwrap() * &pg;
        let r = ic_instance_check(&f, &pg, 3).unwrap();
        assert!(r.hypothesis_holds());

        let r = ic_instance_check(&p("1", 1), &p("z1", 1), 3).unwrap();
        assert_eq!(r.hypothesis, vec![false; 3]);
        let json = r.to_json();
        assert!(json.contains("\"hypothesis\":[false,false,false]"));
        assert!(json.contains("\"threshold\":"));
    }
}
