//! Two one-variable families where the image is not closed under the
//! "powers in the image imply products eventually in the image" pattern:
//!
//! * `Phi = t d/dt - 1` on `Q[t]` with `f = 1 + t^2`, `g = t`
//!   (non-constant leading coefficient);
//! * `d/dx` on `F_p[x]` with `f = 1`, `g = x^(p-1)` (positive characteristic).
//!
//! Both tables are decided by [`member_bruteforce`] with bounds that make a
//! missing witness conclusive.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Coeff, FieldTag};
use crate::image::member_bruteforce;
use crate::poly::Poly;
use crate::weyl::FirstOrderOp;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerRow {
    pub m: u32,
    pub power_member: bool,
    pub product_member: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorkedExample {
    pub id: String,
    pub field: String,
    pub operator: String,
    pub f: String,
    pub g: String,
    pub rows: Vec<PowerRow>,
}

impl WorkedExample {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "example {}", self.id);
        let _ = writeln!(s, "field: {}", self.field);
        let _ = writeln!(s, "operator: {}", self.operator);
        let _ = writeln!(s, "f = {}", self.f);
        let _ = writeln!(s, "g = {}", self.g);
        for r in &self.rows {
            let _ = writeln!(
                s,
                "m = {}: f^m {}, g*f^m {}",
                r.m,
                membership_word(r.power_member),
                membership_word(r.product_member)
            );
        }
        s
    }
}

fn membership_word(b: bool) -> &'static str {
    if b {
        "in image"
    } else {
        "not in image"
    }
}

fn table(op: &FirstOrderOp, f: &Poly, g: &Poly, max_power: u32, bound: impl Fn(&Poly) -> u32) -> Result<Vec<PowerRow>> {
    let ops = std::slice::from_ref(op);
    let mut rows = Vec::new();
    let mut fm = Poly::one(f.nvars(), f.field());
    for m in 1..=max_power {
        fm = &fm * f;
        let prod = g * &fm;
        rows.push(PowerRow {
            m,
            power_member: member_bruteforce(&fm, ops, bound(&fm), 0)?.is_some(),
            product_member: member_bruteforce(&prod, ops, bound(&prod), 0)?.is_some(),
        });
    }
    Ok(rows)
}

/// `t d/dt - 1` maps `t^k` to `(k - 1) t^k`, so it preserves degree and a
/// witness for a target of degree `D` never needs degree above `D`.
pub fn euler_example(max_power: u32) -> Result<WorkedExample> {
    let field = FieldTag::Rational;
    let t = Poly::z(1, field, 0);
    let op = FirstOrderOp::new(vec![t.clone()], Poly::from_i64(1, field, -1))?;
    let f = &Poly::one(1, field) + &t.pow(2);
    let rows = table(&op, &f, &t, max_power, |p| p.degree().unwrap_or(0))?;
    Ok(WorkedExample {
        id: "2.6".into(),
        field: field.to_string(),
        operator: "z1*d/dz1 - 1".into(),
        f: f.to_string(),
        g: t.to_string(),
        rows,
    })
}

/// `d/dx` over `F_p` sends each monomial to a multiple of a single
/// monomial, so no cancellation can occur and any bound above the target
/// degree is conclusive; `2p` is used.
pub fn char_p_example(p: u64, max_power: u32) -> Result<WorkedExample> {
    let field = FieldTag::prime(p)?;
    if p > 1000 {
        return Err(Error::Invalid("prime too large for the dense search".into()));
    }
    let op = FirstOrderOp::with_constant_leading(&[Coeff::one(field)], Poly::zero(1, field))?;
    let f = Poly::one(1, field);
    let g = Poly::z(1, field, 0).pow(p as u32 - 1);
    let bound = 2 * p as u32;
    let rows = table(&op, &f, &g, max_power, |_| bound)?;
    Ok(WorkedExample {
        id: "2.7".into(),
        field: field.to_string(),
        operator: "d/dz1".into(),
        f: f.to_string(),
        g: g.to_string(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_operator_table() {
        let ex = euler_example(5).unwrap();
        assert_eq!(ex.rows.len(), 5);
        assert!(ex.rows.iter().all(|r| r.power_member && !r.product_member));
        assert_eq!(ex.f, "z1^2 + 1");
    }

    #[test]
    fn positive_characteristic_table() {
        for p in [2, 3, 5, 7] {
            let ex = char_p_example(p, 3).unwrap();
            assert!(ex.rows.iter().all(|r| r.power_member && !r.product_member), "p = {p}");
        }
        assert_eq!(char_p_example(5, 1).unwrap().g, "z1^4");
        assert!(char_p_example(4, 1).is_err());
    }
}
