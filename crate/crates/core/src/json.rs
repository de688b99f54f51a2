//! JSON interchange for polynomials, Laurent polynomials and operators.
//!
//! ```json
//! {"nvars": 1, "field": "rational",
//!  "terms": [{"coeff": "12", "zexp": [2], "uexp": [0]}]}
//! ```
//!
//! Rational coefficients are `"<int>[/<uint>]"`, gaussian ones a pair
//! `["re", "im"]`, prime-field ones the residue as a decimal string.
//! Laurent polynomials omit `uexp` and may carry negative `zexp` entries.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Coeff, FieldTag};
use crate::laurent::LaurentPoly;
use crate::monomial::Monomial;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Scalar(String),
    Pair([String; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub zexp: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uexp: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub field: String,
    pub terms: Vec<TermJson>,
}

fn coeff_to_json(c: &Coeff) -> CoeffJson {
    match c {
        Coeff::Rational(q) => CoeffJson::Scalar(q.to_string()),
        Coeff::Gaussian(re, im) => CoeffJson::Pair([re.to_string(), im.to_string()]),
        Coeff::Mod { value, .. } => CoeffJson::Scalar(value.to_string()),
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Invalid(format!("malformed coefficient {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = match den {
        Some(d) if d.starts_with(|c: char| c.is_ascii_digit()) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => 1.into(),
    };
    if den == 0.into() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

fn coeff_from_json(field: FieldTag, c: &CoeffJson) -> Result<Coeff> {
    match (field, c) {
        (FieldTag::Gaussian, CoeffJson::Pair([re, im])) => {
            Ok(Coeff::gaussian(parse_rational(re)?, parse_rational(im)?))
        }
        (_, CoeffJson::Scalar(s)) => Coeff::from_rational(field, &parse_rational(s)?),
        (_, CoeffJson::Pair(_)) => Err(Error::ImaginaryInNonGaussianField),
    }
}

fn nonneg(v: &[i64], what: &str) -> Result<Vec<u32>> {
    v.iter()
        .map(|&e| {
            u32::try_from(e).map_err(|_| Error::Invalid(format!("negative or huge {what} entry {e}")))
        })
        .collect()
}

impl PolyJson {
    pub fn from_poly(p: &Poly) -> PolyJson {
        PolyJson {
            nvars: p.nvars(),
            field: p.field().to_string(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    coeff: coeff_to_json(c),
                    zexp: m.z().iter().map(|&e| e as i64).collect(),
                    uexp: Some(m.u().iter().map(|&e| e as i64).collect()),
                })
                .collect(),
        }
    }

    pub fn from_laurent(p: &LaurentPoly) -> PolyJson {
        PolyJson {
            nvars: p.nvars(),
            field: p.field().to_string(),
            terms: p
                .terms()
                .map(|(e, c)| TermJson { coeff: coeff_to_json(c), zexp: e.0.clone(), uexp: None })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<Poly> {
        let field: FieldTag = self.field.parse()?;
        let n = self.nvars;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let zero = vec![0i64; n];
            let u = t.uexp.as_deref().unwrap_or(&zero);
            if t.zexp.len() != n || u.len() != n {
                return Err(Error::Invalid(format!("exponent vectors must have length {n}")));
            }
            let m = Monomial::new(&nonneg(&t.zexp, "zexp")?, &nonneg(u, "uexp")?);
            terms.push((m, coeff_from_json(field, &t.coeff)?));
        }
        Ok(Poly::from_terms(n, field, terms))
    }

    pub fn to_laurent(&self) -> Result<LaurentPoly> {
        let field: FieldTag = self.field.parse()?;
        let n = self.nvars;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.zexp.len() != n {
                return Err(Error::Invalid(format!("exponent vectors must have length {n}")));
            }
            if t.uexp.as_ref().is_some_and(|u| u.iter().any(|&e| e != 0)) {
                return Err(Error::Invalid("laurent polynomials carry no uexp".into()));
            }
            terms.push((t.zexp.clone(), coeff_from_json(field, &t.coeff)?));
        }
        Ok(LaurentPoly::from_terms(n, field, terms))
    }
}

pub fn poly_to_json(p: &Poly) -> String {
    serde_json::to_string(&PolyJson::from_poly(p)).expect("serializable")
}

pub fn laurent_to_json(p: &LaurentPoly) -> String {
    serde_json::to_string(&PolyJson::from_laurent(p)).expect("serializable")
}

pub fn poly_from_json(src: &str) -> Result<Poly> {
    let j: PolyJson = serde_json::from_str(src).map_err(|e| Error::Invalid(e.to_string()))?;
    j.to_poly()
}

pub fn laurent_from_json(src: &str) -> Result<LaurentPoly> {
    let j: PolyJson = serde_json::from_str(src).map_err(|e| Error::Invalid(e.to_string()))?;
    j.to_laurent()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    #[test]
    fn exact_layout() {
        let p = parse_poly("12*z1^2 - 1/2*u1", 1, FieldTag::Rational).unwrap();
        assert_eq!(
            poly_to_json(&p),
            r#"{"nvars":1,"field":"rational","terms":[{"coeff":"12","zexp":[2],"uexp":[0]},{"coeff":"-1/2","zexp":[0],"uexp":[1]}]}"#
        );
        let g = parse_poly("(1 - 2*i)*z1", 1, FieldTag::Gaussian).unwrap();
        assert_eq!(
            poly_to_json(&g),
            r#"{"nvars":1,"field":"gaussian","terms":[{"coeff":["1","-2"],"zexp":[1],"uexp":[0]}]}"#
        );
        let l = LaurentPoly::from_terms(1, FieldTag::Prime(5), [(vec![-2], Coeff::from_i64(FieldTag::Prime(5), 3))]);
        assert_eq!(
            laurent_to_json(&l),
            r#"{"nvars":1,"field":"fp:5","terms":[{"coeff":"3","zexp":[-2]}]}"#
        );
        assert_eq!(laurent_from_json(&laurent_to_json(&l)).unwrap(), l);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(poly_from_json(r#"{"nvars":1,"field":"rational","terms":[{"coeff":"1","zexp":[-1],"uexp":[0]}]}"#).is_err());
        assert!(poly_from_json(r#"{"nvars":2,"field":"rational","terms":[{"coeff":"1","zexp":[1],"uexp":[0]}]}"#).is_err());
        assert_eq!(
            poly_from_json(r#"{"nvars":1,"field":"rational","terms":[{"coeff":"1/0","zexp":[1],"uexp":[0]}]}"#),
            Err(Error::ZeroDenominator)
        );
        assert_eq!(
            poly_from_json(r#"{"nvars":1,"field":"rational","terms":[{"coeff":["1","1"],"zexp":[1],"uexp":[0]}]}"#),
            Err(Error::ImaginaryInNonGaussianField)
        );
        // duplicate terms merge into canonical form
        let p = poly_from_json(r#"{"nvars":1,"field":"rational","terms":[{"coeff":"1","zexp":[1],"uexp":[0]},{"coeff":"-1","zexp":[1],"uexp":[0]}]}"#).unwrap();
        assert!(p.is_zero());
    }
}
