//! Exact coefficient fields: the rationals, the gaussian rationals `Q(i)` and
//! prime fields `F_p` with `p` fitting in a machine word.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rational,
    Gaussian,
    Prime(u64),
}

impl FieldTag {
    /// Builds `F_p`, rejecting composite or trivial moduli.
    pub fn prime(p: u64) -> Result<FieldTag> {
        if is_prime(p) {
            Ok(FieldTag::Prime(p))
        } else {
            Err(Error::InvalidField(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldTag::Rational | FieldTag::Gaussian => 0,
            FieldTag::Prime(p) => p,
        }
    }

    pub fn is_char_zero(self) -> bool {
        self.characteristic() == 0
    }

    pub fn require_char_zero(self) -> Result<()> {
        if self.is_char_zero() {
            Ok(())
        } else {
            Err(Error::PositiveCharacteristic(self))
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => f.write_str("rational"),
            FieldTag::Gaussian => f.write_str("gaussian"),
            FieldTag::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<FieldTag> {
        match s {
            "rational" => Ok(FieldTag::Rational),
            "gaussian" => Ok(FieldTag::Gaussian),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidField(s.to_string()))?;
                FieldTag::prime(p)
            }
        }
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

/// An exact field element. The variant always matches the field the value
/// lives in; arithmetic between different fields is a logic error and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rational(BigRational),
    Gaussian(BigRational, BigRational),
    Mod { value: u64, p: u64 },
}

impl Coeff {
    pub fn zero(field: FieldTag) -> Coeff {
        Coeff::from_i64(field, 0)
    }

    pub fn one(field: FieldTag) -> Coeff {
        Coeff::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldTag, n: i64) -> Coeff {
        Coeff::from_bigint(field, &BigInt::from(n))
    }

    pub fn from_bigint(field: FieldTag, n: &BigInt) -> Coeff {
        match field {
            FieldTag::Rational => Coeff::Rational(BigRational::from_integer(n.clone())),
            FieldTag::Gaussian => {
                Coeff::Gaussian(BigRational::from_integer(n.clone()), BigRational::zero())
            }
            FieldTag::Prime(p) => Coeff::Mod { value: bigint_mod(n, p), p },
        }
    }

    /// Maps a rational number into `field`. Fails when the denominator
    /// vanishes in `F_p`.
    pub fn from_rational(field: FieldTag, q: &BigRational) -> Result<Coeff> {
        match field {
            FieldTag::Rational => Ok(Coeff::Rational(q.clone())),
            FieldTag::Gaussian => Ok(Coeff::Gaussian(q.clone(), BigRational::zero())),
            FieldTag::Prime(_) => {
                let num = Coeff::from_bigint(field, q.numer());
                let den = Coeff::from_bigint(field, q.denom());
                let inv = den.inverse().ok_or(Error::ZeroDenominator)?;
                Ok(&num * &inv)
            }
        }
    }

    pub fn from_ratio(field: FieldTag, num: i64, den: i64) -> Result<Coeff> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        Coeff::from_rational(field, &BigRational::new(num.into(), den.into()))
    }

    /// The imaginary unit, available only in the gaussian field.
    pub fn imaginary_unit(field: FieldTag) -> Result<Coeff> {
        match field {
            FieldTag::Gaussian => Ok(Coeff::Gaussian(BigRational::zero(), BigRational::one())),
            _ => Err(Error::ImaginaryInNonGaussianField),
        }
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Coeff {
        Coeff::Gaussian(re, im)
    }

    pub fn field(&self) -> FieldTag {
        match self {
            Coeff::Rational(_) => FieldTag::Rational,
            Coeff::Gaussian(..) => FieldTag::Gaussian,
            Coeff::Mod { p, .. } => FieldTag::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_zero(),
            Coeff::Gaussian(re, im) => re.is_zero() && im.is_zero(),
            Coeff::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_one(),
            Coeff::Gaussian(re, im) => re.is_one() && im.is_zero(),
            Coeff::Mod { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coeff::Rational(q) => Coeff::Rational(q.recip()),
            Coeff::Gaussian(re, im) => {
                let norm = re * re + im * im;
                Coeff::Gaussian(re / &norm, -(im / &norm))
            }
            Coeff::Mod { value, p } => Coeff::Mod { value: pow_mod(*value, p - 2, *p), p: *p },
        })
    }

    pub fn pow(&self, mut exp: u32) -> Coeff {
        let mut base = self.clone();
        let mut acc = Coeff::one(self.field());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// The value as a rational, when it has one (rational field, or a
    /// gaussian with zero imaginary part).
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rational(q) => Some(q),
            Coeff::Gaussian(re, im) if im.is_zero() => Some(re),
            _ => None,
        }
    }

    /// Sign convention used by the printer: a value is "negative" when its
    /// leading nonzero real component is negative. Prime-field residues are
    /// never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_negative(),
            Coeff::Gaussian(re, im) => re.is_negative() || (re.is_zero() && im.is_negative()),
            Coeff::Mod { .. } => false,
        }
    }

    fn check_same(&self, other: &Coeff) {
        assert_eq!(
            self.field(),
            other.field(),
            "coefficient arithmetic across different fields"
        );
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational(q) => write!(f, "{q}"),
            Coeff::Gaussian(re, im) => {
                if im.is_zero() {
                    write!(f, "{re}")
                } else if re.is_zero() {
                    write_imag(f, im)
                } else {
                    write!(f, "({re} ")?;
                    if im.is_negative() {
                        f.write_str("- ")?;
                        write_imag(f, &-im)?;
                    } else {
                        f.write_str("+ ")?;
                        write_imag(f, im)?;
                    }
                    f.write_str(")")
                }
            }
            Coeff::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

fn write_imag(f: &mut fmt::Formatter<'_>, im: &BigRational) -> fmt::Result {
    if im.is_one() {
        f.write_str("i")
    } else if (-im).is_one() {
        f.write_str("-1*i")
    } else {
        write!(f, "{im}*i")
    }
}

impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;

    fn add(self, rhs: &Coeff) -> Coeff {
        self.check_same(rhs);
        match (self, rhs) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a + b),
            (Coeff::Gaussian(a, b), Coeff::Gaussian(c, d)) => Coeff::Gaussian(a + c, b + d),
            (Coeff::Mod { value: a, p }, Coeff::Mod { value: b, .. }) => Coeff::Mod {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;

    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;

    fn mul(self, rhs: &Coeff) -> Coeff {
        self.check_same(rhs);
        match (self, rhs) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a * b),
            (Coeff::Gaussian(a, b), Coeff::Gaussian(c, d)) => {
                Coeff::Gaussian(a * c - b * d, a * d + b * c)
            }
            (Coeff::Mod { value: a, p }, Coeff::Mod { value: b, .. }) => Coeff::Mod {
                value: mul_mod(*a, *b, *p),
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        match self {
            Coeff::Rational(a) => Coeff::Rational(-a),
            Coeff::Gaussian(a, b) => Coeff::Gaussian(-a, -b),
            Coeff::Mod { value, p } => Coeff::Mod { value: (p - value) % p, p: *p },
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        -&self
    }
}

/// `n!` as a field element.
pub fn factorial(field: FieldTag, n: u32) -> Coeff {
    Coeff::from_bigint(field, &factorial_int(n))
}

pub fn factorial_int(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n! / (n-k)!`, the coefficient produced by `d^k/dz^k z^n`.
pub fn falling_factorial(field: FieldTag, n: u32, k: u32) -> Coeff {
    debug_assert!(k <= n);
    let v = ((n - k + 1)..=n).fold(BigInt::one(), |acc, j| acc * j);
    Coeff::from_bigint(field, &v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_field_tags() {
        assert_eq!("rational".parse::<FieldTag>().unwrap(), FieldTag::Rational);
        assert_eq!("gaussian".parse::<FieldTag>().unwrap(), FieldTag::Gaussian);
        assert_eq!("fp:5".parse::<FieldTag>().unwrap(), FieldTag::Prime(5));
        assert!("fp:6".parse::<FieldTag>().is_err());
        assert!("fp:1".parse::<FieldTag>().is_err());
        assert!("reals".parse::<FieldTag>().is_err());
        assert_eq!(FieldTag::Prime(7).to_string(), "fp:7");
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..2000u64 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn rationals_stay_reduced() {
        let a = Coeff::from_ratio(FieldTag::Rational, 6, -4).unwrap();
        match &a {
            Coeff::Rational(q) => {
                assert_eq!(*q.numer(), BigInt::from(-3));
                assert_eq!(*q.denom(), BigInt::from(2));
            }
            _ => panic!(),
        }
        let b = Coeff::from_ratio(FieldTag::Rational, 1, 3).unwrap();
        assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = Coeff::imaginary_unit(FieldTag::Gaussian).unwrap();
        assert_eq!(&i * &i, Coeff::from_i64(FieldTag::Gaussian, -1));
        let z = &Coeff::from_i64(FieldTag::Gaussian, 3) + &i;
        let w = z.inverse().unwrap();
        assert!((&z * &w).is_one());
        assert!(Coeff::imaginary_unit(FieldTag::Rational).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldTag::Prime(5);
        let two = Coeff::from_i64(f, 2);
        assert_eq!((&two * &two.inverse().unwrap()), Coeff::one(f));
        assert!(factorial(f, 5).is_zero());
        assert_eq!(Coeff::from_i64(f, -1), Coeff::from_i64(f, 4));
        assert_eq!(Coeff::from_ratio(f, 1, 5), Err(Error::ZeroDenominator));
        assert_eq!(Coeff::from_ratio(f, 1, 2).unwrap(), Coeff::from_i64(f, 3));
        // characteristic-two cancellation
        let f2 = FieldTag::Prime(2);
        assert!((&Coeff::one(f2) + &Coeff::one(f2)).is_zero());
    }

    #[test]
    fn display() {
        let q = |n, d| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(Coeff::Gaussian(q(3, 2), q(-1, 2)).to_string(), "(3/2 - 1/2*i)");
        assert_eq!(Coeff::Gaussian(q(0, 1), q(1, 1)).to_string(), "i");
        assert_eq!(Coeff::Gaussian(q(1, 1), q(1, 1)).to_string(), "(1 + i)");
    }
}
