//! Exact rational numbers.
//!
//! All house values and envy totals are carried as [`Rational`]. The type is a
//! thin newtype over [`num_rational::BigRational`], which keeps every value in
//! lowest terms with a positive denominator. The canonical text form is `p/q`
//! (or just `p` when `q = 1`); decimal strings such as `3.25` are parsed
//! exactly.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, Error> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// `numer / denom` for small literals; panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Rational::new(numer, denom).expect("nonzero denominator")
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// `|self - other|` without an intermediate clone of either side.
    pub fn abs_diff(&self, other: &Rational) -> Self {
        match self.cmp(other) {
            Ordering::Less => Rational(&other.0 - &self.0),
            _ => Rational(&self.0 - &other.0),
        }
    }

    pub fn pow2_recip(k: u32) -> Self {
        Rational(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    /// Decimal rendering rounded half away from zero to `places` digits.
    pub fn to_decimal_string(&self, places: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), places);
        let scaled = self.0.numer() * &scale;
        let denom = self.0.denom();
        let (q, r) = scaled.abs().div_rem(denom);
        let q = if (&r << 1usize) >= *denom { q + 1 } else { q };
        let digits = q.to_string();
        let (int_part, frac_part) = if places == 0 {
            (digits, String::new())
        } else if digits.len() > places {
            let (a, b) = digits.split_at(digits.len() - places);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{digits:0>places$}"))
        };
        let sign =
            if self.0.is_negative() && !(int_part == "0" && frac_part.chars().all(|c| c == '0')) {
                "-"
            } else {
                ""
            };
        if places == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Rational(BigRational::new(p, q)));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let all_digits = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = BigRational::new(numer, denom);
        Ok(Rational(if neg { -value } else { value }))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(i) => Ok(Rational::from_integer(i)),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        let mut acc = Rational::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal_forms() {
        assert_eq!("7/2".parse::<Rational>().unwrap(), Rational::frac(7, 2));
        assert_eq!("14/4".parse::<Rational>().unwrap(), Rational::frac(7, 2));
        assert_eq!("3.5".parse::<Rational>().unwrap(), Rational::frac(7, 2));
        assert_eq!("-0.25".parse::<Rational>().unwrap(), Rational::frac(-1, 4));
        assert_eq!(
            "42".parse::<Rational>().unwrap(),
            Rational::from_integer(42)
        );
        assert_eq!(".5".parse::<Rational>().unwrap(), Rational::frac(1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("1.2.3".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(Rational::frac(6, 4).to_string(), "3/2");
        assert_eq!(Rational::frac(6, 3).to_string(), "2");
        assert_eq!(Rational::frac(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rational::frac(1, 3).to_decimal_string(6), "0.333333");
        assert_eq!(Rational::frac(2, 3).to_decimal_string(6), "0.666667");
        assert_eq!(Rational::frac(15, 1).to_decimal_string(6), "15.000000");
        assert_eq!(Rational::frac(-1, 8).to_decimal_string(2), "-0.13");
        assert_eq!(
            Rational::frac(1, 1_000_000_000).to_decimal_string(6),
            "0.000000"
        );
    }

    #[test]
    fn exact_subtraction() {
        let a = Rational::frac(9, 2);
        let b = Rational::frac(7, 2);
        assert_eq!(a.abs_diff(&b), Rational::one());
        assert_eq!(b.abs_diff(&a), Rational::one());
    }

    #[test]
    fn serde_uses_canonical_strings() {
        let v = Rational::frac(10, 4);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, "\"5/2\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        let int: Rational = serde_json::from_str("3").unwrap();
        assert_eq!(int, Rational::from_integer(3));
    }
}
