//! Exact fractions for interval endpoints and generalized binomial indices.
//!
//! Values are kept in lowest terms with a positive denominator. Every
//! comparison is decided by integer cross-multiplication, so endpoints such as
//! `3n/13` are never classified through floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain(format!("zero denominator in {num}/0")));
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    /// Constant constructor for coefficient tables. The pair must already be
    /// in lowest terms with `den > 0`; nothing is reduced or checked.
    pub const fn from_parts_unchecked(num: i128, den: i128) -> Self {
        Rational(Ratio::new_raw(num, den))
    }

    pub fn integer(v: i128) -> Self {
        Rational(Ratio::from_integer(v))
    }

    pub fn num(&self) -> i128 {
        *self.0.numer()
    }

    pub fn den(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Greatest integer not exceeding `self`.
    pub fn floor_of(&self) -> i128 {
        Integer::div_floor(&self.num(), &self.den())
    }

    /// `self - floor_of(self)`, always in `[0, 1)`.
    pub fn frac_of(&self) -> Rational {
        *self - Rational::integer(self.floor_of())
    }

    pub fn scale(&self, n: u64) -> Rational {
        *self * Rational::integer(n as i128)
    }

    pub fn to_f64(&self) -> f64 {
        // both parts are exact in f64 up to 2^53, which covers every use here
        self.num() as f64 / self.den() as f64
    }

    /// Compare against an integer without constructing a second fraction.
    pub fn cmp_int(&self, k: i128) -> Ordering {
        self.num().cmp(&(k * self.den()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Floor of `x`; free-function form used throughout the generalized binomial code.
pub fn floor_of(x: Rational) -> i128 {
    x.floor_of()
}

/// Fractional part `{x} = x - [x]`.
pub fn frac_of(x: Rational) -> Rational {
    x.frac_of()
}

impl From<i128> for Rational {
    fn from(v: i128) -> Self {
        Rational::integer(v)
    }
}

impl From<u64> for Rational {
    fn from(v: u64) -> Self {
        Rational::integer(v as i128)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den() == 1 {
            write!(f, "{}", self.num())
        } else {
            write!(f, "{}/{}", self.num(), self.den())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("cannot parse rational from {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => {
                let a = a.trim().parse::<i128>().map_err(|_| bad())?;
                let b = b.trim().parse::<i128>().map_err(|_| bad())?;
                Rational::new(a, b)
            }
            None => Ok(Rational::integer(s.trim().parse::<i128>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i128, b: i128) -> Rational {
        Rational::new(a, b).unwrap()
    }

    #[test]
    fn floor_and_frac() {
        assert_eq!(q(7, 2).floor_of(), 3);
        assert_eq!(q(7, 2).frac_of(), q(1, 2));
        assert_eq!(q(-3, 2).floor_of(), -2);
        assert_eq!(q(-3, 2).frac_of(), q(1, 2));
        assert_eq!(q(4, 1).floor_of(), 4);
        assert!(q(4, 1).frac_of().is_zero());
    }

    #[test]
    fn normalizes_sign_and_gcd() {
        let x = q(6, -4);
        assert_eq!(x.num(), -3);
        assert_eq!(x.den(), 2);
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn parses_and_prints() {
        assert_eq!("3/13".parse::<Rational>().unwrap(), q(3, 13));
        assert_eq!("5".parse::<Rational>().unwrap(), q(5, 1));
        assert_eq!(q(2, 11).to_string(), "2/11");
        assert!("x/2".parse::<Rational>().is_err());
    }

    #[test]
    fn integer_comparison_is_exact() {
        // 3n/13 at n = 13 is exactly 3
        let x = q(3, 13).scale(13);
        assert_eq!(x.cmp_int(3), Ordering::Equal);
        assert_eq!(q(3, 13).scale(14).cmp_int(3), Ordering::Greater);
    }
}
