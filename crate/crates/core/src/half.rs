//! Exponents measured in half-units of `q`.
//!
//! Every series in this crate lives on the grid `t^i` with `t^2 = q`, so an
//! exponent is stored as the integer numerator `i` of `i/2`. The sentinel
//! [`HalfInt::INFINITY`] stands for "exact to all orders".

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A value `numerator / 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const ONE: HalfInt = HalfInt(2);
    pub const HALF: HalfInt = HalfInt(1);
    /// Order of an exact series. Absorbs finite additions.
    pub const INFINITY: HalfInt = HalfInt(i64::MAX);

    pub const fn from_halves(numerator: i64) -> Self {
        HalfInt(numerator)
    }

    pub const fn from_int(value: i64) -> Self {
        HalfInt(2 * value)
    }

    pub const fn halves(self) -> i64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0 == i64::MAX
    }

    pub fn is_integral(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integral value, if this is an integral power of `q`.
    pub fn to_int(self) -> Option<i64> {
        (self.is_integral() && !self.is_infinite()).then_some(self.0 / 2)
    }

    /// Smallest integer `>= self`.
    pub fn ceil(self) -> i64 {
        self.0.div_euclid(2) + self.0.rem_euclid(2)
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        if self.is_infinite() || rhs.is_infinite() {
            return HalfInt::INFINITY;
        }
        HalfInt(self.0 + rhs.0)
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        *self = *self + rhs;
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        assert!(!rhs.is_infinite(), "cannot subtract an infinite exponent");
        if self.is_infinite() {
            return self;
        }
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        assert!(!self.is_infinite(), "cannot negate an infinite exponent");
        HalfInt(-self.0)
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        if self.is_infinite() {
            return match rhs.cmp(&0) {
                Ordering::Greater => self,
                Ordering::Equal => HalfInt::ZERO,
                Ordering::Less => panic!("cannot negate an infinite exponent"),
            };
        }
        HalfInt(self.0 * rhs)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"p/2"`, a plain integer, or `"inf"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        if s == "inf" {
            return Ok(HalfInt::INFINITY);
        }
        match s.split_once('/') {
            Some((num, den)) => {
                if den.trim() != "2" {
                    return Err(bad());
                }
                num.trim().parse::<i64>().map(HalfInt).map_err(|_| bad())
            }
            None => s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad()),
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(HalfInt::from_int(v)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_halves(3));
        assert_eq!("-1/2".parse::<HalfInt>().unwrap(), HalfInt::from_halves(-1));
        assert_eq!("7".parse::<HalfInt>().unwrap(), HalfInt::from_int(7));
        assert_eq!("120/2".parse::<HalfInt>().unwrap(), HalfInt::from_int(60));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("x".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt::from_halves(5).to_string(), "5/2");
        assert_eq!(HalfInt::from_halves(-4).to_string(), "-2");
    }

    #[test]
    fn infinity_absorbs() {
        let inf = HalfInt::INFINITY;
        assert!((inf + HalfInt::from_int(-3)).is_infinite());
        assert!((inf - HalfInt::from_int(3)).is_infinite());
        assert!(HalfInt::from_int(1000) < inf);
        assert_eq!(HalfInt::from_halves(3).ceil(), 2);
        assert_eq!(HalfInt::from_halves(-3).ceil(), -1);
    }

    #[test]
    fn serde_accepts_ints_and_strings() {
        let v: Vec<HalfInt> = serde_json::from_str(r#"[3, "5/2", "inf"]"#).unwrap();
        assert_eq!(v, vec![HalfInt::from_int(3), HalfInt::from_halves(5), HalfInt::INFINITY]);
        assert_eq!(serde_json::to_string(&HalfInt::from_halves(5)).unwrap(), r#""5/2""#);
    }
}
