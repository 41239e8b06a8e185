//! Exact rational utilities.
//!
//! Every valuation, share and envy amount in the crate is a [`Value`]. Values
//! are stored in lowest terms with a positive denominator; arithmetic is exact
//! and panics on `i128` overflow instead of wrapping, so a verdict is never
//! computed from a silently corrupted number.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Value(Ratio<i128>);

const OVERFLOW: &str = "exact value arithmetic overflowed i128";

impl Value {
    pub const ZERO: Value = Value(Ratio::new_raw(0, 1));
    pub const ONE: Value = Value(Ratio::new_raw(1, 1));

    /// Builds `numer / denom`, reducing to lowest terms.
    ///
    /// Returns `None` when `denom` is zero.
    pub fn new(numer: i128, denom: i128) -> Option<Value> {
        if denom == 0 {
            None
        } else {
            Some(Value(Ratio::new(numer, denom)))
        }
    }

    pub fn from_int(v: i128) -> Value {
        Value(Ratio::from_integer(v))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Value {
        Value(self.0.abs())
    }

    /// Divides by a count (an agent or group size).
    pub fn div_count(self, count: usize) -> Value {
        assert!(count > 0, "division by zero count");
        self / Value::from_int(count as i128)
    }

    pub fn mul_count(self, count: usize) -> Value {
        self * Value::from_int(count as i128)
    }

    pub fn checked_add(&self, rhs: &Value) -> Option<Value> {
        self.0.checked_add(&rhs.0).map(Value)
    }

    pub fn checked_sub(&self, rhs: &Value) -> Option<Value> {
        self.0.checked_sub(&rhs.0).map(Value)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::from_int(v as i128)
    }
}

impl From<i32> for Value {
    fn from(v: i32) -> Self {
        Value::from_int(v as i128)
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        // Integers are by far the common case; skip the gcd work.
        if self.denom() == 1 && rhs.denom() == 1 {
            return Value::from_int(self.numer().checked_add(rhs.numer()).expect(OVERFLOW));
        }
        Value(self.0.checked_add(&rhs.0).expect(OVERFLOW))
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, rhs: Value) -> Value {
        if self.denom() == 1 && rhs.denom() == 1 {
            return Value::from_int(self.numer().checked_sub(rhs.numer()).expect(OVERFLOW));
        }
        Value(self.0.checked_sub(&rhs.0).expect(OVERFLOW))
    }
}

impl Mul for Value {
    type Output = Value;
    fn mul(self, rhs: Value) -> Value {
        Value(self.0.checked_mul(&rhs.0).expect(OVERFLOW))
    }
}

impl Div for Value {
    type Output = Value;
    fn div(self, rhs: Value) -> Value {
        assert!(!rhs.is_zero(), "division by zero value");
        Value(self.0.checked_div(&rhs.0).expect(OVERFLOW))
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value::ZERO - self
    }
}

impl AddAssign for Value {
    fn add_assign(&mut self, rhs: Value) {
        *self = *self + rhs;
    }
}

impl SubAssign for Value {
    fn sub_assign(&mut self, rhs: Value) {
        *self = *self - rhs;
    }
}

impl<'a> Add<&'a Value> for Value {
    type Output = Value;
    fn add(self, rhs: &'a Value) -> Value {
        self + *rhs
    }
}

impl<'a> Sub<&'a Value> for Value {
    type Output = Value;
    fn sub(self, rhs: &'a Value) -> Value {
        self - *rhs
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::ZERO, |acc, v| acc + v)
    }
}

impl<'a> Sum<&'a Value> for Value {
    fn sum<I: Iterator<Item = &'a Value>>(iter: I) -> Value {
        iter.fold(Value::ZERO, |acc, v| acc + *v)
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.denom() == 1 && other.denom() == 1 {
            return self.numer().cmp(&other.numer());
        }
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseValueError {
    #[error("empty value")]
    Empty,
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("not an integer or p/q rational: {0:?}")]
    Malformed(String),
}

impl FromStr for Value {
    type Err = ParseValueError;

    /// Accepts `"p"`, `"p/q"` and a leading sign on `p`, surrounding
    /// whitespace ignored.
    fn from_str(s: &str) -> Result<Value, ParseValueError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseValueError::Empty);
        }
        let parse = |part: &str| -> Result<i128, ParseValueError> {
            part.trim()
                .parse::<i128>()
                .map_err(|_| ParseValueError::Malformed(s.to_string()))
        };
        match s.split_once('/') {
            None => Ok(Value::from_int(parse(s)?)),
            Some((p, q)) => {
                let numer = parse(p)?;
                let denom = parse(q)?;
                Value::new(numer, denom).ok_or_else(|| ParseValueError::ZeroDenominator(s.to_string()))
            }
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Value, D::Error> {
        struct ValueVisitor;

        impl Visitor<'_> for ValueVisitor {
            type Value = Value;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Value, E> {
                Ok(Value::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Value, E> {
                Ok(Value::from_int(v as i128))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Value, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ValueVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_reduce() {
        assert_eq!(v("2/4"), v("1/2"));
        assert_eq!(v("-3/-6").to_string(), "1/2");
        assert_eq!(v("4/-2").to_string(), "-2");
        assert_eq!(v(" 7 ").to_string(), "7");
        assert_eq!(v("6/3").denom(), 1);
    }

    #[test]
    fn third_times_three_is_exactly_one() {
        assert_eq!(v("1/3") * Value::from(3), Value::ONE);
        assert_eq!(v("1/3") + v("1/3") + v("1/3"), Value::ONE);
    }

    #[test]
    fn parse_errors() {
        assert_eq!("".parse::<Value>(), Err(ParseValueError::Empty));
        assert!(matches!(
            "1/0".parse::<Value>(),
            Err(ParseValueError::ZeroDenominator(_))
        ));
        assert!(matches!("1.5".parse::<Value>(), Err(ParseValueError::Malformed(_))));
        assert!(matches!("x/2".parse::<Value>(), Err(ParseValueError::Malformed(_))));
    }

    #[test]
    fn ordering_mixes_integers_and_fractions() {
        assert!(v("1/3") < v("1/2"));
        assert!(v("-1/3") > Value::from(-1));
        assert!(Value::from(2) > v("3/2"));
        assert_eq!(v("1/3").max(Value::ZERO), v("1/3"));
    }

    #[test]
    #[should_panic(expected = "overflowed")]
    fn overflow_panics() {
        let _ = Value::from_int(i128::MAX) + Value::ONE;
    }

    #[test]
    fn serde_round_trip() {
        let json = serde_json::to_string(&v("-5/10")).unwrap();
        assert_eq!(json, "\"-1/2\"");
        let back: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v("-1/2"));
        let from_int: Value = serde_json::from_str("-4").unwrap();
        assert_eq!(from_int, Value::from(-4));
        assert!(serde_json::from_str::<Value>("1.5").is_err());
    }
}
