//! Exact rationals and their text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};
use crate::Int;

pub type Rational = BigRational;

pub fn int(x: Int) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

pub fn ratio(p: Int, q: Int) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `p/q` in lowest terms, or `p` when the denominator is 1.
pub fn to_text(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `floor(x)` as a machine integer.
pub fn floor_int(x: &Rational) -> Result<Int> {
    x.floor().to_integer().to_i64().ok_or(Error::Overflow("floor"))
}

/// `ceil(x)` as a machine integer.
pub fn ceil_int(x: &Rational) -> Result<Int> {
    x.ceil().to_integer().to_i64().ok_or(Error::Overflow("ceil"))
}

pub fn is_positive(x: &Rational) -> bool {
    x.is_positive()
}

/// JSON value for a big integer: a number when it fits in `i64`, decimal
/// text otherwise.
pub(crate) fn bigint_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("{n} is not an integer"))),
        serde_json::Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("`{s}` is not an integer"))),
        other => Err(Error::Parse(format!("expected an integer, found {other}"))),
    }
}

/// serde adapter storing a rational as `"p/q"` text.
pub mod text {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_text(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}
