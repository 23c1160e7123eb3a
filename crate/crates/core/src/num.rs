//! Exact-number helpers shared by every module: rational parsing and
//! printing, floor/ceil division, and JSON (de)serialization of big integers
//! as plain JSON numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

pub fn lcm_all<'a, I: IntoIterator<Item = &'a BigInt>>(values: I) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| {
        if v.is_zero() {
            acc
        } else {
            acc.lcm(v)
        }
    })
}

pub fn floor_rational(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

pub fn ceil_rational(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidDocument(format!("not a rational number: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn max_abs<'a, I: IntoIterator<Item = &'a BigInt>>(values: I) -> BigInt {
    values
        .into_iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Serde adapter writing a `BigInt` as a bare JSON number of any size.
pub mod bigint_number {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n: serde_json::Number = v
            .to_string()
            .parse()
            .map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        n.to_string()
            .parse()
            .map_err(|_| D::Error::custom(format!("expected an integer, found {n}")))
    }
}

/// Serde adapter for a sequence of `BigInt` JSON numbers.
pub mod bigint_seq {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Num(#[serde(with = "bigint_number")] BigInt);

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| Num(x.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        let v: Vec<Num> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|n| n.0).collect())
    }
}

/// Serde adapter writing rationals as `"p/q"` (or `"p"`) strings.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &BigRational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}
