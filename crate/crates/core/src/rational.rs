//! Exact rationals and their text form.
//!
//! Everything geometric in this crate (points, interval endpoints, matrix
//! entries) is a [`Q`]. Text input accepts integers, `p/q` fractions and
//! finite decimals; text output is always `p/q` (or `p` when integral).

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use thiserror::Error;

pub type Q = BigRational;
pub type QVec = Vec<Q>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRationalError(pub String);

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-7/4"`, `"0.125"` or `"-2.5"`.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(err());
        }
        let whole: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits.parse().map_err(|_| err())?
        };
        let scale = num::pow(BigInt::from(10), frac_part.len());
        let fraction: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse().map_err(|_| err())?
        };
        let magnitude = Q::new(whole * &scale + fraction, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Q::from_integer(n))
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(format_q).collect()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn l1_distance(a: &[Q], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .fold(Q::zero(), |acc, (x, y)| acc + (x - y).abs())
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

/// Lossy conversion for human-facing summaries only.
pub fn to_f64(x: &Q) -> f64 {
    let n: f64 = x.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = x.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

/// A JSON rational: either a string (`"1/2"`, `"0.25"`) or a plain integer.
pub fn from_json(v: &serde_json::Value) -> Result<Q, ParseRationalError> {
    match v {
        serde_json::Value::String(s) => parse_q(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(q(i))
            } else {
                parse_q(&n.to_string())
            }
        }
        other => Err(ParseRationalError(other.to_string())),
    }
}

pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_json(&v).map_err(serde::de::Error::custom)
    }
}

pub mod serde_qvec {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        format_vec(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.iter()
            .map(|v| from_json(v).map_err(serde::de::Error::custom))
            .collect()
    }
}
