//! Exact rationals and error-carrying reals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerators: fall back to a ratio of the leading digits
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().expect("integer part fits in i64")
}

/// Fractional part in [0,1).
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidMap(format!("not a rational: {s:?}"));
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

/// Smallest-denominator-ish rational approximation, used only in tests and
/// random generation where a dyadic grid is wanted.
pub fn dyadic(x: f64, bits: u32) -> Rational {
    let scale = 1i64 << bits;
    rat((x * scale as f64).round() as i64, scale)
}

/// `x` rounded to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Decimal text of `x` with at most 12 significant digits, trailing zeros trimmed.
pub fn fmt_sig12(x: f64) -> String {
    let r = round_sig(x, 12);
    if r == 0.0 {
        return "0".into();
    }
    if !r.is_finite() {
        return r.to_string();
    }
    // shortest round-trip text of the rounded value has at most 12 digits
    let s = format!("{r:?}");
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// A real number that is either known exactly or carries an absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Exact(Rational),
    Approx { value: f64, err: f64 },
}

impl Real {
    pub fn approx(value: f64, err: f64) -> Self {
        Real::Approx { value, err }
    }

    pub fn value(&self) -> f64 {
        match self {
            Real::Exact(r) => to_f64(r),
            Real::Approx { value, .. } => *value,
        }
    }

    pub fn err(&self) -> f64 {
        match self {
            Real::Exact(_) => 0.0,
            Real::Approx { err, .. } => *err,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Approx { .. } => None,
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => write!(f, "{r}"),
            Real::Approx { value, err } => write!(f, "{value:.12}±{err:.1e}"),
        }
    }
}

impl Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RealWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RealWire::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RealWire {
    Exact(String),
    Approx { value: f64, err: f64 },
}

impl From<&Real> for RealWire {
    fn from(r: &Real) -> Self {
        match r {
            Real::Exact(q) => RealWire::Exact(q.to_string()),
            Real::Approx { value, err } => RealWire::Approx {
                value: *value,
                err: *err,
            },
        }
    }
}

impl TryFrom<RealWire> for Real {
    type Error = Error;
    fn try_from(w: RealWire) -> Result<Self> {
        Ok(match w {
            RealWire::Exact(s) => Real::Exact(parse_rational(&s)?),
            RealWire::Approx { value, err } => Real::Approx { value, err },
        })
    }
}

/// Serde adapter for a single rational stored as a "p/q" string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
