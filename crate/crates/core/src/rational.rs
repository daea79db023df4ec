//! Exact rational scalars, vectors and the extended value `+∞`.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `p/q`. Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p"`, `"-p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Json(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => BigInt::from_str(s)
            .map(Rational::from_integer)
            .map_err(|_| bad()),
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    // Plenty for the magnitudes this crate handles.
    let num = q.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = q.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    num / den
}

pub(crate) fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// An exact point or direction in ℚⁿ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RationalVec(Vec<Rational>);

impl RationalVec {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalVec(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalVec(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        RationalVec(vec![Rational::zero(); n])
    }

    pub fn ones(n: usize) -> Self {
        RationalVec(vec![Rational::one(); n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn dot(&self, other: &RationalVec) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &Rational) -> RationalVec {
        RationalVec(self.0.iter().map(|x| x * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &RationalVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }
}

impl Index<usize> for RationalVec {
    type Output = Rational;
    fn index(&self, k: usize) -> &Rational {
        &self.0[k]
    }
}

impl Add for &RationalVec {
    type Output = RationalVec;
    fn add(self, rhs: &RationalVec) -> RationalVec {
        RationalVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVec {
    type Output = RationalVec;
    fn sub(self, rhs: &RationalVec) -> RationalVec {
        RationalVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&Rational> for &RationalVec {
    type Output = RationalVec;
    fn mul(self, rhs: &Rational) -> RationalVec {
        self.scale(rhs)
    }
}

impl fmt::Display for RationalVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<Rational>> for RationalVec {
    fn from(v: Vec<Rational>) -> Self {
        RationalVec(v)
    }
}

/// A nonnegative quantity that may be `+∞` (masses, Łojasiewicz exponents,
/// Newton numbers).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinite,
}

impl Extended {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(q) => Some(q),
            Extended::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(q) => to_f64(q),
            Extended::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Less,
            (Extended::Infinite, Extended::Finite(_)) => Greater,
            (Extended::Infinite, Extended::Infinite) => Equal,
        }
    }
}

impl From<Rational> for Extended {
    fn from(q: Rational) -> Self {
        Extended::Finite(q)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(q) => write!(f, "{q}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Extended {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(Extended::Infinite),
            other => parse_rational(other).map(Extended::Finite),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let q = d.deserialize_any(RationalVisitor { allow_inf: true })?;
        Ok(q)
    }
}

/// Serde adapter: rationals travel as `"p/q"` strings; plain JSON integers are
/// accepted on input.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        match d.deserialize_any(RationalVisitor { allow_inf: false })? {
            Extended::Finite(q) => Ok(q),
            Extended::Infinite => Err(de::Error::custom("infinite value not allowed")),
        }
    }
}

/// Wrapper used for (de)serializing vectors of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonRational(#[serde(with = "serde_rational")] pub Rational);

struct RationalVisitor {
    allow_inf: bool,
}

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Extended;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "an integer or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Extended, E> {
        Ok(Extended::Finite(int(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Extended, E> {
        Ok(Extended::Finite(Rational::from_integer(BigInt::from(v))))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Extended, E> {
        if self.allow_inf && matches!(v.trim(), "inf" | "+inf") {
            return Ok(Extended::Infinite);
        }
        parse_rational(v)
            .map(Extended::Finite)
            .map_err(|e| E::custom(e.to_string()))
    }
}
