//! Scalars and vectors carried through the norm layer: exact rationals where
//! the norm allows it, floats with an explicit tolerance otherwise.

use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Q;
use crate::error::{Error, Result};

/// Parses `"3"`, `"-2/7"` or a plain decimal such as `"0.125"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Ok(q) = Q::from_str(s) {
        return Ok(q);
    }
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').ok_or_else(bad)?;
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let q = Q::new(num, den);
    Ok(if neg { -q } else { q })
}

pub fn format_rational(q: &Q) -> String {
    q.to_string()
}

pub(crate) fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn q_from_i64(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// A norm value: exact, or a float with the tolerance it was decided under.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Q),
    Float { value: f64, tol: f64 },
}

impl Scalar {
    pub fn approx(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q_to_f64(q),
            Scalar::Float { value, .. } => *value,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Exactly one, or within the tolerance of one.
    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_one(),
            Scalar::Float { value, tol } => (value - 1.0).abs() <= *tol,
        }
    }

    pub fn minus_one(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q - Q::one()),
            Scalar::Float { value, tol } => Scalar::Float { value: value - 1.0, tol: *tol },
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q.abs()),
            Scalar::Float { value, tol } => Scalar::Float { value: value.abs(), tol: *tol },
        }
    }

    /// Exact comparison when both sides are exact, float comparison otherwise.
    pub fn compare(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self.approx().total_cmp(&other.approx()),
        }
    }

    pub fn as_exact(&self) -> Option<&Q> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float { .. } => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarWire {
    Exact { exact: String, approx: f64 },
    Float { value: f64, tol: f64 },
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => ScalarWire::Exact { exact: format_rational(q), approx: q_to_f64(q) },
            Scalar::Float { value, tol } => ScalarWire::Float { value: *value, tol: *tol },
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match ScalarWire::deserialize(deserializer)? {
            ScalarWire::Exact { exact, .. } => {
                parse_rational(&exact).map(Scalar::Exact).map_err(serde::de::Error::custom)
            }
            ScalarWire::Float { value, tol } => Ok(Scalar::Float { value, tol }),
        }
    }
}

/// A vector in the ambient space, in the arithmetic its norm uses.
#[derive(Clone, Debug, PartialEq)]
pub enum Vector {
    Exact(Vec<Q>),
    Float(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Vector {
    pub fn dim(&self) -> usize {
        match self {
            Vector::Exact(v) => v.len(),
            Vector::Float(v) => v.len(),
            Vector::Complex(v) => v.len(),
        }
    }

    pub fn exact_from_i64(v: &[i64]) -> Self {
        Vector::Exact(v.iter().map(|&x| q_from_i64(x)).collect())
    }

    pub fn to_f64(&self) -> Option<Vec<f64>> {
        match self {
            Vector::Exact(v) => Some(v.iter().map(q_to_f64).collect()),
            Vector::Float(v) => Some(v.clone()),
            Vector::Complex(_) => None,
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        match self {
            Vector::Exact(v) => v.iter().map(|q| Complex64::new(q_to_f64(q), 0.0)).collect(),
            Vector::Float(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            Vector::Complex(v) => v.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&[Q]> {
        match self {
            Vector::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Vector::Exact(v) => v.iter().all(Zero::is_zero),
            Vector::Float(v) => v.iter().all(|x| *x == 0.0),
            Vector::Complex(v) => v.iter().all(|x| x.is_zero()),
        }
    }

    /// `self + sign * other`, in the richer of the two arithmetics.
    pub fn combine(&self, other: &Vector, sign: i8) -> Vector {
        match (self, other) {
            (Vector::Exact(a), Vector::Exact(b)) => {
                Vector::Exact(a.iter().zip(b).map(|(x, y)| if sign >= 0 { x + y } else { x - y }).collect())
            }
            (Vector::Complex(_), _) | (_, Vector::Complex(_)) => {
                let s = f64::from(sign);
                Vector::Complex(self.to_complex().iter().zip(other.to_complex()).map(|(x, y)| x + y * s).collect())
            }
            _ => {
                let s = f64::from(sign);
                let a = self.to_f64().expect("real");
                let b = other.to_f64().expect("real");
                Vector::Float(a.iter().zip(&b).map(|(x, y)| x + s * y).collect())
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum VectorWire {
    Exact(Vec<String>),
    Float(Vec<f64>),
    Complex(Vec<[f64; 2]>),
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Vector::Exact(v) => VectorWire::Exact(v.iter().map(format_rational).collect()),
            Vector::Float(v) => VectorWire::Float(v.clone()),
            Vector::Complex(v) => VectorWire::Complex(v.iter().map(|z| [z.re, z.im]).collect()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(match VectorWire::deserialize(deserializer)? {
            VectorWire::Exact(v) => Vector::Exact(
                v.iter().map(|s| parse_rational(s)).collect::<Result<_>>().map_err(serde::de::Error::custom)?,
            ),
            VectorWire::Float(v) => Vector::Float(v),
            VectorWire::Complex(v) => Vector::Complex(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()),
        })
    }
}
