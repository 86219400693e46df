//! Extended reals `R u {+inf}`, the codomain of every convex function here.
//!
//! `+inf` is a tagged variant rather than a large float, so sums and positive
//! multiples absorb it exactly and suprema can skip it without tolerance games.
//! `-inf` is not representable: every function in this crate is proper.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

pub use ExtReal::PosInf;

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Converts a float, mapping `f64::INFINITY` to `PosInf`. NaN and `-inf` are rejected.
    pub fn new(v: f64) -> Result<Self> {
        if v.is_nan() || v == f64::NEG_INFINITY {
            Err(Error::NotExtendedReal(v))
        } else if v == f64::INFINITY {
            Ok(PosInf)
        } else {
            Ok(ExtReal::Finite(v))
        }
    }

    /// Internal conversion for values produced by this crate's numerics.
    /// Panics on NaN or `-inf`, which would be a bug upstream.
    pub(crate) fn from_f64(v: f64) -> Self {
        match Self::new(v) {
            Ok(x) => x,
            Err(_) => panic!("numerics produced {v}, not an extended real"),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_inf(self) -> bool {
        matches!(self, PosInf)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            PosInf => None,
        }
    }

    /// `PosInf` maps to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            PosInf => f64::INFINITY,
        }
    }

    /// `c * self`. `0 * inf` and negative multiples of `inf` are errors.
    pub fn scale(self, c: f64) -> Result<Self> {
        match self {
            ExtReal::Finite(v) => Ok(ExtReal::Finite(c * v)),
            PosInf if c > 0.0 => Ok(PosInf),
            PosInf if c == 0.0 => Err(Error::ZeroTimesInfinity),
            PosInf => Err(Error::NegativeTimesInfinity),
        }
    }

    /// Finite difference `self - other`; `None` unless both are finite.
    pub fn finite_sub(self, other: ExtReal) -> Option<f64> {
        Some(self.finite()? - other.finite()?)
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal::from_f64(v)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => PosInf,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: f64) -> ExtReal {
        match self {
            ExtReal::Finite(a) => ExtReal::Finite(a + rhs),
            PosInf => PosInf,
        }
    }
}

impl Neg for ExtReal {
    type Output = Option<f64>;
    /// Negation leaves `R u {+inf}` for `+inf`, so it yields `None` there.
    fn neg(self) -> Option<f64> {
        self.finite().map(|v| -v)
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.total_cmp(b),
            (ExtReal::Finite(_), PosInf) => Ordering::Less,
            (PosInf, ExtReal::Finite(_)) => Ordering::Greater,
            (PosInf, PosInf) => Ordering::Equal,
        }
    }
}

impl PartialEq<f64> for ExtReal {
    fn eq(&self, other: &f64) -> bool {
        matches!(self, ExtReal::Finite(v) if v == other)
    }
}

impl PartialOrd<f64> for ExtReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        match self {
            ExtReal::Finite(v) => v.partial_cmp(other),
            PosInf => Some(Ordering::Greater),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            PosInf => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for ExtReal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "inf" || t == "+inf" {
            return Ok(PosInf);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("not a number: {t:?}")))?;
        ExtReal::new(v)
    }
}

// JSON has no infinity; `+inf` travels as the string "inf".
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            PosInf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => ExtReal::new(v).map_err(serde::de::Error::custom),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
