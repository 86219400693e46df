//! Closed-form test functions. Each is separable: in `R^d` the value is the sum
//! of the one-dimensional value over the coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::grid::{dot, GridAxis, GridFn};

/// Closed interval with possibly infinite ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lo - tol && v <= self.hi + tol
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "FunctionRepr")]
pub enum BuiltinFunction {
    /// `a/2 x^2`, `a > 0`.
    Quadratic {
        a: f64,
    },
    Abs,
    /// `a x`.
    Linear {
        a: f64,
    },
    /// Indicator of `[l, u]`.
    Indicator {
        l: f64,
        u: f64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionRepr {
    kind: String,
    a: Option<f64>,
    l: Option<f64>,
    u: Option<f64>,
}

impl TryFrom<FunctionRepr> for BuiltinFunction {
    type Error = Error;
    fn try_from(r: FunctionRepr) -> Result<Self> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Config(format!("function kind {:?} needs `{name}`", r.kind)))
        };
        let allowed: &[&str] = match r.kind.as_str() {
            "quadratic" | "linear" => &["a"],
            "abs" => &[],
            "indicator" => &["l", "u"],
            k => return Err(Error::Config(format!("unknown function kind {k:?}"))),
        };
        for (name, v) in [("a", r.a), ("l", r.l), ("u", r.u)] {
            if v.is_some() && !allowed.contains(&name) {
                return Err(Error::Config(format!(
                    "function kind {:?} does not take `{name}`",
                    r.kind
                )));
            }
        }
        let f = match r.kind.as_str() {
            "quadratic" => BuiltinFunction::Quadratic { a: need(r.a, "a")? },
            "linear" => BuiltinFunction::Linear { a: need(r.a, "a")? },
            "abs" => BuiltinFunction::Abs,
            _ => BuiltinFunction::Indicator {
                l: need(r.l, "l")?,
                u: need(r.u, "u")?,
            },
        };
        f.validate()?;
        Ok(f)
    }
}

// Snap tolerance for interval ends and the linear conjugate's single point.
const EDGE: f64 = 1e-9;

impl BuiltinFunction {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BuiltinFunction::Quadratic { a } if !(a > 0.0 && a.is_finite()) => {
                Err(Error::InvalidArgument(format!("quadratic needs a > 0, got {a}")))
            }
            BuiltinFunction::Linear { a } if !a.is_finite() => {
                Err(Error::InvalidArgument(format!("linear slope {a} is not finite")))
            }
            BuiltinFunction::Indicator { l, u } if !(l <= u && l.is_finite() && u.is_finite()) => Err(
                Error::InvalidArgument(format!("indicator needs finite l <= u, got [{l}, {u}]")),
            ),
            _ => Ok(()),
        }
    }

    pub fn value_1d(&self, x: f64) -> ExtReal {
        match *self {
            BuiltinFunction::Quadratic { a } => ExtReal::Finite(0.5 * a * x * x),
            BuiltinFunction::Abs => ExtReal::Finite(x.abs()),
            BuiltinFunction::Linear { a } => ExtReal::Finite(a * x),
            BuiltinFunction::Indicator { l, u } => {
                if x >= l - EDGE && x <= u + EDGE {
                    ExtReal::ZERO
                } else {
                    ExtReal::PosInf
                }
            }
        }
    }

    pub fn conjugate_1d(&self, p: f64) -> ExtReal {
        match *self {
            BuiltinFunction::Quadratic { a } => ExtReal::Finite(p * p / (2.0 * a)),
            BuiltinFunction::Abs => {
                if p.abs() <= 1.0 + EDGE {
                    ExtReal::ZERO
                } else {
                    ExtReal::PosInf
                }
            }
            BuiltinFunction::Linear { a } => {
                if (p - a).abs() <= EDGE * (1.0 + a.abs()) {
                    ExtReal::ZERO
                } else {
                    ExtReal::PosInf
                }
            }
            BuiltinFunction::Indicator { l, u } => ExtReal::Finite((l * p).max(u * p)),
        }
    }

    /// `None` outside the domain.
    pub fn subdifferential_1d(&self, x: f64) -> Option<Interval> {
        match *self {
            BuiltinFunction::Quadratic { a } => Some(Interval::point(a * x)),
            BuiltinFunction::Abs => Some(if x > 0.0 {
                Interval::point(1.0)
            } else if x < 0.0 {
                Interval::point(-1.0)
            } else {
                Interval::new(-1.0, 1.0)
            }),
            BuiltinFunction::Linear { a } => Some(Interval::point(a)),
            BuiltinFunction::Indicator { l, u } => {
                if !self.value_1d(x).is_finite() {
                    None
                } else if l == u {
                    Some(Interval::new(f64::NEG_INFINITY, f64::INFINITY))
                } else if (x - l).abs() <= EDGE {
                    Some(Interval::new(f64::NEG_INFINITY, 0.0))
                } else if (x - u).abs() <= EDGE {
                    Some(Interval::new(0.0, f64::INFINITY))
                } else {
                    Some(Interval::point(0.0))
                }
            }
        }
    }

    /// Closed-form `eps`-subdifferential in one dimension.
    pub fn eps_subdifferential_1d(&self, eps: f64, x: f64) -> Option<Interval> {
        if eps == 0.0 {
            return self.subdifferential_1d(x);
        }
        match *self {
            BuiltinFunction::Quadratic { a } => {
                let r = (2.0 * a * eps).sqrt();
                Some(Interval::new(a * x - r, a * x + r))
            }
            BuiltinFunction::Abs => Some(if x > 0.0 {
                Interval::new((1.0 - eps / x).max(-1.0), 1.0)
            } else if x < 0.0 {
                Interval::new(-1.0, (-1.0 + eps / -x).min(1.0))
            } else {
                Interval::new(-1.0, 1.0)
            }),
            BuiltinFunction::Linear { a } => Some(Interval::point(a)),
            BuiltinFunction::Indicator { l, u } => {
                if !self.value_1d(x).is_finite() {
                    return None;
                }
                let lo = if x - l > 0.0 { -eps / (x - l) } else { f64::NEG_INFINITY };
                let hi = if u - x > 0.0 { eps / (u - x) } else { f64::INFINITY };
                Some(Interval::new(lo, hi))
            }
        }
    }

    pub fn value(&self, x: &[f64]) -> ExtReal {
        x.iter().fold(ExtReal::ZERO, |acc, &v| acc + self.value_1d(v))
    }

    pub fn conjugate(&self, p: &[f64]) -> ExtReal {
        p.iter().fold(ExtReal::ZERO, |acc, &v| acc + self.conjugate_1d(v))
    }

    /// Product of the coordinate subdifferentials.
    pub fn subdifferential(&self, x: &[f64]) -> Option<Vec<Interval>> {
        x.iter().map(|&v| self.subdifferential_1d(v)).collect()
    }

    /// `f(x) + f*(x*) - <x, x*>`, the Fenchel–Young excess. `None` when either term is `+inf`.
    pub fn fenchel_young_excess(&self, x: &[f64], xstar: &[f64]) -> Option<f64> {
        let s = (self.value(x) + self.conjugate(xstar)).finite()?;
        Some(s - dot(x, xstar))
    }

    pub fn sample(&self, axes: &[GridAxis]) -> Result<GridFn> {
        self.validate()?;
        GridFn::from_fn(axes.to_vec(), |c| self.value(c))
    }

    pub fn sample_conjugate(&self, axes: &[GridAxis]) -> Result<GridFn> {
        self.validate()?;
        GridFn::from_fn(axes.to_vec(), |c| self.conjugate(c))
    }

    pub fn name(&self) -> String {
        match *self {
            BuiltinFunction::Quadratic { a } => format!("quadratic(a={a})"),
            BuiltinFunction::Abs => "abs".into(),
            BuiltinFunction::Linear { a } => format!("linear(a={a})"),
            BuiltinFunction::Indicator { l, u } => format!("indicator[{l},{u}]"),
        }
    }
}
