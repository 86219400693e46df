//! Convex representations of maximally monotone operators, computed on grids.

pub mod builtin;
pub mod config;
pub mod enlargements;
pub mod error;
pub mod ext;
pub mod grid;
pub mod io;
pub mod iteration;
pub mod operator;
pub mod representations;
pub mod suite;
pub mod transforms;

use serde::{Deserialize, Serialize};

pub use builtin::{BuiltinFunction, Interval};
pub use config::{Config, FunctionSpec, IterationSettings};
pub use error::{Error, Result};
pub use ext::ExtReal;
pub use grid::{bipairing, pairing, BifunctionGrid, GridAxis, GridFn, Shape};
pub use operator::{operator_eval, sample_graph, DualSet, LinearMap, OperatorGraph, OperatorSpec};
pub use transforms::{ConjugateMethod, ConjugateResult, SwapResult, TransformOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Accuracy of grid-discretized quantities.
    pub tol_disc: f64,
    /// Slack allowed in closed-form membership tests.
    pub tol_member: f64,
    /// Boundary-flagged conjugate values extrapolating above this are `+inf`.
    pub flag_ceiling: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_disc: 1e-2,
            tol_member: 1e-6,
            flag_ceiling: 1e6,
        }
    }
}

impl Tolerances {
    pub fn transform_options(&self) -> TransformOptions {
        TransformOptions {
            method: ConjugateMethod::Fast,
            flag_ceiling: self.flag_ceiling,
        }
    }
}
