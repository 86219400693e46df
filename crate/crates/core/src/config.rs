//! JSON run configuration.
//!
//! ```json
//! {
//!   "space": {"dim": 1, "grid": {"min": -4, "max": 4, "points": 201}},
//!   "function": {"kind": "quadratic", "a": 1}
//! }
//! ```
//!
//! `space.grid` is one axis (repeated `dim` times) or a list of `dim` axes. The optional
//! `space.bidual` gives the `X*` axes of bifunctions and defaults to the primal axes.
//! `dual`, the target grid of function conjugates, defaults to the primal box doubled.
//! `operator` defaults to the subdifferential of a closed-form `function`. Relative
//! paths are resolved against the directory of the config file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use crate::builtin::BuiltinFunction;
use crate::error::{Error, Result};
use crate::grid::{GridAxis, GridFn};
use crate::io::{load_graph, load_grid};
use crate::operator::{sample_graph, LinearMap, OperatorGraph, OperatorSpec};
use crate::transforms::default_dual;
use crate::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Builtin(BuiltinFunction),
    /// A grid function read from a Grid CSV file on the primal grid.
    Tabulated {
        path: PathBuf,
        grid: GridFn,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IterationSettings {
    pub epsilon: f64,
    pub max_n: usize,
}

impl Default for IterationSettings {
    fn default() -> Self {
        IterationSettings {
            epsilon: 1e-3,
            max_n: 60,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub dim: usize,
    pub primal: Vec<GridAxis>,
    /// `X*` axes of bifunctions.
    pub bidual: Vec<GridAxis>,
    /// Target grid of function conjugates.
    pub dual: Vec<GridAxis>,
    pub function: Option<FunctionSpec>,
    pub operator: OperatorSpec,
    pub tolerances: Tolerances,
    pub iteration: IterationSettings,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    space: RawSpace,
    dual: Option<Value>,
    function: Option<Value>,
    operator: Option<Value>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    iteration: IterationSettings,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    dim: usize,
    grid: Value,
    bidual: Option<Value>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawOperator {
    Subdifferential,
    Identity,
    Linear { matrix: Vec<Vec<f64>> },
    Graph { path: PathBuf },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTabulated {
    #[allow(dead_code)]
    kind: String,
    path: PathBuf,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| schema(format!("{what}: {e}")))
}

fn axes(v: Value, dim: usize, what: &str) -> Result<Vec<GridAxis>> {
    let list: Vec<GridAxis> = match v {
        Value::Array(items) => items.into_iter().map(|a| from_value(a, what)).collect::<Result<_>>()?,
        one => vec![from_value(one, what)?; dim],
    };
    if list.len() != dim {
        return Err(schema(format!("{what}: {} axes given for dim {dim}", list.len())));
    }
    Ok(list)
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn require_file(p: &Path) -> Result<()> {
    if p.is_file() {
        Ok(())
    } else {
        Err(Error::MissingFile(p.to_path_buf()))
    }
}

impl Config {
    /// Default setting: `x^2 / 2` on `[-4, 4]` with 201 points.
    pub fn standard() -> Self {
        Config::from_json_str(
            r#"{"space": {"dim": 1, "grid": {"min": -4, "max": 4, "points": 201}},
                "function": {"kind": "quadratic", "a": 1}}"#,
            Path::new("."),
        )
        .expect("built-in config is valid")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Config::from_json_str(&text, base)
    }

    /// Parses and validates; relative paths are taken from `base`.
    pub fn from_json_str(text: &str, base: &Path) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        let dim = raw.space.dim;
        if !(1..=2).contains(&dim) {
            return Err(schema(format!("space.dim must be 1 or 2, got {dim}")));
        }
        let primal = axes(raw.space.grid, dim, "space.grid")?;
        let bidual = match raw.space.bidual {
            Some(v) => axes(v, dim, "space.bidual")?,
            None => primal.clone(),
        };
        let dual = match raw.dual {
            Some(v) => axes(v, dim, "dual")?,
            None => default_dual(&primal)?,
        };
        let t = raw.tolerances;
        if !(t.tol_disc >= 0.0 && t.tol_member >= 0.0 && t.flag_ceiling > 0.0) {
            return Err(schema("tolerances must be non-negative and flag_ceiling positive"));
        }
        let it = raw.iteration;
        if !(it.epsilon > 0.0 && it.epsilon.is_finite()) || it.max_n == 0 {
            return Err(schema("iteration needs epsilon > 0 and max_n >= 1"));
        }

        let function = match raw.function {
            None => None,
            Some(v) if v.get("kind").and_then(Value::as_str) == Some("tabulated") => {
                let r: RawTabulated = from_value(v, "function")?;
                let path = resolve(base, &r.path);
                require_file(&path)?;
                let grid = load_grid(&path)?;
                if grid.axes() != primal.as_slice() {
                    return Err(schema(format!(
                        "{} is not tabulated on the primal grid",
                        path.display()
                    )));
                }
                grid.require_proper()?;
                Some(FunctionSpec::Tabulated { path, grid })
            }
            Some(v) => Some(FunctionSpec::Builtin(from_value(v, "function")?)),
        };

        let raw_op = match raw.operator {
            Some(v) => from_value(v, "operator")?,
            None => RawOperator::Subdifferential,
        };
        let operator = match raw_op {
            RawOperator::Subdifferential => match &function {
                Some(FunctionSpec::Builtin(f)) => OperatorSpec::Subdifferential(*f),
                Some(FunctionSpec::Tabulated { .. }) => {
                    return Err(schema("operator kind \"subdifferential\" needs a closed-form function"))
                }
                None => return Err(schema("config needs a function or an operator")),
            },
            RawOperator::Identity => OperatorSpec::identity(dim),
            RawOperator::Linear { matrix } => {
                let m = LinearMap::new(matrix)?;
                if m.d() != dim {
                    return Err(schema(format!("operator matrix is {0}x{0}, dim is {dim}", m.d())));
                }
                OperatorSpec::Linear(m)
            }
            RawOperator::Graph { path } => {
                let path = resolve(base, &path);
                require_file(&path)?;
                let g = load_graph(&path)?;
                if g.d() != dim {
                    return Err(schema(format!("graph has dimension {}, dim is {dim}", g.d())));
                }
                OperatorSpec::Graph(g)
            }
        };

        Ok(Config {
            dim,
            primal,
            bidual,
            dual,
            function,
            operator,
            tolerances: t,
            iteration: it,
        })
    }

    /// The operator as a finite graph on `primal x bidual`.
    pub fn graph(&self) -> Result<OperatorGraph> {
        sample_graph(&self.operator, &self.primal, &self.bidual)
    }

    pub fn builtin(&self) -> Option<BuiltinFunction> {
        match &self.function {
            Some(FunctionSpec::Builtin(f)) => Some(*f),
            _ => None,
        }
    }

    /// The function sampled on the primal grid.
    pub fn sampled_function(&self) -> Result<GridFn> {
        match &self.function {
            Some(FunctionSpec::Builtin(f)) => f.sample(&self.primal),
            Some(FunctionSpec::Tabulated { grid, .. }) => Ok(grid.clone()),
            None => Err(schema("config has no function")),
        }
    }
}
