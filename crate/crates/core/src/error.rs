use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("0 * (+inf) is undefined")]
    ZeroTimesInfinity,
    #[error("negative multiple of +inf would produce -inf")]
    NegativeTimesInfinity,
    #[error("value {0} is not an extended real in R u {{+inf}}")]
    NotExtendedReal(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid grid axis: {0}")]
    InvalidAxis(String),
    #[error("grid index {index:?} out of bounds for shape {shape:?}")]
    OutOfBounds { index: Vec<usize>, shape: Vec<usize> },
    #[error("point {0:?} is not a grid node")]
    OffGrid(Vec<f64>),
    #[error("point {0:?} lies outside the grid box")]
    OutsideBox(Vec<f64>),
    #[error("function is not proper (every node is +inf)")]
    Improper,
    #[error("values length {got} does not match grid size {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("operator graph is empty")]
    EmptyGraph,
    #[error("graph is not monotone: pairs {i} and {j} give <y-x, y*-x*> = {value:e}")]
    NotMonotone { i: usize, j: usize, value: f64 },
    #[error("linear operator is not monotone: <Mv, v> = {value:e} at v = {v:?}")]
    NonMonotoneMatrix { value: f64, v: Vec<f64> },
    #[error("no common finite domain")]
    EmptyCommonDomain,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("({epsilon}, {x:?}, {xstar:?}) is not a member of the enlargement (slack {slack:e})")]
    NotMember {
        epsilon: f64,
        x: Vec<f64>,
        xstar: Vec<f64>,
        slack: f64,
    },
    #[error("dual grids differ")]
    GridMismatch,
    #[error("config: {0}")]
    Config(String),
    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
