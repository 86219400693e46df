//! Monotone operators: closed-form kinds and finite sampled graphs.

use crate::builtin::{BuiltinFunction, Interval};
use crate::error::{Error, Result};
use crate::grid::{dot, GridAxis};

/// Finite monotone set of pairs `(x, x*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorGraph {
    d: usize,
    pairs: Vec<(Vec<f64>, Vec<f64>)>,
}

/// Pairs with `<y - x, y* - x*>` below this are rejected.
pub const MONOTONE_TOL: f64 = -1e-12;

impl OperatorGraph {
    pub fn new(pairs: Vec<(Vec<f64>, Vec<f64>)>) -> Result<Self> {
        let d = match pairs.first() {
            Some((x, _)) => x.len(),
            None => return Err(Error::EmptyGraph),
        };
        for (x, xs) in &pairs {
            for v in [x, xs] {
                if v.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: v.len(),
                    });
                }
                if v.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidArgument(format!("non-finite graph coordinate in {v:?}")));
                }
            }
        }
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                let value = monotone_product(&pairs[i], &pairs[j]);
                if value < MONOTONE_TOL {
                    return Err(Error::NotMonotone { i, j, value });
                }
            }
        }
        Ok(OperatorGraph { d, pairs })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn pairs(&self) -> &[(Vec<f64>, Vec<f64>)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// One-dimensional graphs: `max (y_{k+1} - y_k)(y*_{k+1} - y*_k) / 4` over consecutive
    /// samples. Along the segment joining two samples, `<y - x, y* - x*>` dips at most this
    /// far below the smaller endpoint value, so an `eps`-member for the samples is an
    /// `(eps + defect)`-member for the interpolated graph. `None` for `d > 1`.
    pub fn sampling_defect(&self) -> Option<f64> {
        if self.d != 1 {
            return None;
        }
        let mut pts: Vec<(f64, f64)> = self.pairs.iter().map(|(x, s)| (x[0], s[0])).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        Some(
            pts.windows(2)
                .map(|w| 0.25 * (w[1].0 - w[0].0) * (w[1].1 - w[0].1))
                .fold(0.0, f64::max),
        )
    }
}

fn monotone_product(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>)) -> f64 {
    a.0.iter()
        .zip(&b.0)
        .zip(a.1.iter().zip(&b.1))
        .map(|((x, y), (xs, ys))| (y - x) * (ys - xs))
        .sum()
}

/// Square matrix with `<Mv, v> >= 0`; skew parts are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    rows: Vec<Vec<f64>>,
}

impl LinearMap {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: r.len(),
            });
        }
        let m = LinearMap { rows };
        // Directions on the unit circle (or +-1 in one dimension) stand in for all v.
        let dirs: Vec<Vec<f64>> = match d {
            1 => vec![vec![1.0]],
            _ => (0..720)
                .map(|k| {
                    let t = k as f64 * std::f64::consts::PI / 720.0;
                    let mut v = vec![0.0; d];
                    v[0] = t.cos();
                    v[1] = t.sin();
                    v
                })
                .chain((0..d).map(|i| {
                    let mut v = vec![0.0; d];
                    v[i] = 1.0;
                    v
                }))
                .collect(),
        };
        for v in dirs {
            let value = dot(&m.apply(&v), &v);
            if value < MONOTONE_TOL {
                return Err(Error::NonMonotoneMatrix { value, v });
            }
        }
        Ok(m)
    }

    pub fn identity(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        LinearMap { rows }
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| dot(r, x)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    Subdifferential(BuiltinFunction),
    Linear(LinearMap),
    Graph(OperatorGraph),
}

impl OperatorSpec {
    pub fn identity(d: usize) -> Self {
        OperatorSpec::Linear(LinearMap::identity(d))
    }
}

/// Image `T(x)`: a coordinate box (possibly unbounded or empty) or a finite list.
#[derive(Debug, Clone, PartialEq)]
pub enum DualSet {
    Box(Vec<Interval>),
    Points(Vec<Vec<f64>>),
}

impl DualSet {
    pub fn contains(&self, xstar: &[f64], tol: f64) -> bool {
        match self {
            DualSet::Box(b) => b.iter().zip(xstar).all(|(iv, v)| iv.contains(*v, tol)),
            DualSet::Points(ps) => ps
                .iter()
                .any(|p| p.iter().zip(xstar).all(|(a, b)| (a - b).abs() <= tol)),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, DualSet::Points(p) if p.is_empty())
    }

    /// Distance from `xstar` to the set in the max norm.
    pub fn distance(&self, xstar: &[f64]) -> f64 {
        match self {
            DualSet::Box(b) => b
                .iter()
                .zip(xstar)
                .map(|(iv, &v)| (iv.lo - v).max(v - iv.hi).max(0.0))
                .fold(0.0, f64::max),
            DualSet::Points(ps) => ps
                .iter()
                .map(|p| p.iter().zip(xstar).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

fn spec_dim(spec: &OperatorSpec) -> Option<usize> {
    match spec {
        OperatorSpec::Subdifferential(_) => None,
        OperatorSpec::Linear(m) => Some(m.d()),
        OperatorSpec::Graph(g) => Some(g.d()),
    }
}

/// Closed-form `T(x)`. Graph operators return the exact matches of `x`.
pub fn operator_eval(spec: &OperatorSpec, x: &[f64], primal: &[GridAxis]) -> Result<DualSet> {
    if x.len() != primal.len() {
        return Err(Error::DimensionMismatch {
            expected: primal.len(),
            got: x.len(),
        });
    }
    if let Some(d) = spec_dim(spec) {
        if d != x.len() {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: x.len(),
            });
        }
    }
    if !x.iter().zip(primal).all(|(v, a)| a.contains(*v)) {
        return Err(Error::OutsideBox(x.to_vec()));
    }
    Ok(match spec {
        OperatorSpec::Subdifferential(f) => match f.subdifferential(x) {
            Some(b) => DualSet::Box(b),
            None => DualSet::Points(Vec::new()),
        },
        OperatorSpec::Linear(m) => DualSet::Points(vec![m.apply(x)]),
        OperatorSpec::Graph(g) => DualSet::Points(
            g.pairs()
                .iter()
                .filter(|(y, _)| y.iter().zip(x).all(|(a, b)| (a - b).abs() <= 1e-9))
                .map(|(_, ys)| ys.clone())
                .collect(),
        ),
    })
}

/// Samples `gph(T)` at every primal node. Interval images are sampled at the dual
/// nodes they contain plus their finite endpoints; points outside the dual box are dropped.
pub fn sample_graph(spec: &OperatorSpec, primal: &[GridAxis], dual: &[GridAxis]) -> Result<OperatorGraph> {
    if primal.len() != dual.len() {
        return Err(Error::DimensionMismatch {
            expected: primal.len(),
            got: dual.len(),
        });
    }
    if let OperatorSpec::Graph(g) = spec {
        return Ok(g.clone());
    }
    let inside = |p: &[f64]| p.iter().zip(dual).all(|(v, a)| a.contains(*v));
    let grid = crate::grid::GridFn::from_fn(primal.to_vec(), |_| crate::ext::ExtReal::ZERO)?;
    let mut pairs = Vec::new();
    for flat in 0..grid.len() {
        let x = grid.coords(flat);
        match operator_eval(spec, &x, primal)? {
            DualSet::Points(ps) => {
                for p in ps.into_iter().filter(|p| inside(p)) {
                    pairs.push((x.clone(), p));
                }
            }
            DualSet::Box(b) => {
                let per_axis: Vec<Vec<f64>> = b.iter().zip(dual).map(|(iv, a)| sample_interval(iv, a)).collect();
                for p in cartesian(&per_axis) {
                    pairs.push((x.clone(), p));
                }
            }
        }
    }
    OperatorGraph::new(pairs)
}

fn sample_interval(iv: &Interval, axis: &GridAxis) -> Vec<f64> {
    if iv.is_point() {
        return if axis.contains(iv.lo) { vec![iv.lo] } else { Vec::new() };
    }
    let tol = 1e-9 * axis.spacing();
    let mut out = Vec::new();
    if iv.lo.is_finite() && axis.contains(iv.lo) {
        out.push(iv.lo);
    }
    for v in axis.nodes() {
        if iv.contains(v, 0.0) && out.last().is_none_or(|l| v - l > tol) {
            out.push(v);
        }
    }
    if iv.hi.is_finite() && axis.contains(iv.hi) && out.last().is_none_or(|l| iv.hi - l > tol) {
        out.push(iv.hi);
    }
    out
}

fn cartesian(sets: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for s in sets {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                s.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ax() -> Vec<GridAxis> {
        vec![GridAxis::new(-4.0, 4.0, 201).unwrap()]
    }

    #[test]
    fn eval_examples() {
        let q = OperatorSpec::Subdifferential(BuiltinFunction::Quadratic { a: 1.0 });
        assert_eq!(
            operator_eval(&q, &[2.0], &ax()).unwrap(),
            DualSet::Box(vec![Interval::point(2.0)])
        );
        let a = OperatorSpec::Subdifferential(BuiltinFunction::Abs);
        assert_eq!(
            operator_eval(&a, &[0.0], &ax()).unwrap(),
            DualSet::Box(vec![Interval::new(-1.0, 1.0)])
        );
        let id = OperatorSpec::identity(1);
        assert_eq!(
            operator_eval(&id, &[1.0], &ax()).unwrap(),
            DualSet::Points(vec![vec![1.0]])
        );
        assert!(matches!(operator_eval(&id, &[5.0], &ax()), Err(Error::OutsideBox(_))));
    }

    #[test]
    fn monotonicity_gate() {
        assert!(OperatorGraph::new(vec![(vec![0.0], vec![1.0]), (vec![1.0], vec![0.0])]).is_err());
        assert!(OperatorGraph::new(vec![(vec![0.0], vec![0.0]), (vec![1.0], vec![1.0])]).is_ok());
        assert!(matches!(OperatorGraph::new(vec![]), Err(Error::EmptyGraph)));
        assert!(LinearMap::new(vec![vec![0.0, 1.0], vec![-1.0, 0.0]]).is_ok());
        assert!(LinearMap::new(vec![vec![1.0, 3.0], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn sampling_defects() {
        let id = sample_graph(&OperatorSpec::identity(1), &ax(), &ax()).unwrap();
        assert!((id.sampling_defect().unwrap() - 0.0004).abs() < 1e-12);
        let a = sample_graph(&OperatorSpec::Subdifferential(BuiltinFunction::Abs), &ax(), &ax()).unwrap();
        assert_eq!(a.sampling_defect().unwrap(), 0.0);
    }

    #[test]
    fn abs_graph_has_vertical_segment() {
        let a = OperatorSpec::Subdifferential(BuiltinFunction::Abs);
        let g = sample_graph(&a, &ax(), &ax()).unwrap();
        let at_zero: Vec<f64> = g
            .pairs()
            .iter()
            .filter(|(x, _)| x[0] == 0.0)
            .map(|(_, s)| s[0])
            .collect();
        assert_eq!(at_zero.len(), 51);
        assert_eq!(at_zero[0], -1.0);
        assert_eq!(*at_zero.last().unwrap(), 1.0);
        assert_eq!(g.len(), 200 + 51);
    }

    #[test]
    fn indicator_graph_has_normal_rays() {
        let f = OperatorSpec::Subdifferential(BuiltinFunction::Indicator { l: -1.0, u: 1.0 });
        let g = sample_graph(&f, &ax(), &ax()).unwrap();
        let at_u = g.pairs().iter().filter(|(x, _)| (x[0] - 1.0).abs() < 1e-12).count();
        assert_eq!(at_u, 101);
        assert!(g.pairs().iter().all(|(x, _)| x[0].abs() <= 1.0 + 1e-12));
    }
}
