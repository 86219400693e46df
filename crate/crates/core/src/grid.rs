//! Uniform rectangular grids, grid functions and bifunctions on `X x X*`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtReal;

/// A uniform axis `min, min + delta, ..., max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AxisRepr")]
pub struct GridAxis {
    min: f64,
    max: f64,
    points: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisRepr {
    min: f64,
    max: f64,
    points: usize,
}

impl TryFrom<AxisRepr> for GridAxis {
    type Error = Error;
    fn try_from(r: AxisRepr) -> Result<Self> {
        GridAxis::new(r.min, r.max, r.points)
    }
}

impl GridAxis {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidAxis(format!("non-finite bounds [{min}, {max}]")));
        }
        if min >= max {
            return Err(Error::InvalidAxis(format!("min {min} must be < max {max}")));
        }
        if points < 2 {
            return Err(Error::InvalidAxis(format!("points = {points}, need at least 2")));
        }
        Ok(GridAxis { min, max, points })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    /// Coordinate of node `i`. Always the same single expression, so coordinates
    /// are reproducible across every caller.
    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.min + i as f64 * ((self.max - self.min) / (self.points - 1) as f64)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = 1e-9 * self.spacing();
        x >= self.min - slack && x <= self.max + slack
    }

    /// Nearest node index, clamped to the axis.
    pub fn nearest(&self, x: f64) -> usize {
        let t = ((x - self.min) / self.spacing()).round();
        t.clamp(0.0, (self.points - 1) as f64) as usize
    }

    /// Index of the node equal to `x` up to `1e-9` of a cell.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let i = self.nearest(x);
        ((self.node(i) - x).abs() <= 1e-9 * self.spacing()).then_some(i)
    }

    /// Same axis scaled about its midpoint.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mid = 0.5 * (self.min + self.max);
        let half = 0.5 * (self.max - self.min) * factor;
        GridAxis::new(mid - half, mid + half, self.points)
    }
}

/// Row-major shape helper (last axis fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl Shape {
    pub fn new(dims: Vec<usize>) -> Self {
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Shape { dims, strides }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flat(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.dims.len() || index.iter().zip(&self.dims).any(|(i, n)| i >= n) {
            return Err(Error::OutOfBounds {
                index: index.to_vec(),
                shape: self.dims.clone(),
            });
        }
        Ok(index.iter().zip(&self.strides).map(|(i, s)| i * s).sum())
    }

    pub fn unflat(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for (k, s) in self.strides.iter().enumerate() {
            idx[k] = flat / s;
            flat %= s;
        }
        idx
    }
}

fn shape_of(axes: &[GridAxis]) -> Shape {
    Shape::new(axes.iter().map(GridAxis::points).collect())
}

/// Extended-real function sampled on a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    axes: Vec<GridAxis>,
    shape: Shape,
    values: Vec<ExtReal>,
}

impl GridFn {
    pub fn new(axes: Vec<GridAxis>, values: Vec<ExtReal>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidAxis("a grid needs at least one axis".into()));
        }
        let shape = shape_of(&axes);
        if values.len() != shape.len() {
            return Err(Error::ShapeMismatch {
                expected: shape.len(),
                got: values.len(),
            });
        }
        Ok(GridFn { axes, shape, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn(axes: Vec<GridAxis>, mut f: impl FnMut(&[f64]) -> ExtReal) -> Result<Self> {
        let shape = shape_of(&axes);
        let mut coords = vec![0.0; axes.len()];
        let mut values = Vec::with_capacity(shape.len());
        for flat in 0..shape.len() {
            fill_coords(&axes, &shape, flat, &mut coords);
            values.push(f(&coords));
        }
        GridFn::new(axes, values)
    }

    pub fn axes(&self) -> &[GridAxis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn eval(&self, index: &[usize]) -> Result<ExtReal> {
        Ok(self.values[self.shape.flat(index)?])
    }

    pub fn at(&self, flat: usize) -> ExtReal {
        self.values[flat]
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        let mut c = vec![0.0; self.axes.len()];
        fill_coords(&self.axes, &self.shape, flat, &mut c);
        c
    }

    /// Flat index of the node at `point`, if `point` is a node.
    pub fn node_index(&self, point: &[f64]) -> Result<usize> {
        if point.len() != self.axes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.axes.len(),
                got: point.len(),
            });
        }
        let idx = point
            .iter()
            .zip(&self.axes)
            .map(|(&x, a)| a.index_of(x))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::OffGrid(point.to_vec()))?;
        self.shape.flat(&idx)
    }

    pub fn is_proper(&self) -> bool {
        self.values.iter().any(|v| v.is_finite())
    }

    pub fn require_proper(&self) -> Result<()> {
        if self.is_proper() {
            Ok(())
        } else {
            Err(Error::Improper)
        }
    }

    /// Discrete effective domain as a mask.
    pub fn domain(&self) -> Vec<bool> {
        self.values.iter().map(|v| v.is_finite()).collect()
    }

    pub fn dom_size(&self) -> usize {
        self.values.iter().filter(|v| v.is_finite()).count()
    }

    pub fn same_grid(&self, other: &GridFn) -> bool {
        self.axes == other.axes
    }

    pub fn map(&self, mut f: impl FnMut(usize, ExtReal) -> ExtReal) -> GridFn {
        GridFn {
            axes: self.axes.clone(),
            shape: self.shape.clone(),
            values: self.values.iter().enumerate().map(|(i, &v)| f(i, v)).collect(),
        }
    }

    pub(crate) fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64()).collect()
    }
}

fn fill_coords(axes: &[GridAxis], shape: &Shape, mut flat: usize, out: &mut [f64]) {
    for (k, s) in shape.strides().iter().enumerate() {
        out[k] = axes[k].node(flat / s);
        flat %= s;
    }
}

/// A grid function on `X x X*`: the first `d` axes discretize `X`, the last `d` discretize `X*`.
#[derive(Debug, Clone, PartialEq)]
pub struct BifunctionGrid {
    base: GridFn,
    split: usize,
}

impl BifunctionGrid {
    pub fn new(base: GridFn, split: usize) -> Result<Self> {
        if split == 0 || base.dim() != 2 * split {
            return Err(Error::InvalidAxis(format!(
                "bifunction needs 2d axes with d >= 1, got {} axes split at {split}",
                base.dim()
            )));
        }
        Ok(BifunctionGrid { base, split })
    }

    /// Samples `h(x, x*)` on `primal x dual`.
    pub fn from_fn(
        primal: &[GridAxis],
        dual: &[GridAxis],
        mut h: impl FnMut(&[f64], &[f64]) -> ExtReal,
    ) -> Result<Self> {
        if primal.len() != dual.len() {
            return Err(Error::DimensionMismatch {
                expected: primal.len(),
                got: dual.len(),
            });
        }
        let d = primal.len();
        let axes: Vec<GridAxis> = primal.iter().chain(dual).copied().collect();
        let base = GridFn::from_fn(axes, |c| h(&c[..d], &c[d..]))?;
        BifunctionGrid::new(base, d)
    }

    pub fn base(&self) -> &GridFn {
        &self.base
    }

    pub fn into_base(self) -> GridFn {
        self.base
    }

    /// Dimension `d` of `X`.
    pub fn d(&self) -> usize {
        self.split
    }

    pub fn primal_axes(&self) -> &[GridAxis] {
        &self.base.axes[..self.split]
    }

    pub fn dual_axes(&self) -> &[GridAxis] {
        &self.base.axes[self.split..]
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn values(&self) -> &[ExtReal] {
        self.base.values()
    }

    pub fn at(&self, flat: usize) -> ExtReal {
        self.base.at(flat)
    }

    /// Splits a flat node index into `(x, x*)` coordinates.
    pub fn point(&self, flat: usize) -> (Vec<f64>, Vec<f64>) {
        let mut c = self.base.coords(flat);
        let xs = c.split_off(self.split);
        (c, xs)
    }

    /// Number of dual nodes; flat index = primal_flat * dual_len + dual_flat.
    pub fn dual_len(&self) -> usize {
        self.dual_axes().iter().map(GridAxis::points).product()
    }

    pub fn primal_len(&self) -> usize {
        self.primal_axes().iter().map(GridAxis::points).product()
    }

    /// Flat index of the primal node `x`.
    pub fn primal_index(&self, x: &[f64]) -> Result<usize> {
        let probe = GridFn {
            axes: self.primal_axes().to_vec(),
            shape: shape_of(self.primal_axes()),
            values: Vec::new(),
        };
        probe.node_index(x)
    }

    pub fn eval_point(&self, x: &[f64], xstar: &[f64]) -> Result<ExtReal> {
        let p: Vec<f64> = x.iter().chain(xstar).copied().collect();
        Ok(self.base.at(self.base.node_index(&p)?))
    }

    pub fn same_grid(&self, other: &BifunctionGrid) -> bool {
        self.split == other.split && self.base.same_grid(&other.base)
    }

    pub fn map(&self, f: impl FnMut(usize, ExtReal) -> ExtReal) -> BifunctionGrid {
        BifunctionGrid {
            base: self.base.map(f),
            split: self.split,
        }
    }

    /// `<x, x*>` at node `flat`.
    pub fn pairing_at(&self, flat: usize) -> f64 {
        let (x, xs) = self.point(flat);
        dot(&x, &xs)
    }

    /// Node-wise convex combination `lambda * self + (1 - lambda) * other`.
    pub fn combine(&self, other: &BifunctionGrid, lambda: f64) -> Result<BifunctionGrid> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!("lambda {lambda} not in [0,1]")));
        }
        let values = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(&a, &b)| {
                // 0 * inf does not arise: a zero weight drops the term entirely.
                let wa = if lambda == 0.0 { ExtReal::ZERO } else { a.scale(lambda)? };
                let wb = if lambda == 1.0 {
                    ExtReal::ZERO
                } else {
                    b.scale(1.0 - lambda)?
                };
                Ok(wa + wb)
            })
            .collect::<Result<Vec<_>>>()?;
        BifunctionGrid::new(GridFn::new(self.base.axes.clone(), values)?, self.split)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Duality pairing `<x, x*> = sum_i x_i x*_i`.
pub fn pairing(x: &[f64], xstar: &[f64]) -> Result<f64> {
    if x.len() != xstar.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: xstar.len(),
        });
    }
    Ok(dot(x, xstar))
}

/// Pairing between `X x X*` and its dual `X* x X`:
/// `<(x, x*), (y*, y)> = <x, y*> + <y, x*>`.
pub fn bipairing(z: (&[f64], &[f64]), w: (&[f64], &[f64])) -> Result<f64> {
    let (x, xstar) = z;
    let (ystar, y) = w;
    Ok(pairing(x, ystar)? + pairing(y, xstar)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(min: f64, max: f64, n: usize) -> GridAxis {
        GridAxis::new(min, max, n).unwrap()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&[1.0], &[1.0]).unwrap(), 1.0);
        assert_eq!(pairing(&[0.0], &[7.3]).unwrap(), 0.0);
        assert_eq!(pairing(&[1.0, 2.0], &[3.0, -1.0]).unwrap(), 1.0);
        assert!(matches!(
            pairing(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bipairing_examples() {
        assert_eq!(bipairing((&[1.0], &[1.0]), (&[1.0], &[1.0])).unwrap(), 2.0);
        let (x, xs) = ([0.3, -1.2], [2.0, 0.5]);
        let swapped = bipairing((&x, &xs), (&xs, &x)).unwrap();
        assert_eq!(swapped, 2.0 * pairing(&x, &xs).unwrap());
        // z = (x, x*) = (1, 0), w = (y*, y) = (0, 2): <1, 0> + <2, 0> = 0
        assert_eq!(bipairing((&[1.0], &[0.0]), (&[0.0], &[2.0])).unwrap(), 0.0);
        // z = (1, 2), w = (0, 1): <1, 0> + <1, 2> = 2
        assert_eq!(bipairing((&[1.0], &[2.0]), (&[0.0], &[1.0])).unwrap(), 2.0);
        assert!(bipairing((&[1.0], &[1.0]), (&[1.0, 0.0], &[1.0])).is_err());
    }

    #[test]
    fn axis_invariants() {
        assert!(GridAxis::new(1.0, 1.0, 5).is_err());
        assert!(GridAxis::new(2.0, 1.0, 5).is_err());
        assert!(GridAxis::new(-1.0, 1.0, 1).is_err());
        assert!(GridAxis::new(f64::NAN, 1.0, 3).is_err());
        let a = axis(-4.0, 4.0, 201);
        assert_eq!(a.spacing(), 0.04);
        assert_eq!(a.node(0), -4.0);
        assert_eq!(a.node(200), 4.0);
        assert_eq!(a.index_of(2.0), Some(150));
        assert_eq!(a.index_of(2.01), None);
        assert_eq!(a.nearest(100.0), 200);
    }

    #[test]
    fn node_coordinates_are_deterministic() {
        let a = axis(-4.0, 4.0, 201);
        for i in 0..201 {
            let expect = -4.0 + i as f64 * ((4.0 - -4.0) / 200.0);
            assert_eq!(a.node(i).to_bits(), expect.to_bits());
        }
        let f = GridFn::from_fn(vec![a, axis(-1.0, 1.0, 3)], |c| ExtReal::Finite(c[0] + c[1])).unwrap();
        for flat in 0..f.len() {
            let c = f.coords(flat);
            let idx = f.shape().unflat(flat);
            assert_eq!(c[0].to_bits(), a.node(idx[0]).to_bits());
        }
    }

    #[test]
    fn eval_and_bounds() {
        let f = GridFn::from_fn(vec![axis(0.0, 1.0, 3)], |c| {
            if c[0] > 0.9 {
                ExtReal::PosInf
            } else {
                ExtReal::Finite(c[0])
            }
        })
        .unwrap();
        assert_eq!(f.eval(&[1]).unwrap(), 0.5);
        assert!(f.eval(&[2]).unwrap().is_inf());
        assert!(matches!(f.eval(&[3]), Err(Error::OutOfBounds { .. })));
        assert_eq!(f.dom_size(), 2);
        assert!(GridFn::new(vec![axis(0.0, 1.0, 3)], vec![ExtReal::ZERO; 2]).is_err());
    }

    #[test]
    fn bifunction_layout() {
        let x = axis(-1.0, 1.0, 3);
        let h =
            BifunctionGrid::from_fn(&[x], &[axis(-2.0, 2.0, 5)], |a, b| ExtReal::Finite(10.0 * a[0] + b[0])).unwrap();
        assert_eq!(h.d(), 1);
        assert_eq!(h.dual_len(), 5);
        let flat = 2 * 5 + 1;
        assert_eq!(h.point(flat), (vec![1.0], vec![-1.0]));
        assert_eq!(h.at(flat), 9.0);
        assert_eq!(h.eval_point(&[1.0], &[-1.0]).unwrap(), 9.0);
        assert!(BifunctionGrid::new(h.base().clone(), 2).is_err());
    }
}
