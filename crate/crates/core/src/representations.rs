//! Convex representations of an operator on `X x X*` grids.

use serde::Serialize;

use crate::builtin::BuiltinFunction;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::grid::{dot, BifunctionGrid, GridAxis, GridFn};
use crate::operator::OperatorGraph;
use crate::transforms::{conjugate_swap_with, conjugate_with, SwapResult, TransformOptions};

/// `f(x) + f*(x*)` from the closed forms.
pub fn fenchel_young(f: &BuiltinFunction, primal: &[GridAxis], dual: &[GridAxis]) -> Result<BifunctionGrid> {
    f.validate()?;
    BifunctionGrid::from_fn(primal, dual, |x, xs| f.value(x) + f.conjugate(xs))
}

/// `f(x) + f*(x*)` for a tabulated `f`, with `f*` from the grid conjugate on `dual`.
pub fn fenchel_young_grid(f: &GridFn, dual: &[GridAxis], opts: &TransformOptions) -> Result<BifunctionGrid> {
    let c = conjugate_with(f, dual, opts.method)?.effective(opts.flag_ceiling);
    let (np, nd) = (f.len(), c.len());
    let mut values = Vec::with_capacity(np * nd);
    for i in 0..np {
        for j in 0..nd {
            values.push(f.at(i) + c.at(j));
        }
    }
    let axes = f.axes().iter().chain(dual).copied().collect();
    BifunctionGrid::new(GridFn::new(axes, values)?, f.dim())
}

/// `max_k <y_k, x*> + <x, y*_k> - <y_k, y*_k>` over the sampled graph.
pub fn fitzpatrick(graph: &OperatorGraph, primal: &[GridAxis], dual: &[GridAxis]) -> Result<BifunctionGrid> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if graph.d() != primal.len() {
        return Err(Error::DimensionMismatch {
            expected: primal.len(),
            got: graph.d(),
        });
    }
    let terms: Vec<(&[f64], &[f64], f64)> = graph
        .pairs()
        .iter()
        .map(|(y, ys)| (y.as_slice(), ys.as_slice(), dot(y, ys)))
        .collect();
    BifunctionGrid::from_fn(primal, dual, |x, xs| {
        let mut best = f64::NEG_INFINITY;
        for (y, ys, c) in &terms {
            let v = dot(y, xs) + dot(x, ys) - c;
            if v > best {
                best = v;
            }
        }
        ExtReal::Finite(best)
    })
}

/// `sigma_T = F_T* o i`, with boundary information from the swap conjugate.
pub fn sigma(
    graph: &OperatorGraph,
    primal: &[GridAxis],
    dual: &[GridAxis],
    opts: &TransformOptions,
) -> Result<SwapResult> {
    let f = fitzpatrick(graph, primal, dual)?;
    conjugate_swap_with(&f, opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct HFamilyReport {
    /// `min h(x, x*) - <x, x*>` over all nodes; `+inf` nodes do not count.
    pub min_excess: f64,
    /// `max |h - <., .>|` over the graph points (at their nearest nodes).
    pub max_graph_residual: f64,
    pub pass_lower: bool,
    pub pass_graph: bool,
    pub pass: bool,
}

/// Checks `h >= <., .>` everywhere and `h = <., .>` on the graph.
pub fn h_family_check(h: &BifunctionGrid, graph: &OperatorGraph, tol: f64) -> Result<HFamilyReport> {
    if graph.d() != h.d() {
        return Err(Error::DimensionMismatch {
            expected: h.d(),
            got: graph.d(),
        });
    }
    let mut min_excess = f64::INFINITY;
    for i in 0..h.len() {
        if let Some(v) = h.at(i).finite() {
            min_excess = min_excess.min(v - h.pairing_at(i));
        }
    }
    let axes = h.base().axes();
    let mut max_graph_residual: f64 = 0.0;
    let mut idx = vec![0usize; axes.len()];
    for (x, xs) in graph.pairs() {
        for (k, (v, a)) in x.iter().chain(xs).zip(axes).enumerate() {
            if !a.contains(*v) {
                let mut p = x.clone();
                p.extend_from_slice(xs);
                return Err(Error::OutsideBox(p));
            }
            idx[k] = a.nearest(*v);
        }
        let flat = h.base().shape().flat(&idx)?;
        let r = match h.at(flat).finite() {
            Some(v) => (v - h.pairing_at(flat)).abs(),
            None => f64::INFINITY,
        };
        max_graph_residual = max_graph_residual.max(r);
    }
    let pass_lower = min_excess >= -tol;
    let pass_graph = max_graph_residual <= tol;
    Ok(HFamilyReport {
        min_excess,
        max_graph_residual,
        pass_lower,
        pass_graph,
        pass: pass_lower && pass_graph,
    })
}

/// `lambda h1 + (1 - lambda) h2`.
pub fn mix(h1: &BifunctionGrid, h2: &BifunctionGrid, lambda: f64) -> Result<BifunctionGrid> {
    h1.combine(h2, lambda)
}
