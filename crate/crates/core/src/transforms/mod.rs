//! Discrete Fenchel conjugates on grids.
//!
//! The conjugate of a grid function is the supremum over the primal grid, which
//! is always finite for a proper function. Where the true conjugate is larger
//! than the box supremum, the maximizer sits on the box boundary; such nodes are
//! flagged, and a recession test on nested boxes decides whether the true value
//! is plausibly `+inf` (see [`ConjugateResult::effective`]).

mod line;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::grid::{BifunctionGrid, GridAxis, GridFn};

use line::{conjugate_line_brute, conjugate_line_fast};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConjugateMethod {
    /// Axis-by-axis lower-hull transform, linear per line.
    #[default]
    Fast,
    /// Direct maximum over every primal node.
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformOptions {
    pub method: ConjugateMethod,
    /// Extrapolated values above this are reported as `+inf`.
    pub flag_ceiling: f64,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            method: ConjugateMethod::Fast,
            flag_ceiling: 1e6,
        }
    }
}

/// Output of a discrete conjugate.
#[derive(Debug, Clone)]
pub struct ConjugateResult {
    /// Supremum over the primal box at every dual node.
    pub values: GridFn,
    /// The supremum moves when the outermost primal layer is removed.
    pub boundary_flags: Vec<bool>,
    /// Estimate of the unrestricted supremum at flagged nodes; equals `values` elsewhere.
    pub extrapolated: Vec<ExtReal>,
}

impl ConjugateResult {
    pub fn unbounded(&self, ceiling: f64) -> Vec<bool> {
        self.boundary_flags
            .iter()
            .zip(&self.extrapolated)
            .map(|(&b, e)| b && *e > ceiling)
            .collect()
    }

    /// Box supremum with `+inf` at nodes judged unbounded.
    pub fn effective(&self, ceiling: f64) -> GridFn {
        let unb = self.unbounded(ceiling);
        self.values.map(|i, v| if unb[i] { ExtReal::PosInf } else { v })
    }

    pub fn flagged_count(&self) -> usize {
        self.boundary_flags.iter().filter(|b| **b).count()
    }
}

/// Dual grid used when none is given: each primal axis doubled about its midpoint.
pub fn default_dual(axes: &[GridAxis]) -> Result<Vec<GridAxis>> {
    axes.iter().map(|a| a.scaled(2.0)).collect()
}

pub fn conjugate_fast(f: &GridFn, dual: &[GridAxis]) -> Result<ConjugateResult> {
    conjugate_with(f, dual, ConjugateMethod::Fast)
}

pub fn conjugate_brute(f: &GridFn, dual: &[GridAxis]) -> Result<ConjugateResult> {
    conjugate_with(f, dual, ConjugateMethod::Brute)
}

pub fn conjugate_with(f: &GridFn, dual: &[GridAxis], method: ConjugateMethod) -> Result<ConjugateResult> {
    if dual.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: dual.len(),
        });
    }
    f.require_proper()?;
    let raw = f.to_f64();
    let dims: Vec<usize> = f.shape().dims().to_vec();
    let xs: Vec<Vec<f64>> = f.axes().iter().map(GridAxis::nodes).collect();
    let ps: Vec<Vec<f64>> = dual.iter().map(GridAxis::nodes).collect();

    let sup = |shrink: usize| box_sup(&raw, &dims, &xs, &ps, shrink, method);
    let m0 = sup(0).expect("full box is never empty");
    let m1 = sup(1);

    let n_min = *dims.iter().min().unwrap_or(&0);
    let k = ((n_min.saturating_sub(1)) / 20).max(1);
    let nested = if n_min > 4 * k { sup(k).zip(sup(2 * k)) } else { None };

    let mut flags = Vec::with_capacity(m0.len());
    let mut extrapolated = Vec::with_capacity(m0.len());
    for j in 0..m0.len() {
        let v0 = m0[j];
        let flagged = match &m1 {
            Some(m1) => v0 > m1[j] + 1e-12 * (1.0 + v0.abs()),
            None => true,
        };
        flags.push(flagged);
        let e = match (&nested, flagged) {
            (Some((mk, m2k)), true) => recession(v0, mk[j], m2k[j]),
            _ => ExtReal::from_f64(v0),
        };
        extrapolated.push(e);
    }
    let values = GridFn::new(dual.to_vec(), m0.into_iter().map(ExtReal::from_f64).collect())?;
    Ok(ConjugateResult {
        values,
        boundary_flags: flags,
        extrapolated,
    })
}

/// Fits `M(t) = M0 + a t + b t^2` through the suprema over boxes shrunk by
/// `0, k, 2k` layers (`t = 0, -1, -2`) and returns its maximum over `t >= 0`.
fn recession(m0: f64, mk: f64, m2k: f64) -> ExtReal {
    if !(mk.is_finite() && m2k.is_finite()) {
        return ExtReal::from_f64(m0);
    }
    let g1 = m0 - mk;
    let g2 = mk - m2k;
    let b = 0.5 * (g1 - g2);
    let a = 0.5 * (3.0 * g1 - g2);
    let tol = 1e-9 * (1.0 + m0.abs());
    if a <= tol {
        ExtReal::from_f64(m0)
    } else if b >= -tol {
        ExtReal::PosInf
    } else {
        ExtReal::from_f64(m0 + a * a / (-4.0 * b))
    }
}

/// Supremum over the primal sub-box obtained by dropping `shrink` layers on every side.
/// `None` if that box is empty.
fn box_sup(
    raw: &[f64],
    dims: &[usize],
    xs: &[Vec<f64>],
    ps: &[Vec<f64>],
    shrink: usize,
    method: ConjugateMethod,
) -> Option<Vec<f64>> {
    if dims.iter().any(|&n| n <= 2 * shrink) {
        return None;
    }
    let sub_dims: Vec<usize> = dims.iter().map(|n| n - 2 * shrink).collect();
    let sub_xs: Vec<&[f64]> = xs.iter().map(|x| &x[shrink..x.len() - shrink]).collect();
    let data = if shrink == 0 {
        raw.to_vec()
    } else {
        extract_subbox(raw, dims, shrink, &sub_dims)
    };
    let ps: Vec<&[f64]> = ps.iter().map(Vec::as_slice).collect();
    let out = match method {
        ConjugateMethod::Fast => transform_fast(data, sub_dims, &sub_xs, &ps),
        ConjugateMethod::Brute => transform_brute(&data, &sub_dims, &sub_xs, &ps),
    };
    Some(out)
}

fn extract_subbox(raw: &[f64], dims: &[usize], shrink: usize, sub_dims: &[usize]) -> Vec<f64> {
    let m = dims.len();
    let total: usize = sub_dims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; m];
    for _ in 0..total {
        let mut flat = 0;
        for k in 0..m {
            flat = flat * dims[k] + idx[k] + shrink;
        }
        out.push(raw[flat]);
        for k in (0..m).rev() {
            idx[k] += 1;
            if idx[k] < sub_dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

/// Factored transform: one line transform per axis, last axis first. Later
/// stages negate the partial maxima so that each node value is accumulated as
/// `x0*p0 + (x1*p1 + (... + (x_{m-1} p_{m-1} - f)))`, the same association the
/// brute-force route uses.
fn transform_fast(mut data: Vec<f64>, mut dims: Vec<usize>, xs: &[&[f64]], ps: &[&[f64]]) -> Vec<f64> {
    let m = dims.len();
    for k in (0..m).rev() {
        let n = dims[k];
        let np = ps[k].len();
        let outer: usize = dims[..k].iter().product();
        let inner: usize = dims[k + 1..].iter().product();
        let mut out = vec![0.0; outer * np * inner];
        let mut fline = vec![0.0; n];
        let mut oline = vec![0.0; np];
        let negate = k + 1 != m;
        for o in 0..outer {
            for r in 0..inner {
                for (t, slot) in fline.iter_mut().enumerate() {
                    let v = data[(o * n + t) * inner + r];
                    *slot = if negate { -v } else { v };
                }
                conjugate_line_fast(xs[k], &fline, ps[k], &mut oline);
                for (j, v) in oline.iter().enumerate() {
                    out[(o * np + j) * inner + r] = *v;
                }
            }
        }
        data = out;
        dims[k] = np;
    }
    data
}

fn transform_brute(data: &[f64], dims: &[usize], xs: &[&[f64]], ps: &[&[f64]]) -> Vec<f64> {
    let m = dims.len();
    if m == 1 {
        let mut out = vec![0.0; ps[0].len()];
        conjugate_line_brute(xs[0], data, ps[0], &mut out);
        return out;
    }
    let mut finite: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut idx = vec![0usize; m];
    for &v in data {
        if v != f64::INFINITY {
            finite.push(((0..m).map(|k| xs[k][idx[k]]).collect(), v));
        }
        for k in (0..m).rev() {
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    let pdims: Vec<usize> = ps.iter().map(|p| p.len()).collect();
    let total: usize = pdims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut pidx = vec![0usize; m];
    let mut p = vec![0.0; m];
    for _ in 0..total {
        for k in 0..m {
            p[k] = ps[k][pidx[k]];
        }
        let mut best = f64::NEG_INFINITY;
        for (x, f) in &finite {
            let mut v = x[m - 1] * p[m - 1] - f;
            for k in (0..m - 1).rev() {
                v += x[k] * p[k];
            }
            if v > best {
                best = v;
            }
        }
        out.push(best);
        for k in (0..m).rev() {
            pidx[k] += 1;
            if pidx[k] < pdims[k] {
                break;
            }
            pidx[k] = 0;
        }
    }
    out
}

/// `f**` evaluated back on the primal grid, using box suprema at both stages.
pub fn biconjugate(f: &GridFn, dual: &[GridAxis]) -> Result<GridFn> {
    let c = conjugate_fast(f, dual)?;
    Ok(conjugate_fast(&c.values, f.axes())?.values)
}

/// Conjugate of a bifunction composed with the swap `(x, x*) -> (x*, x)`.
#[derive(Debug, Clone)]
pub struct SwapResult {
    /// `h* o i` with `+inf` at nodes judged unbounded.
    pub func: BifunctionGrid,
    /// Box suprema, a lower bound for `h* o i` everywhere.
    pub raw: BifunctionGrid,
    pub boundary_flags: Vec<bool>,
    pub unbounded: Vec<bool>,
}

pub fn conjugate_swap(h: &BifunctionGrid) -> Result<SwapResult> {
    conjugate_swap_with(h, &TransformOptions::default())
}

/// `h*(x*, x)` on the grid of `h`. The conjugate variable pairs with `(y, y*)`,
/// so its axes are `X*` then `X`; the result is transposed back to `(x, x*)`.
pub fn conjugate_swap_with(h: &BifunctionGrid, opts: &TransformOptions) -> Result<SwapResult> {
    let dual: Vec<GridAxis> = h.dual_axes().iter().chain(h.primal_axes()).copied().collect();
    let c = conjugate_with(h.base(), &dual, opts.method)?;
    let unb = c.unbounded(opts.flag_ceiling);
    let (np, nd) = (h.primal_len(), h.dual_len());
    let swap = |v: &[ExtReal]| -> Vec<ExtReal> {
        let mut out = vec![ExtReal::ZERO; v.len()];
        for xs in 0..nd {
            for x in 0..np {
                out[x * nd + xs] = v[xs * np + x];
            }
        }
        out
    };
    let swap_b = |v: &[bool]| -> Vec<bool> {
        let mut out = vec![false; v.len()];
        for xs in 0..nd {
            for x in 0..np {
                out[x * nd + xs] = v[xs * np + x];
            }
        }
        out
    };
    let axes = h.base().axes().to_vec();
    let raw_vals = swap(c.values.values());
    let eff_vals: Vec<ExtReal> = raw_vals
        .iter()
        .zip(swap_b(&unb))
        .map(|(&v, u)| if u { ExtReal::PosInf } else { v })
        .collect();
    Ok(SwapResult {
        func: BifunctionGrid::new(GridFn::new(axes.clone(), eff_vals)?, h.d())?,
        raw: BifunctionGrid::new(GridFn::new(axes, raw_vals)?, h.d())?,
        boundary_flags: swap_b(&c.boundary_flags),
        unbounded: swap_b(&unb),
    })
}

/// Node-wise sum; `+inf` absorbs.
pub fn sum(f: &GridFn, g: &GridFn) -> Result<GridFn> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    Ok(f.map(|i, v| v + g.at(i)))
}

/// `(f box g)(z) = min_{x + y = z} f(x) + g(y)` with `x + y` rounded to the nearest node.
/// Sums falling outside the box are dropped.
pub fn inf_convolution(f: &GridFn, g: &GridFn) -> Result<GridFn> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    f.require_proper()?;
    g.require_proper()?;
    let axes = f.axes();
    let fin = |h: &GridFn| -> Vec<(Vec<f64>, f64)> {
        (0..h.len())
            .filter_map(|i| h.at(i).finite().map(|v| (h.coords(i), v)))
            .collect()
    };
    let (ff, gf) = (fin(f), fin(g));
    let mut out = vec![ExtReal::PosInf; f.len()];
    let mut idx = vec![0usize; axes.len()];
    for (x, fv) in &ff {
        'pairs: for (y, gv) in &gf {
            for (k, a) in axes.iter().enumerate() {
                let z = x[k] + y[k];
                if !a.contains(z) {
                    continue 'pairs;
                }
                idx[k] = a.nearest(z);
            }
            let flat = f.shape().flat(&idx)?;
            let v = ExtReal::Finite(fv + gv);
            if v < out[flat] {
                out[flat] = v;
            }
        }
    }
    GridFn::new(axes.to_vec(), out)
}
