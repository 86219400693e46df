//! Enlargements `E(eps, x)` of a monotone operator and checkers for their properties.
//!
//! Every kind is a membership oracle with a slack: `x*` belongs to `E(eps, x)`
//! iff `slack(eps, x, x*) >= -tol`. Member sets are always listed on a dual grid.

use serde::Serialize;

use crate::builtin::BuiltinFunction;
use crate::error::{Error, Result};
use crate::grid::{dot, BifunctionGrid, GridAxis, GridFn};
use crate::iteration::a_apply;
use crate::operator::{DualSet, OperatorGraph};
use crate::representations::sigma;
use crate::transforms::{conjugate_swap_with, conjugate_with, TransformOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnlargementKind {
    /// Sublevel set of a representation `h`.
    Level,
    /// `eps`-subdifferential of a closed-form function.
    Epsdiff,
    /// Biggest enlargement, from the graph.
    Be,
    /// Smallest enlargement, the sublevel set of `sigma_T`.
    Se,
    /// Sublevel set of `A h`.
    Breve,
}

#[derive(Debug, Clone, Serialize)]
pub struct Member {
    pub xstar: Vec<f64>,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnlargementSet {
    pub kind: EnlargementKind,
    pub epsilon: f64,
    pub x: Vec<f64>,
    pub members: Vec<Member>,
    /// Flat dual-grid index of each member.
    #[serde(skip)]
    pub indices: Vec<usize>,
    #[serde(skip)]
    pub dual_axes: Vec<GridAxis>,
}

impl EnlargementSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_index(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// Smallest and largest member coordinate along dual axis `k`.
    pub fn span(&self, k: usize) -> Option<(f64, f64)> {
        let mut it = self.members.iter().map(|m| m.xstar[k]);
        let first = it.next()?;
        Some(it.fold((first, first), |(a, b), v| (a.min(v), b.max(v))))
    }

    /// In one dimension: members form one run of consecutive dual nodes.
    pub fn is_contiguous(&self) -> bool {
        self.indices.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

fn dual_nodes(axes: &[GridAxis]) -> Result<GridFn> {
    GridFn::from_fn(axes.to_vec(), |_| crate::ext::ExtReal::ZERO)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon must be >= 0, got {eps}")))
    }
}

pub trait Enlargement {
    fn kind(&self) -> EnlargementKind;
    fn dual_axes(&self) -> &[GridAxis];
    /// Membership tolerance on the slack.
    fn tol(&self) -> f64;
    /// `-inf` when the representation is `+inf` at `(x, x*)`.
    fn slack(&self, eps: f64, x: &[f64], xstar: &[f64]) -> Result<f64>;

    fn is_member(&self, eps: f64, x: &[f64], xstar: &[f64]) -> Result<bool> {
        Ok(self.slack(eps, x, xstar)? >= -self.tol())
    }

    /// Scans every dual node.
    fn members(&self, eps: f64, x: &[f64]) -> Result<EnlargementSet> {
        check_eps(eps)?;
        let grid = dual_nodes(self.dual_axes())?;
        let mut members = Vec::new();
        let mut indices = Vec::new();
        for j in 0..grid.len() {
            let xs = grid.coords(j);
            let slack = self.slack(eps, x, &xs)?;
            if slack >= -self.tol() {
                members.push(Member { xstar: xs, slack });
                indices.push(j);
            }
        }
        Ok(EnlargementSet {
            kind: self.kind(),
            epsilon: eps,
            x: x.to_vec(),
            members,
            indices,
            dual_axes: self.dual_axes().to_vec(),
        })
    }
}

/// `L^h(eps, x) = {x* : h(x, x*) <= <x, x*> + eps}`; `x` and `x*` must be grid nodes.
#[derive(Debug, Clone)]
pub struct Level {
    h: BifunctionGrid,
    kind: EnlargementKind,
    tol: f64,
}

impl Level {
    pub fn new(h: BifunctionGrid, tol: f64) -> Self {
        Level {
            h,
            kind: EnlargementKind::Level,
            tol,
        }
    }

    pub fn representation(&self) -> &BifunctionGrid {
        &self.h
    }

    fn node(&self, x: &[f64], xstar: &[f64]) -> Result<usize> {
        let i = self.h.primal_index(x)?;
        let probe = dual_nodes(self.h.dual_axes())?;
        Ok(i * self.h.dual_len() + probe.node_index(xstar)?)
    }
}

impl Enlargement for Level {
    fn kind(&self) -> EnlargementKind {
        self.kind
    }

    fn dual_axes(&self) -> &[GridAxis] {
        self.h.dual_axes()
    }

    fn tol(&self) -> f64 {
        self.tol
    }

    fn slack(&self, eps: f64, x: &[f64], xstar: &[f64]) -> Result<f64> {
        let flat = self.node(x, xstar)?;
        Ok(match self.h.at(flat).finite() {
            Some(v) => dot(x, xstar) + eps - v,
            None => f64::NEG_INFINITY,
        })
    }

    // Reads one row of the grid instead of resolving every node.
    fn members(&self, eps: f64, x: &[f64]) -> Result<EnlargementSet> {
        check_eps(eps)?;
        let i = self.h.primal_index(x)?;
        let nd = self.h.dual_len();
        let grid = dual_nodes(self.h.dual_axes())?;
        let mut members = Vec::new();
        let mut indices = Vec::new();
        for j in 0..nd {
            if let Some(v) = self.h.at(i * nd + j).finite() {
                let xs = grid.coords(j);
                let slack = dot(x, &xs) + eps - v;
                if slack >= -self.tol {
                    members.push(Member { xstar: xs, slack });
                    indices.push(j);
                }
            }
        }
        Ok(EnlargementSet {
            kind: self.kind,
            epsilon: eps,
            x: x.to_vec(),
            members,
            indices,
            dual_axes: self.h.dual_axes().to_vec(),
        })
    }
}

/// Closed-form `eps`-subdifferential: `f(x) + f*(x*) - <x, x*> <= eps`. Any `x` in `dom f`.
#[derive(Debug, Clone)]
pub struct EpsSubdifferential {
    f: BuiltinFunction,
    dual: Vec<GridAxis>,
    tol: f64,
}

impl EpsSubdifferential {
    pub fn new(f: BuiltinFunction, dual: Vec<GridAxis>, tol: f64) -> Result<Self> {
        f.validate()?;
        Ok(EpsSubdifferential { f, dual, tol })
    }

    pub fn function(&self) -> &BuiltinFunction {
        &self.f
    }
}

impl Enlargement for EpsSubdifferential {
    fn kind(&self) -> EnlargementKind {
        EnlargementKind::Epsdiff
    }

    fn dual_axes(&self) -> &[GridAxis] {
        &self.dual
    }

    fn tol(&self) -> f64 {
        self.tol
    }

    fn slack(&self, eps: f64, x: &[f64], xstar: &[f64]) -> Result<f64> {
        if !self.f.value(x).is_finite() {
            return Err(Error::InvalidArgument(format!("x = {x:?} is outside dom f")));
        }
        Ok(match self.f.fenchel_young_excess(x, xstar) {
            Some(e) => eps - e,
            None => f64::NEG_INFINITY,
        })
    }
}

/// The definition route for the `eps`-subdifferential: `x*` is a member iff
/// `f(y) - f(x) >= <y - x, x*> - eps` for every primal node `y`. The scan over `y`
/// is the grid conjugate; dual nodes where it is judged unbounded are excluded.
pub fn eps_subdifferential_scan(
    f: &BuiltinFunction,
    eps: f64,
    x: &[f64],
    primal: &[GridAxis],
    dual: &[GridAxis],
    tol: f64,
    opts: &TransformOptions,
) -> Result<EnlargementSet> {
    check_eps(eps)?;
    let fx = f
        .value(x)
        .finite()
        .ok_or_else(|| Error::InvalidArgument(format!("x = {x:?} is outside dom f")))?;
    let conj = conjugate_with(&f.sample(primal)?, dual, opts.method)?.effective(opts.flag_ceiling);
    let mut members = Vec::new();
    let mut indices = Vec::new();
    for j in 0..conj.len() {
        if let Some(c) = conj.at(j).finite() {
            let xs = conj.coords(j);
            let slack = eps - (fx + c - dot(x, &xs));
            if slack >= -tol {
                members.push(Member { xstar: xs, slack });
                indices.push(j);
            }
        }
    }
    Ok(EnlargementSet {
        kind: EnlargementKind::Epsdiff,
        epsilon: eps,
        x: x.to_vec(),
        members,
        indices,
        dual_axes: dual.to_vec(),
    })
}

/// Biggest enlargement: `<y - x, y* - x*> >= -eps` for every graph point. Any `x`.
#[derive(Debug, Clone)]
pub struct Biggest {
    graph: OperatorGraph,
    dual: Vec<GridAxis>,
    tol: f64,
}

impl Biggest {
    pub fn new(graph: OperatorGraph, dual: Vec<GridAxis>, tol: f64) -> Result<Self> {
        if graph.d() != dual.len() {
            return Err(Error::DimensionMismatch {
                expected: dual.len(),
                got: graph.d(),
            });
        }
        Ok(Biggest { graph, dual, tol })
    }
}

impl Enlargement for Biggest {
    fn kind(&self) -> EnlargementKind {
        EnlargementKind::Be
    }

    fn dual_axes(&self) -> &[GridAxis] {
        &self.dual
    }

    fn tol(&self) -> f64 {
        self.tol
    }

    fn slack(&self, eps: f64, x: &[f64], xstar: &[f64]) -> Result<f64> {
        let mut m = f64::INFINITY;
        for (y, ys) in self.graph.pairs() {
            let v: f64 = y
                .iter()
                .zip(x)
                .zip(ys.iter().zip(xstar))
                .map(|((a, b), (c, d))| (a - b) * (c - d))
                .sum();
            m = m.min(v);
        }
        Ok(eps + m)
    }
}

/// `T^SE = L^{sigma_T}`.
pub fn t_se(
    graph: &OperatorGraph,
    primal: &[GridAxis],
    dual: &[GridAxis],
    tol: f64,
    opts: &TransformOptions,
) -> Result<Level> {
    let s = sigma(graph, primal, dual, opts)?;
    Ok(Level {
        h: s.func,
        kind: EnlargementKind::Se,
        tol,
    })
}

/// `T_breve_h = L^{A h}`.
pub fn t_breve(h: &BifunctionGrid, tol: f64, opts: &TransformOptions) -> Result<Level> {
    Ok(Level {
        h: a_apply(h, opts)?,
        kind: EnlargementKind::Breve,
        tol,
    })
}

/// `T_breve_h` from its definition: `h(x, x*) + h*(x*, x) <= 2 (<x, x*> + eps)`.
#[derive(Debug, Clone)]
pub struct BreveDirect {
    h: BifunctionGrid,
    swapped: BifunctionGrid,
    tol: f64,
}

impl BreveDirect {
    pub fn new(h: BifunctionGrid, tol: f64, opts: &TransformOptions) -> Result<Self> {
        let swapped = conjugate_swap_with(&h, opts)?.func;
        Ok(BreveDirect { h, swapped, tol })
    }
}

impl Enlargement for BreveDirect {
    fn kind(&self) -> EnlargementKind {
        EnlargementKind::Breve
    }

    fn dual_axes(&self) -> &[GridAxis] {
        self.h.dual_axes()
    }

    // The inequality is doubled, so is its tolerance.
    fn tol(&self) -> f64 {
        2.0 * self.tol
    }

    fn slack(&self, eps: f64, x: &[f64], xstar: &[f64]) -> Result<f64> {
        let i = self.h.primal_index(x)?;
        let j = dual_nodes(self.h.dual_axes())?.node_index(xstar)?;
        let flat = i * self.h.dual_len() + j;
        Ok(match (self.h.at(flat) + self.swapped.at(flat)).finite() {
            Some(v) => 2.0 * (dot(x, xstar) + eps) - v,
            None => f64::NEG_INFINITY,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportResult {
    pub xhat: Vec<f64>,
    pub xhatstar: Vec<f64>,
    pub epshat: f64,
    /// Slack of `(epshat, xhat, xhat*)` in the same enlargement.
    pub slack: f64,
    pub member: bool,
}

/// Convex combination of two members with the corrected tolerance
/// `alpha e1 + (1 - alpha) e2 + alpha (1 - alpha) <x1 - x2, x1* - x2*>`.
pub fn transport(
    e: &dyn Enlargement,
    m1: (f64, &[f64], &[f64]),
    m2: (f64, &[f64], &[f64]),
    alpha: f64,
) -> Result<TransportResult> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} not in [0,1]")));
    }
    for (eps, x, xs) in [m1, m2] {
        check_eps(eps)?;
        let slack = e.slack(eps, x, xs)?;
        if slack < -e.tol() {
            return Err(Error::NotMember {
                epsilon: eps,
                x: x.to_vec(),
                xstar: xs.to_vec(),
                slack,
            });
        }
    }
    let (e1, x1, s1) = m1;
    let (e2, x2, s2) = m2;
    let comb =
        |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(u, v)| alpha * u + (1.0 - alpha) * v).collect() };
    let xhat = comb(x1, x2);
    let xhatstar = comb(s1, s2);
    let cross: f64 = x1
        .iter()
        .zip(x2)
        .zip(s1.iter().zip(s2))
        .map(|((a, b), (c, d))| (a - b) * (c - d))
        .sum();
    let epshat = alpha * e1 + (1.0 - alpha) * e2 + alpha * (1.0 - alpha) * cross;
    let slack = e.slack(epshat.max(0.0), &xhat, &xhatstar)?;
    Ok(TransportResult {
        member: slack >= -e.tol(),
        xhat,
        xhatstar,
        epshat,
        slack,
    })
}

/// Deterministic `(eps, x)` sample set.
#[derive(Debug, Clone)]
pub struct Sampling {
    pub epsilons: Vec<f64>,
    pub xs: Vec<Vec<f64>>,
}

impl Sampling {
    /// `eps` in `{0, 0.1, 0.5, 1, 2}` and `x` at every `stride`-th primal node.
    pub fn standard(primal: &[GridAxis], stride: usize) -> Result<Self> {
        Ok(Sampling {
            epsilons: vec![0.0, 0.1, 0.5, 1.0, 2.0],
            xs: strided_nodes(primal, stride)?,
        })
    }
}

pub fn strided_nodes(primal: &[GridAxis], stride: usize) -> Result<Vec<Vec<f64>>> {
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be positive".into()));
    }
    let g = dual_nodes(primal)?;
    Ok((0..g.len())
        .filter(|&flat| g.shape().unflat(flat).iter().all(|i| i % stride == 0))
        .map(|flat| g.coords(flat))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct PairWitness {
    pub eps1: f64,
    pub x1: Vec<f64>,
    pub xstar1: Vec<f64>,
    pub eps2: f64,
    pub x2: Vec<f64>,
    pub xstar2: Vec<f64>,
    pub product: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdditivityReport {
    pub pass: bool,
    /// `min <x1 - x2, x1* - x2*> + eps1 + eps2` over sampled member pairs.
    pub min_slack: f64,
    /// `min <x1 - x2, x1* - x2*> + (sqrt(eps1 + d) + sqrt(eps2 + d))^2`, `d` the defect passed in.
    pub min_sqrt_slack: f64,
    pub pairs: usize,
    pub worst: Option<PairWitness>,
    pub worst_sqrt: Option<PairWitness>,
}

struct Cell {
    eps: f64,
    x: Vec<f64>,
    members: Vec<Vec<f64>>,
}

fn cells(e: &dyn Enlargement, s: &Sampling) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    for &eps in &s.epsilons {
        for x in &s.xs {
            let set = e.members(eps, x)?;
            out.push(Cell {
                eps,
                x: x.clone(),
                members: set.members.into_iter().map(|m| m.xstar).collect(),
            });
        }
    }
    Ok(out)
}

/// Exact minimum over member pairs of `<c, x1* - x2*>`, `c = x1 - x2`.
fn pair_min<'a>(c: &[f64], a: &'a [Vec<f64>], b: &'a [Vec<f64>]) -> Option<(f64, &'a [f64], &'a [f64])> {
    let lo = a.iter().map(|v| (dot(c, v), v)).min_by(|p, q| p.0.total_cmp(&q.0))?;
    let hi = b.iter().map(|v| (dot(c, v), v)).max_by(|p, q| p.0.total_cmp(&q.0))?;
    Some((lo.0 - hi.0, lo.1, hi.1))
}

fn pair_report(left: &[Cell], right: &[Cell], tol: f64, defect: f64) -> AdditivityReport {
    let mut min_slack = f64::INFINITY;
    let mut min_sqrt_slack = f64::INFINITY;
    let mut worst = None;
    let mut worst_sqrt = None;
    let mut pairs = 0;
    for a in left {
        for b in right {
            let c: Vec<f64> = a.x.iter().zip(&b.x).map(|(u, v)| u - v).collect();
            let Some((p, s1, s2)) = pair_min(&c, &a.members, &b.members) else {
                continue;
            };
            pairs += 1;
            let w = || PairWitness {
                eps1: a.eps,
                x1: a.x.clone(),
                xstar1: s1.to_vec(),
                eps2: b.eps,
                x2: b.x.clone(),
                xstar2: s2.to_vec(),
                product: p,
            };
            let v = p + a.eps + b.eps;
            if v < min_slack {
                min_slack = v;
                worst = Some(w());
            }
            let r = (a.eps + defect).sqrt() + (b.eps + defect).sqrt();
            let vs = p + r * r;
            if vs < min_sqrt_slack {
                min_sqrt_slack = vs;
                worst_sqrt = Some(w());
            }
        }
    }
    AdditivityReport {
        pass: min_slack >= -tol,
        min_slack,
        min_sqrt_slack,
        pairs,
        worst,
        worst_sqrt,
    }
}

/// Checks `<x1 - x2, x1* - x2*> >= -(eps1 + eps2)` over all sampled member pairs.
pub fn additivity_check(e: &dyn Enlargement, s: &Sampling, tol: f64) -> Result<AdditivityReport> {
    let c = cells(e, s)?;
    Ok(pair_report(&c, &c, tol, 0.0))
}

/// The square-root bound `<x1 - x2, x1* - x2*> >= -(sqrt eps1 + sqrt eps2)^2` for all
/// sampled member pairs, with each tolerance raised by `defect`. `pass` refers to this bound.
pub fn sqrt_bound_check(e: &dyn Enlargement, s: &Sampling, defect: f64, tol: f64) -> Result<AdditivityReport> {
    let c = cells(e, s)?;
    let mut r = pair_report(&c, &c, tol, defect);
    r.pass = r.min_sqrt_slack >= -tol;
    Ok(r)
}

/// The same inequality for pairs drawn from `e` and `f` respectively.
pub fn mutual_additivity_check(
    e: &dyn Enlargement,
    f: &dyn Enlargement,
    s: &Sampling,
    tol: f64,
) -> Result<AdditivityReport> {
    Ok(pair_report(&cells(e, s)?, &cells(f, s)?, tol, 0.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    pub pass: bool,
    pub inner_size: usize,
    pub outer_size: usize,
    pub counterexamples: Vec<Member>,
}

/// Node-set inclusion `inner ⊆ outer`.
pub fn inclusion_check(inner: &EnlargementSet, outer: &EnlargementSet) -> Result<InclusionReport> {
    if inner.dual_axes != outer.dual_axes {
        return Err(Error::GridMismatch);
    }
    let counterexamples: Vec<Member> = inner
        .indices
        .iter()
        .zip(&inner.members)
        .filter(|(j, _)| !outer.contains_index(**j))
        .map(|(_, m)| m.clone())
        .collect();
    Ok(InclusionReport {
        pass: counterexamples.is_empty(),
        inner_size: inner.len(),
        outer_size: outer.len(),
        counterexamples,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CollapseReport {
    pub pass: bool,
    /// Largest distance from a member to `T(x)`.
    pub excess: f64,
    /// Largest distance from a dual node in `T(x)` to the member set.
    pub deficit: f64,
}

/// Compares `E(0, x)` with `T(x)` up to `cells` grid cells in the max norm.
pub fn collapse_check(set: &EnlargementSet, image: &DualSet, cells: f64) -> CollapseReport {
    let cell = set.dual_axes.iter().map(GridAxis::spacing).fold(0.0, f64::max);
    let limit = cells * cell * (1.0 + 1e-9);
    let excess = set.members.iter().map(|m| image.distance(&m.xstar)).fold(0.0, f64::max);
    let in_image: Vec<Vec<f64>> = match dual_nodes(&set.dual_axes) {
        Ok(g) => (0..g.len())
            .map(|j| g.coords(j))
            .filter(|p| image.distance(p) <= 1e-9 * cell)
            .collect(),
        Err(_) => Vec::new(),
    };
    let deficit = in_image
        .iter()
        .map(|p| {
            set.members
                .iter()
                .map(|m| m.xstar.iter().zip(p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let nonempty = !set.is_empty() || image.is_empty();
    CollapseReport {
        pass: nonempty && excess <= limit && deficit <= limit,
        excess,
        deficit,
    }
}
