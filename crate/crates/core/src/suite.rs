//! The property suite: closed-form reproductions, oracle equivalence, iteration
//! structure and enlargement identities, each reported as one pass/fail outcome.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builtin::BuiltinFunction;
use crate::enlargements::{
    additivity_check, collapse_check, inclusion_check, mutual_additivity_check, sqrt_bound_check, strided_nodes,
    t_breve, t_se, transport, Biggest, Enlargement, EpsSubdifferential, Level, Sampling,
};
use crate::error::Result;
use crate::ext::ExtReal;
use crate::grid::{BifunctionGrid, GridAxis, GridFn};
use crate::iteration::{a_apply, a_iterate, stopping_bound};
use crate::operator::{operator_eval, sample_graph, OperatorGraph, OperatorSpec};
use crate::representations::{fenchel_young, fitzpatrick, mix, sigma};
use crate::transforms::{conjugate_brute, conjugate_fast, conjugate_swap_with, default_dual, TransformOptions};
use crate::Tolerances;

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Shared setup: `f = a/2 x^2` on a primal grid, `X*` on `bidual`.
pub struct Lab {
    pub primal: Vec<GridAxis>,
    pub bidual: Vec<GridAxis>,
    pub tol: Tolerances,
    pub opts: TransformOptions,
    pub f: BuiltinFunction,
    pub graph: OperatorGraph,
    pub fy: BifunctionGrid,
    pub fitz: BifunctionGrid,
}

impl Lab {
    pub fn new(primal: Vec<GridAxis>, bidual: Vec<GridAxis>, a: f64, tol: Tolerances) -> Result<Self> {
        let f = BuiltinFunction::Quadratic { a };
        let graph = sample_graph(&OperatorSpec::Subdifferential(f), &primal, &bidual)?;
        let fy = fenchel_young(&f, &primal, &bidual)?;
        let fitz = fitzpatrick(&graph, &primal, &bidual)?;
        Ok(Lab {
            opts: tol.transform_options(),
            primal,
            bidual,
            tol,
            f,
            graph,
            fy,
            fitz,
        })
    }

    /// `[-4, 4]` with 201 points on both `X` and `X*`, `f = x^2 / 2`.
    pub fn standard() -> Result<Self> {
        let ax = vec![GridAxis::new(-4.0, 4.0, 201)?];
        Lab::new(ax.clone(), ax, 1.0, Tolerances::default())
    }

    fn cell(&self) -> f64 {
        self.bidual.iter().map(GridAxis::spacing).fold(0.0, f64::max)
    }

    /// Every `stride`-th primal node of the inner half of the box, counted from its lower
    /// corner. On 201 points and stride 4 that is 26 values per axis, ends included.
    fn inner_xs(&self, stride: usize) -> Result<Vec<Vec<f64>>> {
        if stride == 0 {
            return Err(crate::Error::InvalidArgument("stride must be positive".into()));
        }
        let per_axis: Vec<Vec<f64>> = self
            .primal
            .iter()
            .map(|a| {
                let inner: Vec<f64> = a.nodes().into_iter().filter(|v| in_half_box(&[*v], &[*a])).collect();
                inner.into_iter().step_by(stride).collect()
            })
            .collect();
        let mut out: Vec<Vec<f64>> = vec![Vec::new()];
        for vals in &per_axis {
            out = out
                .iter()
                .flat_map(|p| {
                    vals.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(*v);
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }

    fn quadratic_a(&self) -> f64 {
        match self.f {
            BuiltinFunction::Quadratic { a } => a,
            _ => 1.0,
        }
    }
}

fn in_half_box(p: &[f64], axes: &[GridAxis]) -> bool {
    p.iter().zip(axes).all(|(v, a)| {
        let mid = 0.5 * (a.min() + a.max());
        (v - mid).abs() <= 0.25 * (a.max() - a.min()) + 1e-9 * a.spacing()
    })
}

fn interior(h: &BifunctionGrid, i: usize) -> bool {
    let (x, xs) = h.point(i);
    in_half_box(&x, h.primal_axes()) && in_half_box(&xs, h.dual_axes())
}

fn outcome(id: u8, name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { id, name, pass, detail }
}

/// Closed forms of the Fenchel–Young and Fitzpatrick functions of `x^2 / 2`.
pub fn closed_forms(lab: &Lab) -> Result<Outcome> {
    let a = lab.quadratic_a();
    let tabulated = lab.f.sample(&lab.primal)?;
    let fy_grid = crate::representations::fenchel_young_grid(&tabulated, &lab.bidual, &lab.opts)?;
    let (mut e_fy, mut e_fy_grid, mut e_fz) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..lab.fy.len() {
        if !interior(&lab.fy, i) {
            continue;
        }
        let (x, xs) = lab.fy.point(i);
        let (x, xs) = (x[0], xs[0]);
        let fy = 0.5 * a * x * x + xs * xs / (2.0 * a);
        let fz = 0.25 * (x + xs) * (x + xs);
        e_fy = e_fy.max((lab.fy.at(i).to_f64() - fy).abs());
        e_fy_grid = e_fy_grid.max((fy_grid.at(i).to_f64() - fy).abs());
        if (a - 1.0).abs() < 1e-15 {
            e_fz = e_fz.max((lab.fitz.at(i).to_f64() - fz).abs());
        }
    }
    let worst = e_fy.max(e_fy_grid).max(e_fz);
    Ok(outcome(
        1,
        "closed forms of f^FY and F_{df}",
        worst <= lab.tol.tol_disc,
        format!("max interior error: f^FY {e_fy:.2e}, f^FY via grid conjugate {e_fy_grid:.2e}, F {e_fz:.2e}"),
    ))
}

/// `sigma_T` for the identity: `x^2` on the diagonal, `+inf` off it, fixed by `A`.
pub fn identity_sigma(lab: &Lab) -> Result<Outcome> {
    let g = sample_graph(&OperatorSpec::identity(1), &lab.primal, &lab.bidual)?;
    let s = sigma(&g, &lab.primal, &lab.bidual, &lab.opts)?;
    let h = &s.func;
    let cell = lab.cell();
    let (mut diag_err, mut off_total, mut off_finite, mut off_inner, mut off_inner_finite) = (0.0f64, 0, 0, 0, 0);
    for i in 0..h.len() {
        let (x, xs) = h.point(i);
        if (x[0] - xs[0]).abs() < 0.5 * cell {
            diag_err = diag_err.max((h.at(i).to_f64() - x[0] * x[0]).abs());
        } else {
            off_total += 1;
            let finite = h.at(i).is_finite();
            off_finite += finite as usize;
            if interior(h, i) {
                off_inner += 1;
                off_inner_finite += finite as usize;
            }
        }
    }
    // Off-diagonal nodes that stay finite must be ones the box truncation flagged.
    let unflagged_finite_off = (0..h.len())
        .filter(|&i| {
            let (x, xs) = h.point(i);
            (x[0] - xs[0]).abs() >= 0.5 * cell && h.at(i).is_finite() && !s.boundary_flags[i]
        })
        .count();
    let a = a_apply(h, &lab.opts)?;
    let mut fix_err = 0.0f64;
    let mut dom_diff = 0;
    for i in 0..h.len() {
        if s.boundary_flags[i] {
            continue;
        }
        match (h.at(i), a.at(i)) {
            (ExtReal::Finite(u), ExtReal::Finite(v)) => fix_err = fix_err.max((u - v).abs()),
            (ExtReal::PosInf, ExtReal::PosInf) => {}
            _ => dom_diff += 1,
        }
    }
    let pass = diag_err <= lab.tol.tol_disc
        && off_inner_finite == 0
        && unflagged_finite_off == 0
        && fix_err <= lab.tol.tol_disc
        && dom_diff == 0;
    Ok(outcome(
        2,
        "sigma_T for T = identity",
        pass,
        format!(
            "diagonal error {diag_err:.2e}; off-diagonal +inf at {}/{} nodes ({}/{} in the inner half-box, {unflagged_finite_off} finite and unflagged); |A sigma - sigma| {fix_err:.2e} and {dom_diff} domain differences over {} unflagged nodes",
            off_total - off_finite,
            off_total,
            off_inner - off_inner_finite,
            off_inner,
            s.boundary_flags.iter().filter(|b| !**b).count()
        ),
    ))
}

/// `conjugate_fast` against `conjugate_brute`, bit for bit.
pub fn oracle_equivalence(lab: &Lab) -> Result<Outcome> {
    let ax = vec![GridAxis::new(-4.0, 4.0, 101)?];
    let dual = vec![GridAxis::new(-8.0, 8.0, 101)?];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let mut cases: Vec<GridFn> = Vec::new();
    for _ in 0..50 {
        let p_inf: f64 = rng.gen_range(0.0..0.6);
        let scale: f64 = rng.gen_range(0.1..20.0);
        let mut vals: Vec<ExtReal> = (0..101)
            .map(|_| {
                if rng.gen_bool(p_inf) {
                    ExtReal::PosInf
                } else {
                    ExtReal::Finite(rng.gen_range(-scale..scale))
                }
            })
            .collect();
        let keep = rng.gen_range(0..101);
        vals[keep] = ExtReal::Finite(0.0);
        cases.push(GridFn::new(ax.clone(), vals)?);
    }
    for f in [
        BuiltinFunction::Quadratic { a: 1.0 },
        BuiltinFunction::Quadratic { a: 0.3 },
        BuiltinFunction::Abs,
        BuiltinFunction::Linear { a: 1.0 },
        BuiltinFunction::Indicator { l: -1.0, u: 1.0 },
        BuiltinFunction::Indicator { l: 0.0, u: 0.0 },
    ] {
        cases.push(f.sample(&ax)?);
    }
    let n_builtin = cases.len() - 50;
    let mut runs: Vec<(GridFn, Vec<GridAxis>)> = cases.into_iter().map(|f| (f, dual.clone())).collect();
    let lab_f = lab.f.sample(&lab.primal)?;
    let lab_dual = default_dual(lab_f.axes())?;
    runs.push((lab_f, lab_dual));
    let mut mismatches = 0;
    for (f, dual) in &runs {
        let a = conjugate_fast(f, dual)?;
        let b = conjugate_brute(f, dual)?;
        let same = a
            .values
            .values()
            .iter()
            .zip(b.values.values())
            .all(|(u, v)| u.to_f64().to_bits() == v.to_f64().to_bits())
            && a.boundary_flags == b.boundary_flags;
        mismatches += !same as usize;
    }
    Ok(outcome(
        3,
        "fast conjugate equals brute force bit for bit",
        mismatches == 0,
        format!(
            "{} functions (50 random, {n_builtin} builtin, 1 on the lab grid), {mismatches} mismatches",
            runs.len()
        ),
    ))
}

fn mix_half(lab: &Lab) -> Result<BifunctionGrid> {
    mix(&lab.fy, &lab.fitz, 0.5)
}

/// Gap halving, domain stability and the sandwich along the averaging iteration.
pub fn iteration_structure(lab: &Lab) -> Result<Outcome> {
    let h = mix_half(lab)?;
    let t = a_iterate(&h, 1e-3, 60, &lab.opts)?;
    let tol = lab.tol.tol_disc;
    let mut worst_ratio: f64 = 0.0;
    let mut increasing = 0;
    for w in t.records.windows(2) {
        if w[1].sup_gap > w[0].sup_gap {
            increasing += 1;
        }
        if w[0].sup_gap > 1e-12 {
            worst_ratio = worst_ratio.max(w[1].sup_gap / w[0].sup_gap);
        }
    }
    let dom: Vec<usize> = t.records.iter().map(|r| r.dom_size).collect();
    let dom_const = dom.windows(2).all(|w| w[0] == w[1]);
    let fin = &t.final_iterate;
    let mut sandwich: f64 = 0.0;
    for n in 1..t.iterates.len() {
        let (hn, sn) = (&t.iterates[n], &t.swaps[n]);
        for i in 0..fin.len() {
            if let Some(v) = fin.at(i).finite() {
                if let Some(lo) = sn.at(i).finite() {
                    sandwich = sandwich.max(lo - v);
                }
                if let Some(hi) = hn.at(i).finite() {
                    sandwich = sandwich.max(v - hi);
                }
            }
        }
    }
    let pass = t.converged && increasing == 0 && worst_ratio <= 0.5 + tol && dom_const && sandwich <= tol;
    let gaps: Vec<String> = t.records.iter().map(|r| format!("{:.3e}", r.sup_gap)).collect();
    Ok(outcome(
        4,
        "averaging iteration structure",
        pass,
        format!(
            "gaps [{}]; worst ratio {worst_ratio:.3}; domain sizes constant: {dom_const}; sandwich violation {sandwich:.2e}; n_final {}",
            gaps.join(", "),
            t.n_final
        ),
    ))
}

/// Bracket width at the iteration count given by the stopping bound.
pub fn stopping_criterion(lab: &Lab) -> Result<Outcome> {
    let eps = 1e-3;
    let h0 = mix_half(lab)?;
    let h1 = a_apply(&h0, &lab.opts)?;
    let gap1 = crate::iteration::gap(&h1, &lab.opts)?.sup;
    let n = stopping_bound(gap1, eps)?;
    let mut hn = h1;
    for _ in 1..n {
        hn = a_apply(&hn, &lab.opts)?;
    }
    let sn = conjugate_swap_with(&hn, &lab.opts)?.func;
    let mut width: f64 = 0.0;
    let mut common = 0;
    for (u, v) in hn.values().iter().zip(sn.values()) {
        if let Some(d) = u.finite_sub(*v) {
            common += 1;
            width = width.max(d);
        }
    }
    Ok(outcome(
        5,
        "stopping bound",
        common > 0 && width <= 2.0 * eps + lab.tol.tol_disc,
        format!("gap1 {gap1:.4e}, bound n = {n}, bracket width at n {width:.3e} over {common} nodes"),
    ))
}

fn sample_xs(lab: &Lab) -> Result<Vec<Vec<f64>>> {
    lab.inner_xs(4)
}

/// `T_breve_{f^FY} = eps-subdifferential`, and the latter against its closed-form interval.
pub fn enlargement_identities(lab: &Lab) -> Result<Outcome> {
    let tm = lab.tol.tol_member;
    let breve = t_breve(&lab.fy, tm, &lab.opts)?;
    let ed = EpsSubdifferential::new(lab.f, lab.bidual.clone(), tm)?;
    let xs = sample_xs(lab)?;
    let cell = lab.cell();
    let (mut node_diff, mut interval_miss, mut checked) = (0, 0, 0);
    for &eps in &[0.0, 0.1, 0.5, 2.0] {
        for x in &xs {
            let a = breve.members(eps, x)?;
            let b = ed.members(eps, x)?;
            checked += 1;
            if a.indices != b.indices {
                node_diff += 1;
            }
            let iv = lab
                .f
                .eps_subdifferential_1d(eps, x[0])
                .expect("quadratic is finite everywhere");
            let ok = match b.span(0) {
                Some((lo, hi)) => (lo - iv.lo).abs() <= cell && (hi - iv.hi).abs() <= cell && b.is_contiguous(),
                None => false,
            };
            interval_miss += !ok as usize;
        }
    }
    Ok(outcome(
        6,
        "enlargement identities",
        node_diff == 0 && interval_miss == 0,
        format!("{checked} (eps, x) cases over {} x values: {node_diff} node-set differences, {interval_miss} interval misses", xs.len()),
    ))
}

/// The three inclusion chains.
pub fn inclusion_theorems(lab: &Lab) -> Result<Outcome> {
    let tm = lab.tol.tol_member;
    let td = lab.tol.tol_disc;
    let breve_fz = t_breve(&lab.fitz, tm, &lab.opts)?;
    let breve_fy = t_breve(&lab.fy, tm, &lab.opts)?;
    let ed = EpsSubdifferential::new(lab.f, lab.bidual.clone(), tm)?;
    let se = t_se(&lab.graph, &lab.primal, &lab.bidual, td, &lab.opts)?;
    let be = Biggest::new(lab.graph.clone(), lab.bidual.clone(), tm)?;
    let xs = sample_xs(lab)?;
    let mut fails = [0usize; 4];
    let mut cases = 0;
    for &eps in &[0.1, 0.5, 2.0] {
        for x in &xs {
            cases += 1;
            let inner = breve_fz.members(eps / 2.0, x)?;
            fails[0] += !inclusion_check(&inner, &ed.members(eps, x)?)?.pass as usize;
            fails[1] += !inclusion_check(&inner, &se.members(eps, x)?)?.pass as usize;
            let outer = be.members(eps, x)?;
            fails[2] += !inclusion_check(&breve_fy.members(eps, x)?, &outer)?.pass as usize;
            fails[3] += !inclusion_check(&breve_fz.members(eps, x)?, &outer)?.pass as usize;
        }
    }
    Ok(outcome(
        7,
        "inclusion theorems",
        fails.iter().all(|&f| f == 0),
        format!(
            "{cases} (eps, x) cases; failures: breve_F(eps/2) in epsdiff {}, in T^SE {}, breve_FY in T^BE {}, breve_F in T^BE {}",
            fails[0], fails[1], fails[2], fails[3]
        ),
    ))
}

/// Additivity of the eps-subdifferential and of `T_breve_h`, mutual additivity of
/// `(T^BE, T^SE)` and the square-root bound for `T^BE`.
pub fn additivity_suite(lab: &Lab) -> Result<Outcome> {
    let tm = lab.tol.tol_member;
    let td = lab.tol.tol_disc;
    let s = Sampling::standard(&lab.primal, 8)?;
    let mut lines = Vec::new();
    let mut pass = true;
    let mut min_seen = f64::INFINITY;

    let ed = EpsSubdifferential::new(lab.f, lab.bidual.clone(), tm)?;
    let mut record = |name: &str, r: crate::enlargements::AdditivityReport, ok: bool| {
        pass &= ok;
        min_seen = min_seen.min(r.min_slack);
        lines.push(format!(
            "{name}: min slack {:.3e} ({})",
            r.min_slack,
            if ok { "ok" } else { "FAIL" }
        ));
    };
    let r = additivity_check(&ed, &s, 2.0 * tm)?;
    let ok = r.pass;
    record("epsdiff", r, ok);
    for (name, h) in [
        ("breve fy", lab.fy.clone()),
        ("breve fitz", lab.fitz.clone()),
        ("breve mix", mix_half(lab)?),
    ] {
        let e = t_breve(&h, tm, &lab.opts)?;
        let r = additivity_check(&e, &s, td)?;
        let ok = r.pass;
        record(name, r, ok);
    }
    let be = Biggest::new(lab.graph.clone(), lab.bidual.clone(), tm)?;
    let se = t_se(&lab.graph, &lab.primal, &lab.bidual, td, &lab.opts)?;
    let r = mutual_additivity_check(&be, &se, &s, td)?;
    let ok = r.pass;
    record("(T^BE, T^SE)", r, ok);

    let abs_graph = sample_graph(
        &OperatorSpec::Subdifferential(BuiltinFunction::Abs),
        &lab.primal,
        &lab.bidual,
    )?;
    for (name, g) in [("T^BE quadratic", lab.graph.clone()), ("T^BE abs", abs_graph)] {
        let defect = g.sampling_defect().unwrap_or(0.0);
        let be = Biggest::new(g, lab.bidual.clone(), tm)?;
        let r = sqrt_bound_check(&be, &s, defect, td)?;
        pass &= r.pass;
        lines.push(format!(
            "{name}: sqrt-bound min slack {:.3e} with graph sampling defect {defect:.1e} ({}), plain additivity min slack {:.3e}",
            r.min_sqrt_slack,
            if r.pass { "ok" } else { "FAIL" },
            r.min_slack
        ));
    }
    lines.push(format!("minimum observed slack {min_seen:.3e}"));
    Ok(outcome(8, "additivity", pass, lines.join("; ")))
}

/// 200 random transports for the eps-subdifferential of `x^2/2` and `|x|`.
pub fn transportation(lab: &Lab) -> Result<Outcome> {
    let tm = lab.tol.tol_member;
    let cell = lab.cell();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a45_9042);
    let nodes = strided_nodes(&lab.primal, 1)?;
    let inner: Vec<&Vec<f64>> = nodes
        .iter()
        .filter(|x| {
            x.iter()
                .zip(&lab.primal)
                .all(|(v, a)| v.abs() <= 0.75 * a.max().abs().max(a.min().abs()))
        })
        .collect();
    let (mut neg, mut nonmember, mut far, mut total) = (0, 0, 0, 0);
    let mut min_eps: f64 = f64::INFINITY;
    for f in [lab.f, BuiltinFunction::Abs] {
        let e = EpsSubdifferential::new(f, lab.bidual.clone(), tm)?;
        for _ in 0..100 {
            let pick = |rng: &mut ChaCha8Rng| -> (f64, Vec<f64>, Vec<f64>) {
                let eps = rng.gen_range(0.0..2.0);
                let x = inner[rng.gen_range(0..inner.len())].clone();
                let iv = f.eps_subdifferential_1d(eps, x[0]).expect("finite everywhere");
                let (lo, hi) = (iv.lo.max(lab.bidual[0].min()), iv.hi.min(lab.bidual[0].max()));
                let xs = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
                (eps, x, vec![xs])
            };
            let (e1, x1, s1) = pick(&mut rng);
            let (e2, x2, s2) = pick(&mut rng);
            let alpha = rng.gen_range(0.0..=1.0);
            let r = transport(&e, (e1, &x1, &s1), (e2, &x2, &s2), alpha)?;
            total += 1;
            min_eps = min_eps.min(r.epshat);
            neg += (r.epshat < -1e-9) as usize;
            nonmember += !r.member as usize;
            let set = e.members(r.epshat.max(0.0), &r.xhat)?;
            let d = set
                .members
                .iter()
                .map(|m| (m.xstar[0] - r.xhatstar[0]).abs())
                .fold(f64::INFINITY, f64::min);
            far += (d > cell * (1.0 + 1e-9)) as usize;
        }
    }
    Ok(outcome(
        9,
        "transportation formula",
        neg == 0 && nonmember == 0 && far == 0,
        format!("{total} instances: min eps-hat {min_eps:.3e}, {neg} negative, {nonmember} non-members, {far} farther than one cell from the grid member set"),
    ))
}

/// `E(0, x) = T(x)` for every kind.
pub fn zero_collapse(lab: &Lab) -> Result<Outcome> {
    let tm = lab.tol.tol_member;
    let xs = sample_xs(lab)?;
    let mut lines = Vec::new();
    let mut pass = true;
    for f in [lab.f, BuiltinFunction::Abs] {
        let spec = OperatorSpec::Subdifferential(f);
        let graph = if f == lab.f {
            lab.graph.clone()
        } else {
            sample_graph(&spec, &lab.primal, &lab.bidual)?
        };
        let fy = fenchel_young(&f, &lab.primal, &lab.bidual)?;
        let fz = fitzpatrick(&graph, &lab.primal, &lab.bidual)?;
        let kinds: Vec<(&str, Box<dyn Enlargement>)> = vec![
            ("epsdiff", Box::new(EpsSubdifferential::new(f, lab.bidual.clone(), tm)?)),
            ("level f^FY", Box::new(Level::new(fy.clone(), tm))),
            ("be", Box::new(Biggest::new(graph.clone(), lab.bidual.clone(), tm)?)),
            ("se", Box::new(t_se(&graph, &lab.primal, &lab.bidual, tm, &lab.opts)?)),
            ("breve f^FY", Box::new(t_breve(&fy, tm, &lab.opts)?)),
            ("breve F", Box::new(t_breve(&fz, tm, &lab.opts)?)),
        ];
        for (name, e) in &kinds {
            let mut bad = 0;
            for x in &xs {
                let image = operator_eval(&spec, x, &lab.primal)?;
                let set = e.members(0.0, x)?;
                bad += !collapse_check(&set, &image, 1.0).pass as usize;
            }
            pass &= bad == 0;
            lines.push(format!("{} {name}: {bad}", f.name()));
        }
    }
    Ok(outcome(
        10,
        "eps = 0 collapse",
        pass,
        format!("mismatches per kind over {} x values: {}", xs.len(), lines.join(", ")),
    ))
}

type Check = fn(&Lab) -> Result<Outcome>;

pub const CHECKS: [Check; 10] = [
    closed_forms,
    identity_sigma,
    oracle_equivalence,
    iteration_structure,
    stopping_criterion,
    enlargement_identities,
    inclusion_theorems,
    additivity_suite,
    transportation,
    zero_collapse,
];

/// Runs every check; an error inside a check is reported as its failure.
pub fn run_all(lab: &Lab) -> Vec<Outcome> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(k, c)| c(lab).unwrap_or_else(|e| outcome(k as u8 + 1, "error", false, e.to_string())))
        .collect()
}
