//! Browser bindings. Every export takes plain numbers or a function spec in the config
//! JSON shape (`{"kind":"quadratic","a":1}`) and returns a JSON string.

use std::cell::RefCell;
use std::rc::Rc;

use convrep::enlargements::{t_breve, t_se, Biggest, Enlargement, EpsSubdifferential};
use convrep::iteration::{a_iterate, stopping_bound};
use convrep::representations::{fenchel_young, fitzpatrick, mix, sigma};
use convrep::transforms::conjugate_fast;
use convrep::{sample_graph, BifunctionGrid, BuiltinFunction, GridAxis, OperatorSpec, TransformOptions};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Res<T> = Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn function(spec: &str) -> Res<BuiltinFunction> {
    serde_json::from_str(spec).map_err(err)
}

fn axis(half_width: f64, points: usize) -> Res<Vec<GridAxis>> {
    Ok(vec![GridAxis::new(-half_width, half_width, points).map_err(err)?])
}

fn finite_or_null(v: convrep::ExtReal) -> Value {
    v.finite().map_or(Value::Null, Value::from)
}

/// `f` on `[-4, 4]`, its grid conjugate on `[-8, 8]` and the closed-form conjugate.
pub fn conjugate_curve_json(spec: &str, points: usize) -> Res<String> {
    let f = function(spec)?;
    let primal = axis(4.0, points)?;
    let dual = axis(8.0, points)?;
    let sampled = f.sample(&primal).map_err(err)?;
    let c = conjugate_fast(&sampled, &dual).map_err(err)?;
    let eff = c.effective(TransformOptions::default().flag_ceiling);
    let p = dual[0].nodes();
    Ok(json!({
        "name": f.name(),
        "x": primal[0].nodes(),
        "f": sampled.values().iter().map(|v| finite_or_null(*v)).collect::<Vec<_>>(),
        "p": p,
        "conjugate": eff.values().iter().map(|v| finite_or_null(*v)).collect::<Vec<_>>(),
        "exact": p.iter().map(|&q| finite_or_null(f.conjugate(&[q]))).collect::<Vec<_>>(),
        "flagged": c.boundary_flags,
    })
    .to_string())
}

type Kinds = Vec<(&'static str, Box<dyn Enlargement>)>;

fn build_kinds(f: BuiltinFunction, ax: &[GridAxis]) -> Res<Kinds> {
    let opts = TransformOptions::default();
    let tol = 1e-6;
    let g = sample_graph(&OperatorSpec::Subdifferential(f), ax, ax).map_err(err)?;
    let fy = fenchel_young(&f, ax, ax).map_err(err)?;
    let fz = fitzpatrick(&g, ax, ax).map_err(err)?;
    Ok(vec![
        (
            "epsdiff",
            Box::new(EpsSubdifferential::new(f, ax.to_vec(), tol).map_err(err)?),
        ),
        ("be", Box::new(Biggest::new(g.clone(), ax.to_vec(), tol).map_err(err)?)),
        ("se", Box::new(t_se(&g, ax, ax, tol, &opts).map_err(err)?)),
        ("breve_fy", Box::new(t_breve(&fy, tol, &opts).map_err(err)?)),
        ("breve_fitz", Box::new(t_breve(&fz, tol, &opts).map_err(err)?)),
    ])
}

thread_local! {
    // Slider moves reuse the representations built for the last function.
    static KINDS: RefCell<Option<(BuiltinFunction, usize, Rc<Kinds>)>> = const { RefCell::new(None) };
}

fn kinds_for(f: BuiltinFunction, points: usize, ax: &[GridAxis]) -> Res<Rc<Kinds>> {
    if let Some(k) = KINDS.with_borrow(|c| c.as_ref().filter(|c| c.0 == f && c.1 == points).map(|c| c.2.clone())) {
        return Ok(k);
    }
    let k = Rc::new(build_kinds(f, ax)?);
    KINDS.with_borrow_mut(|c| *c = Some((f, points, k.clone())));
    Ok(k)
}

/// Member sets of every enlargement kind at `(eps, x)`, with `x` snapped to the nearest node.
pub fn enlargement_sets_json(spec: &str, eps: f64, x: f64, points: usize) -> Res<String> {
    let f = function(spec)?;
    let ax = axis(4.0, points)?;
    let xs = [ax[0].node(ax[0].nearest(x))];
    let kinds = kinds_for(f, points, &ax)?;
    let mut sets = serde_json::Map::new();
    for (name, e) in kinds.iter() {
        let s = e.members(eps, &xs).map_err(err)?;
        let span = s.span(0);
        sets.insert(
            (*name).into(),
            json!({
                "count": s.len(),
                "lo": span.map(|v| v.0),
                "hi": span.map(|v| v.1),
                "xstar": s.members.iter().map(|m| m.xstar[0]).collect::<Vec<_>>(),
            }),
        );
    }
    let exact = f.eps_subdifferential_1d(eps, xs[0]);
    Ok(json!({
        "name": f.name(),
        "x": xs[0],
        "epsilon": eps,
        "exact": exact.map(|iv| [iv.lo, iv.hi]),
        "sets": sets,
    })
    .to_string())
}

/// Runs the averaging iteration from `h` (`fy`, `fitz`, `sigma` or `mix`) and returns the
/// gap trace with the final iterate as a row-major heatmap (`null` for `+inf`).
pub fn iteration_json(spec: &str, h: &str, lambda: f64, eps: f64, points: usize) -> Res<String> {
    let f = function(spec)?;
    let ax = axis(4.0, points)?;
    let opts = TransformOptions::default();
    let g = sample_graph(&OperatorSpec::Subdifferential(f), &ax, &ax).map_err(err)?;
    let start: BifunctionGrid = match h {
        "fy" => fenchel_young(&f, &ax, &ax).map_err(err)?,
        "fitz" => fitzpatrick(&g, &ax, &ax).map_err(err)?,
        "sigma" => sigma(&g, &ax, &ax, &opts).map_err(err)?.func,
        "mix" => mix(
            &fenchel_young(&f, &ax, &ax).map_err(err)?,
            &fitzpatrick(&g, &ax, &ax).map_err(err)?,
            lambda,
        )
        .map_err(err)?,
        other => return Err(format!("unknown representation {other:?}")),
    };
    let t = a_iterate(&start, eps, 60, &opts).map_err(err)?;
    let bound = match t.gap1() {
        Some(g1) if g1 > 0.0 => Some(stopping_bound(g1, eps).map_err(err)?),
        _ => None,
    };
    let fin = &t.final_iterate;
    Ok(json!({
        "axis": ax[0].nodes(),
        "gaps": t.records.iter().map(|r| r.sup_gap).collect::<Vec<_>>(),
        "converged": t.converged,
        "n_final": t.n_final,
        "stopping_bound": bound,
        "excess": (0..fin.len()).map(|i| fin.at(i).finite().map(|v| v - fin.pairing_at(i))).collect::<Vec<_>>(),
    })
    .to_string())
}

fn js(r: Res<String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn conjugate_curve(function: &str, points: usize) -> Result<String, JsError> {
    js(conjugate_curve_json(function, points))
}

#[wasm_bindgen]
pub fn enlargement_sets(function: &str, epsilon: f64, x: f64, points: usize) -> Result<String, JsError> {
    js(enlargement_sets_json(function, epsilon, x, points))
}

#[wasm_bindgen]
pub fn iteration(function: &str, h: &str, lambda: f64, epsilon: f64, points: usize) -> Result<String, JsError> {
    js(iteration_json(function, h, lambda, epsilon, points))
}
