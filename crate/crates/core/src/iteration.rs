//! The averaging operator `A h = (h + h* o i) / 2` and its iteration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::BifunctionGrid;
use crate::transforms::{conjugate_swap_with, TransformOptions};

fn average(h: &BifunctionGrid, s: &BifunctionGrid) -> Result<BifunctionGrid> {
    h.combine(s, 0.5)
}

pub fn a_apply(h: &BifunctionGrid, opts: &TransformOptions) -> Result<BifunctionGrid> {
    let s = conjugate_swap_with(h, opts)?;
    average(h, &s.func)
}

/// `h - h* o i` on the common finite domain.
#[derive(Debug, Clone)]
pub struct GapField {
    pub values: Vec<Option<f64>>,
    pub sup: f64,
    pub argmax: usize,
    pub common_domain: usize,
}

pub fn gap(h: &BifunctionGrid, opts: &TransformOptions) -> Result<GapField> {
    let s = conjugate_swap_with(h, opts)?;
    gap_between(h, &s.func)
}

fn gap_between(h: &BifunctionGrid, s: &BifunctionGrid) -> Result<GapField> {
    let values: Vec<Option<f64>> = h
        .values()
        .iter()
        .zip(s.values())
        .map(|(a, b)| a.finite_sub(*b))
        .collect();
    let mut sup = f64::NEG_INFINITY;
    let mut argmax = 0;
    let mut common_domain = 0;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = v {
            common_domain += 1;
            if *v > sup {
                sup = *v;
                argmax = i;
            }
        }
    }
    if common_domain == 0 {
        return Err(Error::EmptyCommonDomain);
    }
    Ok(GapField {
        values,
        sup,
        argmax,
        common_domain,
    })
}

/// Smallest integer `n > 1 + log2(gap1) - log2(epsilon)`, at least 1.
pub fn stopping_bound(gap1: f64, epsilon: f64) -> Result<usize> {
    if !(gap1 > 0.0 && gap1.is_finite()) {
        return Err(Error::InvalidArgument(format!("gap1 must be positive, got {gap1}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let b = 1.0 + gap1.log2() - epsilon.log2();
    Ok((b.floor() + 1.0).max(1.0) as usize)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IterationRecord {
    pub n: usize,
    pub sup_gap: f64,
    pub dom_size: usize,
}

#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
    /// `A^n_final h`.
    pub final_iterate: BifunctionGrid,
    pub converged: bool,
    /// First `n` with `sup_gap(n) <= 2 epsilon`.
    pub converged_at: Option<usize>,
    pub n_final: usize,
    /// `h_0 = h, h_1 = A h, ...` up to the last gap evaluation.
    pub iterates: Vec<BifunctionGrid>,
    /// `h_n* o i` for each entry of `iterates`.
    pub swaps: Vec<BifunctionGrid>,
}

impl IterationTrace {
    pub fn gap1(&self) -> Option<f64> {
        self.records.first().map(|r| r.sup_gap)
    }
}

/// Iterates `h_n = A h_{n-1}` until the gap `h_n - h_n* o i` is at most `2 epsilon`
/// on the common domain. The final iterate is then `h_{n+1}`, which lies within
/// `epsilon` of both brackets.
pub fn a_iterate(h: &BifunctionGrid, epsilon: f64, max_n: usize, opts: &TransformOptions) -> Result<IterationTrace> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if max_n == 0 {
        return Err(Error::InvalidArgument("max_n must be at least 1".into()));
    }
    let s0 = conjugate_swap_with(h, opts)?;
    let mut iterates = vec![h.clone()];
    let mut swaps = vec![s0.func];
    let mut records = Vec::new();
    for n in 1..=max_n {
        let next = average(&iterates[n - 1], &swaps[n - 1])?;
        let s = conjugate_swap_with(&next, opts)?.func;
        let g = gap_between(&next, &s)?;
        records.push(IterationRecord {
            n,
            sup_gap: g.sup,
            dom_size: next.base().dom_size(),
        });
        let done = g.sup <= 2.0 * epsilon;
        let final_iterate = done.then(|| average(&next, &s)).transpose()?;
        iterates.push(next);
        swaps.push(s);
        if let Some(final_iterate) = final_iterate {
            return Ok(IterationTrace {
                records,
                final_iterate,
                converged: true,
                converged_at: Some(n),
                n_final: n + 1,
                iterates,
                swaps,
            });
        }
    }
    Ok(IterationTrace {
        records,
        final_iterate: iterates[max_n].clone(),
        converged: false,
        converged_at: None,
        n_final: max_n,
        iterates,
        swaps,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AutoconjugateReport {
    pub pass: bool,
    pub domain_match: bool,
    pub max_residual: f64,
    pub compared: usize,
}

/// `|h - h* o i|` over the common finite domain, with domains required to agree.
pub fn autoconjugate_check(h: &BifunctionGrid, tol: f64, opts: &TransformOptions) -> Result<AutoconjugateReport> {
    let s = conjugate_swap_with(h, opts)?;
    let mut domain_match = true;
    let mut max_residual: f64 = 0.0;
    let mut compared = 0;
    for (a, b) in h.values().iter().zip(s.func.values()) {
        match a.finite_sub(*b) {
            Some(r) => {
                compared += 1;
                max_residual = max_residual.max(r.abs());
            }
            None => domain_match &= a.is_inf() && b.is_inf(),
        }
    }
    Ok(AutoconjugateReport {
        pass: domain_match && compared > 0 && max_residual <= tol,
        domain_match,
        max_residual,
        compared,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QcReport {
    pub pass: bool,
    pub dom_h: usize,
    pub dom_swap: usize,
    pub only_in_h: usize,
    pub only_in_swap: usize,
}

/// `dom h = dom(h* o i)` as node sets; flagged swap values above the ceiling count as `+inf`.
pub fn qc_check(h: &BifunctionGrid, opts: &TransformOptions) -> Result<QcReport> {
    let s = conjugate_swap_with(h, opts)?;
    let (mut only_in_h, mut only_in_swap) = (0, 0);
    for (a, b) in h.values().iter().zip(s.func.values()) {
        match (a.is_finite(), b.is_finite()) {
            (true, false) => only_in_h += 1,
            (false, true) => only_in_swap += 1,
            _ => {}
        }
    }
    Ok(QcReport {
        pass: only_in_h == 0 && only_in_swap == 0,
        dom_h: h.base().dom_size(),
        dom_swap: s.func.base().dom_size(),
        only_in_h,
        only_in_swap,
    })
}
