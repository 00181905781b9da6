//! Small sets with large partial-sum integrals, and limits over interval unions.
//!
//! A witness set `Q` collects the nonnegative Dirichlet cells of order `n`
//! closest to the origin until its measure reaches `2/(2N0+1)`. For the
//! `1/ln n` family `∫_Q S_n` stays bounded away from zero as `N0` grows, so
//! the partial sums are not uniformly integrable.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::ConvexSequence;
use crate::diagnostics::{analyze_trace, ConvergenceVerdict};
use crate::error::{Error, Result};
use crate::kernels::dirichlet;
use crate::quadrature::{cell_pieces, integrate_signed, norm_trace, IntervalUnion, NormTrace, QuadSettings, TraceKind};

pub const DEFAULT_KAPPA: f64 = 0.2;

/// Cells of the order-`n` partition on which `D_n ≥ 0`, sorted by position.
pub fn nonnegative_cells(n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    Ok(cell_pieces(n, &IntervalUnion::torus())
        .into_iter()
        .filter(|&(lo, hi)| dirichlet(n, 0.5 * (lo + hi)) >= 0.0)
        .collect())
}

/// `sup_{t ∈ [lo, hi]} |t|`
fn far_edge(cell: (f64, f64)) -> f64 {
    cell.0.abs().max(cell.1.abs())
}

/// Default order for a witness: `b·N0 + ⌈N0/2⌉`.
pub fn default_order(n0: usize, b: usize) -> usize {
    b * n0 + n0.div_ceil(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSet {
    #[serde(rename = "N0")]
    pub n0: usize,
    pub b: usize,
    pub n: usize,
    pub measure: f64,
    pub target_measure: f64,
    /// `∫_Q S_n`
    pub integral: f64,
    pub abs_integral: f64,
    pub integral_error: f64,
    pub feasible: bool,
    /// Selected cells in order of increasing distance; the last one may be trimmed.
    pub cells: Vec<[f64; 2]>,
    /// `sup |t|` over each selected cell before trimming.
    pub distances: Vec<f64>,
}

impl WitnessSet {
    pub fn set(&self) -> Result<IntervalUnion> {
        IntervalUnion::new(self.cells.iter().map(|c| (c[0], c[1])).collect())
    }
}

/// Assemble `Q` for `(N0, b, n)` with `n ∈ (b·N0, (b+1)·N0]`.
///
/// Nonnegative cells are taken in order of `sup |t|` until the measure
/// reaches `2/(2N0+1)`; the last cell is cut to its part nearest 0. When the
/// available cells fall short the result is marked infeasible.
pub fn build_witness(seq: &ConvexSequence, n0: usize, b: usize, n: usize) -> Result<WitnessSet> {
    if n0 == 0 || b == 0 {
        return Err(Error::InvalidArgument("N0 and b must be positive".into()));
    }
    if n <= b * n0 || n > (b + 1) * n0 {
        return Err(Error::InvalidArgument(format!(
            "order {n} outside ({}, {}]",
            b * n0,
            (b + 1) * n0
        )));
    }
    let target = 2.0 / (2 * n0 + 1) as f64;
    let mut cells = nonnegative_cells(n)?;
    cells.sort_by(|x, y| far_edge(*x).total_cmp(&far_edge(*y)).then(x.0.total_cmp(&y.0)));
    let mut chosen = Vec::new();
    let mut distances = Vec::new();
    let mut remaining = target;
    for (lo, hi) in cells {
        if remaining <= 0.0 {
            break;
        }
        distances.push(far_edge((lo, hi)));
        let len = hi - lo;
        if len < remaining {
            chosen.push([lo, hi]);
            remaining -= len;
        } else {
            let near_zero_on_left = lo >= 0.0;
            chosen.push(if near_zero_on_left {
                [lo, lo + remaining]
            } else {
                [hi - remaining, hi]
            });
            remaining = 0.0;
        }
    }
    let measure: f64 = chosen.iter().map(|c| c[1] - c[0]).sum();
    let witness = WitnessSet {
        n0,
        b,
        n,
        measure,
        target_measure: target,
        integral: 0.0,
        abs_integral: 0.0,
        integral_error: 0.0,
        feasible: remaining <= 0.0,
        cells: chosen,
        distances,
    };
    let q = integrate_signed(seq, n, &witness.set()?, &QuadSettings::default())?;
    Ok(WitnessSet {
        integral: q.value,
        abs_integral: q.value.abs(),
        integral_error: q.error_estimate,
        ..witness
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrabilityCertificate {
    pub kappa: f64,
    pub witnesses: Vec<WitnessSet>,
    pub min_integral: f64,
    pub max_integral: f64,
    pub measures_decreasing: bool,
    /// `min ≥ κ·max > 0` with decreasing measures and all witnesses feasible
    pub passed: bool,
}

/// Witnesses with `b = N0` for every `N0`, checking that `∫_Q S_n` stays
/// comparable across the sweep while `m(Q)` shrinks.
pub fn uniform_integrability_certificate(
    seq: &ConvexSequence,
    n0s: &[usize],
    kappa: f64,
) -> Result<IntegrabilityCertificate> {
    if n0s.is_empty() {
        return Err(Error::InvalidArgument("no N0 values".into()));
    }
    if n0s.windows(2).any(|w| w[0] >= w[1]) || n0s[0] < 4 {
        return Err(Error::InvalidArgument(
            "N0 values must be increasing and at least 4".into(),
        ));
    }
    let witnesses: Vec<WitnessSet> = n0s
        .par_iter()
        .map(|&n0| build_witness(seq, n0, n0, default_order(n0, n0)))
        .collect::<Result<_>>()?;
    let min_integral = witnesses.iter().map(|w| w.integral).fold(f64::INFINITY, f64::min);
    let max_integral = witnesses
        .iter()
        .map(|w| w.integral)
        .fold(f64::NEG_INFINITY, f64::max);
    let measures_decreasing = witnesses.windows(2).all(|w| w[1].measure < w[0].measure);
    let passed = witnesses.iter().all(|w| w.feasible)
        && measures_decreasing
        && max_integral > 0.0
        && min_integral >= kappa * max_integral;
    Ok(IntegrabilityCertificate {
        kappa,
        witnesses,
        min_integral,
        max_integral,
        measures_decreasing,
        passed,
    })
}

/// Position of the origin relative to a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginCase {
    /// 0 is interior to one of the intervals.
    Inside,
    /// 0 is interior to the complement.
    Outside,
}

pub fn classify_origin(set: &IntervalUnion) -> Result<OriginCase> {
    if set
        .intervals()
        .iter()
        .any(|&(lo, hi)| lo < 0.0 && 0.0 < hi)
    {
        Ok(OriginCase::Inside)
    } else if set.is_empty() || set.distance_to_origin() > 0.0 {
        Ok(OriginCase::Outside)
    } else {
        Err(Error::InvalidArgument(format!(
            "the origin lies on the boundary of {set}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalLimitDemo {
    pub case: OriginCase,
    pub trace: NormTrace,
    pub verdict: ConvergenceVerdict,
}

/// Trace of `∫_E |S_N|` and its convergence verdict.
pub fn interval_limit_demo(
    seq: &ConvexSequence,
    set: &IntervalUnion,
    ns: &[usize],
    quad: &QuadSettings,
    tail_window: usize,
) -> Result<IntervalLimitDemo> {
    let case = classify_origin(set)?;
    let trace = norm_trace(seq, ns, set, TraceKind::Abs, quad)?;
    let verdict = analyze_trace(&trace, tail_window)?;
    Ok(IntervalLimitDemo {
        case,
        trace,
        verdict,
    })
}
