//! Extrema of the Dirichlet kernel on `[0, 1/2]`.
//!
//! `D_N` vanishes at `k/(2N+1)` and has exactly one extremum in each zero
//! cell, so the table has the central peak at `0`, one row per interior cell
//! and the endpoint `1/2`: `N + 1` rows in all.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{cos_pi, dirichlet, sin_pi};
use crate::roots::illinois;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremumRow {
    /// 1-based index
    pub i: usize,
    pub t: f64,
    pub height: f64,
    /// `|height| / N`
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremaTable {
    pub n: usize,
    pub rows: Vec<ExtremumRow>,
    /// `t_i = (2i - 1)/(4N + 2)` for `i = 1..=N`
    pub crossings: Vec<f64>,
}

impl ExtremaTable {
    pub fn c_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.c).sum()
    }

    /// `t_i² < t_i¹ < t_{i+1}²` for every crossing.
    pub fn interleaves(&self) -> bool {
        self.crossings
            .iter()
            .enumerate()
            .all(|(k, &x)| self.rows[k].t < x && x < self.rows[k + 1].t)
    }

    /// Largest `| |D_N(-t)|/N - c |` over the rows.
    pub fn mirror_defect(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (dirichlet(self.n, -r.t).abs() / self.n as f64 - r.c).abs())
            .fold(0.0, f64::max)
    }
}

/// `(2i - 1)/(4N + 2)`
pub fn crossing_point(n: usize, i: usize) -> f64 {
    (2 * i - 1) as f64 / (4 * n + 2) as f64
}

/// Numerator of `D_N'`: `M cos(Mπt) sin(πt) - sin(Mπt) cos(πt)` with `M = 2N+1`.
fn derivative_numerator(n: usize, t: f64) -> f64 {
    let m = (2 * n + 1) as f64;
    m * cos_pi(m * t) * sin_pi(t) - sin_pi(m * t) * cos_pi(t)
}

/// Locate the extrema of `D_N` on `[0, 1/2]` to within `tol` in `t`.
///
/// Interior extrema are the roots of the derivative numerator, which changes
/// sign across every zero cell `(k/(2N+1), (k+1)/(2N+1))`.
pub fn find_extrema(n: usize, tol: f64) -> Result<ExtremaTable> {
    if n == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} outside (0, 1e-6]")));
    }
    let m = (2 * n + 1) as f64;
    let nf = n as f64;
    let interior: Vec<f64> = (1..n)
        .into_par_iter()
        .map(|k| {
            let lo = k as f64 / m;
            let hi = (k + 1) as f64 / m;
            let g = |t: f64| derivative_numerator(n, t);
            illinois(g, lo, hi, g(lo), g(hi), tol)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(ExtremumRow {
        i: 1,
        t: 0.0,
        height: m,
        c: m / nf,
    });
    for (k, t) in interior.into_iter().enumerate() {
        let height = dirichlet(n, t);
        rows.push(ExtremumRow {
            i: k + 2,
            t,
            height,
            c: height.abs() / nf,
        });
    }
    let end = if n % 2 == 0 { 1.0 } else { -1.0 };
    rows.push(ExtremumRow {
        i: n + 1,
        t: 0.5,
        height: end,
        c: 1.0 / nf,
    });
    let crossings = (1..=n).map(|i| crossing_point(n, i)).collect();
    Ok(ExtremaTable { n, rows, crossings })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingRow {
    pub i: usize,
    pub t: f64,
    /// `|D_N(t_i¹)|`
    pub value: f64,
    /// `1/sin((2i - 1)π/(4N + 2))`
    pub expected: f64,
    pub relative_error: f64,
    /// `|D_N(t_{i+1}²)| < |D_N(t_i¹)| < |D_N(t_i²)|`
    pub sandwiched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub n: usize,
    pub rows: Vec<CrossingRow>,
    pub max_relative_error: f64,
    pub all_sandwiched: bool,
    pub interleaves: bool,
}

impl CrossingReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.all_sandwiched && self.interleaves && self.max_relative_error <= tol
    }
}

pub fn crossing_check(n: usize) -> Result<CrossingReport> {
    let table = find_extrema(n, 1e-12)?;
    let rows: Vec<CrossingRow> = (1..=n)
        .map(|i| {
            let t = crossing_point(n, i);
            let value = dirichlet(n, t).abs();
            let expected = 1.0 / sin_pi(t);
            let upper = table.rows[i - 1].height.abs();
            let lower = table.rows[i].height.abs();
            CrossingRow {
                i,
                t,
                value,
                expected,
                relative_error: (value - expected).abs() / expected,
                sandwiched: lower < value && value < upper,
            }
        })
        .collect();
    Ok(CrossingReport {
        n,
        max_relative_error: rows.iter().map(|r| r.relative_error).fold(0.0, f64::max),
        all_sandwiched: rows.iter().all(|r| r.sandwiched),
        interleaves: table.interleaves(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSumRow {
    pub n: usize,
    pub sum: f64,
    /// `sum / ln N`, absent for `N = 1`
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSumTable {
    pub rows: Vec<CoefficientSumRow>,
    pub max_ratio: f64,
    /// Minimum ratio over `N ≥ 64` (over all rows when none qualify).
    pub min_ratio: f64,
    /// `max_ratio ≤ 2 · min_ratio`
    pub bounded: bool,
}

pub fn coefficient_sum(ns: &[usize]) -> Result<CoefficientSumTable> {
    let rows: Vec<CoefficientSumRow> = ns
        .iter()
        .map(|&n| {
            let sum = find_extrema(n, 1e-12)?.c_sum();
            let ratio = (n >= 2).then(|| sum / (n as f64).ln());
            Ok(CoefficientSumRow { n, sum, ratio })
        })
        .collect::<Result<_>>()?;
    let ratios = |min_n: usize| {
        rows.iter()
            .filter(|r| r.n >= min_n)
            .filter_map(|r| r.ratio)
            .collect::<Vec<_>>()
    };
    let all = ratios(2);
    let large = ratios(64);
    let floor_set = if large.is_empty() { &all } else { &large };
    let max_ratio = all.iter().copied().fold(f64::NAN, f64::max);
    let min_ratio = floor_set.iter().copied().fold(f64::NAN, f64::min);
    Ok(CoefficientSumTable {
        bounded: max_ratio <= 2.0 * min_ratio,
        rows,
        max_ratio,
        min_ratio,
    })
}
