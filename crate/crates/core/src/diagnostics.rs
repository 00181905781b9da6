//! Heuristic convergence verdicts for norm traces.
//!
//! Verdicts are labels on numerical evidence, never proofs; every verdict
//! carries the raw gap, limit estimate and uncertainty it was derived from.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::NormTrace;

pub const DEFAULT_TAIL_WINDOW: usize = 4;
pub const DEFAULT_GAP_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converging,
    BoundedNonconvergingSignature,
    UnboundedSignature,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Converging => "converging",
            Verdict::BoundedNonconvergingSignature => "bounded-nonconverging-signature",
            Verdict::UnboundedSignature => "unbounded-signature",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    pub verdict: Verdict,
    /// max - min over the last `tail_window` values
    pub cauchy_gap: f64,
    /// Gap of the window ending one entry earlier.
    pub previous_gap: f64,
    pub tail_window: usize,
    pub limit_estimate: f64,
    /// `cauchy_gap` plus the largest error estimate in the window
    pub uncertainty: f64,
    pub max_error: f64,
    /// Converging with a limit indistinguishable from zero.
    pub to_zero: bool,
}

fn gap(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

pub fn analyze_trace(trace: &NormTrace, tail_window: usize) -> Result<ConvergenceVerdict> {
    analyze_trace_with(trace, tail_window, DEFAULT_GAP_THRESHOLD)
}

/// Cauchy-gap analysis of the last `tail_window` entries.
///
/// Converging: the gap is within `threshold` of the limit estimate and no
/// larger than the previous window's gap (up to the quadrature error), or the
/// tail decreases monotonically to a value within twice the uncertainty of 0.
pub fn analyze_trace_with(
    trace: &NormTrace,
    tail_window: usize,
    threshold: f64,
) -> Result<ConvergenceVerdict> {
    if tail_window < 3 {
        return Err(Error::InvalidArgument("tail window must be at least 3".into()));
    }
    if trace.len() < tail_window + 2 {
        return Err(Error::InvalidArgument(format!(
            "trace has {} entries, needs at least {}",
            trace.len(),
            tail_window + 2
        )));
    }
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument("gap threshold must be positive".into()));
    }
    let entries = trace.entries();
    let len = entries.len();
    let values: Vec<f64> = entries.iter().map(|e| e.value).collect();
    let window = &entries[len - tail_window..];
    let last = &values[len - tail_window..];
    let previous = &values[len - tail_window - 1..len - 1];
    let cauchy_gap = gap(last);
    let previous_gap = gap(previous);
    let limit_estimate = last.iter().sum::<f64>() / tail_window as f64;
    let max_error = window.iter().map(|e| e.error_estimate).fold(0.0, f64::max);
    let uncertainty = cauchy_gap + max_error;
    let mut out = ConvergenceVerdict {
        verdict: Verdict::Inconclusive,
        cauchy_gap,
        previous_gap,
        tail_window,
        limit_estimate,
        uncertainty,
        max_error,
        to_zero: false,
    };
    if window.iter().any(|e| e.is_flagged() || !e.value.is_finite()) || !max_error.is_finite() {
        return Ok(out);
    }
    let scale = limit_estimate.abs();
    let within = cauchy_gap <= threshold * scale;
    let shrinking = cauchy_gap <= previous_gap + max_error;
    let decreasing = last.windows(2).all(|w| w[1] <= w[0]);
    let increasing = last.windows(2).all(|w| w[1] > w[0]);
    if max_error > cauchy_gap && max_error > threshold * scale {
        return Ok(out);
    }
    out.verdict = if within && shrinking {
        Verdict::Converging
    } else if shrinking && decreasing && scale <= 2.0 * uncertainty {
        out.to_zero = true;
        Verdict::Converging
    } else if within {
        // small but widening gap: not enough evidence either way
        Verdict::Inconclusive
    } else if increasing && boundedness_report(trace)?.at_largest_n {
        Verdict::UnboundedSignature
    } else {
        Verdict::BoundedNonconvergingSignature
    };
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub sup: f64,
    pub argmax_n: usize,
    pub at_largest_n: bool,
}

/// Empirical supremum of the trace and the order where it is attained.
pub fn boundedness_report(trace: &NormTrace) -> Result<BoundednessReport> {
    let entries = trace.entries();
    let last = entries
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty trace".into()))?;
    let mut best = &entries[0];
    for e in entries {
        if e.value > best.value || best.value.is_nan() {
            best = e;
        }
    }
    Ok(BoundednessReport {
        sup: best.value,
        argmax_n: best.n,
        at_largest_n: best.n == last.n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(values: &[f64]) -> NormTrace {
        let triples: Vec<_> = values.iter().enumerate().map(|(k, &v)| (k + 1, v, 0.0)).collect();
        NormTrace::from_triples(&triples).unwrap()
    }

    #[test]
    fn constant_trace_converges() {
        let v = analyze_trace(&trace(&[2.5; 8]), 4).unwrap();
        assert_eq!(v.verdict, Verdict::Converging);
        assert_eq!(v.limit_estimate, 2.5);
        assert_eq!(v.cauchy_gap, 0.0);
        assert!(!v.to_zero);
    }

    #[test]
    fn alternating_trace_does_not_converge() {
        let v = analyze_trace(&trace(&[1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0]), 4).unwrap();
        assert_eq!(v.verdict, Verdict::BoundedNonconvergingSignature);
        assert_eq!(v.cauchy_gap, 1.0);
    }

    #[test]
    fn logarithmic_growth_is_unbounded() {
        let values: Vec<f64> = (4..14).map(|k| (k as f64).ln() * 2.0).collect();
        let v = analyze_trace(&trace(&values), 4).unwrap();
        assert_eq!(v.verdict, Verdict::UnboundedSignature);
    }

    #[test]
    fn decay_to_zero() {
        let values: Vec<f64> = (1..10).map(|k| 0.5f64.powi(k)).collect();
        let v = analyze_trace(&trace(&values), 4).unwrap();
        assert_eq!(v.verdict, Verdict::Converging);
        assert!(v.to_zero);
    }

    #[test]
    fn error_dominated_trace_is_inconclusive() {
        let triples: Vec<_> = (1..9).map(|k| (k, 1.0 + 0.01 * (k % 2) as f64, 0.5)).collect();
        let v = analyze_trace(&NormTrace::from_triples(&triples).unwrap(), 4).unwrap();
        assert_eq!(v.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn preconditions() {
        assert!(analyze_trace(&trace(&[1.0; 5]), 4).is_err());
        assert!(analyze_trace(&trace(&[1.0; 8]), 2).is_err());
        assert!(boundedness_report(&trace(&[])).is_err());
    }

    #[test]
    fn supremum_location() {
        let r = boundedness_report(&trace(&[3.0, 5.0, 4.0])).unwrap();
        assert_eq!((r.sup, r.argmax_n, r.at_largest_n), (5.0, 2, false));
    }
}
