use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite union of pairwise disjoint half-open intervals `[lo, hi)` inside
/// `[-1/2, 1/2]`, kept sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &intervals {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidIntervals(format!("[{lo}, {hi}) is not finite")));
            }
            if lo < -0.5 || hi > 0.5 {
                return Err(Error::InvalidIntervals(format!(
                    "[{lo}, {hi}) leaves the torus [-1/2, 1/2]"
                )));
            }
            if lo >= hi {
                return Err(Error::InvalidIntervals(format!("[{lo}, {hi}) is empty")));
            }
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in intervals.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(Error::InvalidIntervals(format!(
                    "[{}, {}) overlaps [{}, {})",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(IntervalUnion { intervals })
    }

    /// The whole torus.
    pub fn torus() -> Self {
        IntervalUnion {
            intervals: vec![(-0.5, 0.5)],
        }
    }

    pub fn empty() -> Self {
        IntervalUnion {
            intervals: Vec::new(),
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= t && t < hi)
    }

    /// Distance from the origin to the closure of the union.
    pub fn distance_to_origin(&self) -> f64 {
        self.intervals
            .iter()
            .map(|&(lo, hi)| {
                if lo <= 0.0 && 0.0 <= hi {
                    0.0
                } else {
                    lo.abs().min(hi.abs())
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// True when some interval's closure contains the origin.
    pub fn has_interval_containing_origin(&self) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= 0.0 && 0.0 <= hi)
    }

    /// Intersection with `[lo, hi)`.
    pub fn restrict(&self, lo: f64, hi: f64) -> IntervalUnion {
        let intervals = self
            .intervals
            .iter()
            .filter_map(|&(a, b)| {
                let (a, b) = (a.max(lo), b.min(hi));
                (a < b).then_some((a, b))
            })
            .collect();
        IntervalUnion { intervals }
    }

    /// The union with `(lo, hi)` removed.
    pub fn remove(&self, lo: f64, hi: f64) -> IntervalUnion {
        let mut intervals = Vec::new();
        for &(a, b) in &self.intervals {
            if b <= lo || a >= hi {
                intervals.push((a, b));
                continue;
            }
            if a < lo {
                intervals.push((a, lo));
            }
            if b > hi {
                intervals.push((hi, b));
            }
        }
        IntervalUnion { intervals }
    }

    /// `count` points at the midpoints of `count` equal-measure slices of the union.
    pub fn spread_points(&self, count: usize) -> Vec<f64> {
        let total = self.measure();
        (0..count)
            .map(|k| {
                let mut s = (k as f64 + 0.5) / count as f64 * total;
                for &(lo, hi) in &self.intervals {
                    let len = hi - lo;
                    if s < len {
                        return lo + s;
                    }
                    s -= len;
                }
                self.intervals.last().map(|iv| iv.1).unwrap_or(0.0)
            })
            .collect()
    }
}

/// Grammar: `lo,hi;lo,hi;...` in torus coordinates, or `torus`.
impl FromStr for IntervalUnion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("torus") {
            return Ok(IntervalUnion::torus());
        }
        let mut intervals = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (lo, hi) = part
                .split_once(',')
                .ok_or_else(|| Error::InvalidIntervals(format!("`{part}` is not `lo,hi`")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidIntervals(format!("`{x}` is not a number")))
            };
            intervals.push((parse(lo)?, parse(hi)?));
        }
        IntervalUnion::new(intervals)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(lo, hi)| format!("{lo},{hi}"))
            .collect();
        f.write_str(&parts.join(";"))
    }
}
