//! Convex, even, positive coefficient sequences `{a_n}`.
//!
//! A sequence is an explicit head `a_0..a_{k-1}` followed by a closed-form
//! tail. The two canonical families use the tails `1/ln n` and `1/(ln n)²`
//! with the head values at `n = 0, 1` filled by linear extension
//! (`a_1 = 2a_2 - a_3`, `a_0 = 2a_1 - a_2`), which keeps the sequence convex
//! with `Δ²a_0 = Δ²a_1 = 0`. Only `n ≥ 0` is stored; the negative indices are
//! implied by evenness.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Convexity tolerance on second differences.
pub const CONVEXITY_TOLERANCE: f64 = -1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRule {
    /// `a_n = 1/ln n`
    LogReciprocal,
    /// `a_n = 1/(ln n)²`
    LogSquaredReciprocal,
    /// the last head value repeated forever
    Constant,
    /// `a_n = 0`; the series is a trigonometric polynomial
    Zero,
}

impl TailRule {
    pub fn keyword(self) -> &'static str {
        match self {
            TailRule::LogReciprocal => "log",
            TailRule::LogSquaredReciprocal => "log2",
            TailRule::Constant => "const",
            TailRule::Zero => "zero",
        }
    }
}

impl FromStr for TailRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "log" | "log_reciprocal" => Ok(TailRule::LogReciprocal),
            "log2" | "log_squared_reciprocal" => Ok(TailRule::LogSquaredReciprocal),
            "const" | "constant" => Ok(TailRule::Constant),
            "zero" => Ok(TailRule::Zero),
            other => Err(Error::InvalidSequence(format!("unknown tail rule `{other}`"))),
        }
    }
}

impl fmt::Display for TailRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Coefficient sequence with an explicit head and a closed-form tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexSequence {
    head: Vec<f64>,
    tail: TailRule,
}

fn log_tail(n: usize) -> f64 {
    1.0 / (n as f64).ln()
}

fn log_squared_tail(n: usize) -> f64 {
    let l = (n as f64).ln();
    1.0 / (l * l)
}

impl ConvexSequence {
    /// `a_n = 1/ln n` for `n ≥ 2`, linearly extended to `n = 0, 1`.
    pub fn log_reciprocal() -> Self {
        Self::linearly_extended(TailRule::LogReciprocal)
    }

    /// `a_n = 1/(ln n)²` for `n ≥ 2`, linearly extended to `n = 0, 1`.
    pub fn log_squared_reciprocal() -> Self {
        Self::linearly_extended(TailRule::LogSquaredReciprocal)
    }

    fn linearly_extended(tail: TailRule) -> Self {
        let f = match tail {
            TailRule::LogReciprocal => log_tail,
            _ => log_squared_tail,
        };
        let a2 = f(2);
        let a3 = f(3);
        let a1 = 2.0 * a2 - a3;
        let a0 = 2.0 * a1 - a2;
        ConvexSequence {
            head: vec![a0, a1],
            tail,
        }
    }

    /// Build a sequence from explicit head values and a tail rule.
    ///
    /// Head values must be finite and strictly positive. Logarithmic tails start
    /// at index `head.len()` and therefore need a head of length at least two.
    pub fn custom(head: Vec<f64>, tail: TailRule) -> Result<Self> {
        if head.is_empty() {
            return Err(Error::InvalidSequence("empty head".into()));
        }
        if let Some((i, v)) = head
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v <= 0.0)
        {
            return Err(Error::InvalidSequence(format!(
                "head value a_{i} = {v} is not a positive finite number"
            )));
        }
        if matches!(
            tail,
            TailRule::LogReciprocal | TailRule::LogSquaredReciprocal
        ) && head.len() < 2
        {
            return Err(Error::InvalidSequence(
                "logarithmic tails need explicit values for a_0 and a_1".into(),
            ));
        }
        Ok(ConvexSequence { head, tail })
    }

    /// Parse the text format: one positive real per line for the head, in index
    /// order, and a single `tail = <log|log2|const|zero>` line. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut head = Vec::new();
        let mut tail = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("tail") {
                let rest = rest.trim_start();
                let keyword = rest.strip_prefix('=').ok_or_else(|| Error::SequenceParse {
                    line: idx + 1,
                    reason: "expected `tail = <rule>`".into(),
                })?;
                if tail.is_some() {
                    return Err(Error::SequenceParse {
                        line: idx + 1,
                        reason: "tail rule declared twice".into(),
                    });
                }
                tail = Some(keyword.parse::<TailRule>().map_err(|e| Error::SequenceParse {
                    line: idx + 1,
                    reason: e.to_string(),
                })?);
                continue;
            }
            let v: f64 = line.parse().map_err(|_| Error::SequenceParse {
                line: idx + 1,
                reason: format!("`{line}` is not a number"),
            })?;
            head.push(v);
        }
        let tail = tail.ok_or(Error::SequenceParse {
            line: 0,
            reason: "missing `tail = <rule>` line".into(),
        })?;
        Self::custom(head, tail)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::SequenceParse {
            line: 0,
            reason: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn head(&self) -> &[f64] {
        &self.head
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    /// `a_n`.
    pub fn value(&self, n: usize) -> f64 {
        if n < self.head.len() {
            return self.head[n];
        }
        match self.tail {
            TailRule::LogReciprocal => log_tail(n),
            TailRule::LogSquaredReciprocal => log_squared_tail(n),
            TailRule::Constant => self.head[self.head.len() - 1],
            TailRule::Zero => 0.0,
        }
    }

    /// `a_0..=a_n` as a vector.
    pub fn values(&self, n: usize) -> Vec<f64> {
        (0..=n).map(|k| self.value(k)).collect()
    }

    /// `lim a_n`.
    pub fn limit(&self) -> f64 {
        match self.tail {
            TailRule::Constant => self.head[self.head.len() - 1],
            _ => 0.0,
        }
    }

    /// `Δa_n = a_n - a_{n+1}`, evaluated without cancellation on logarithmic tails.
    pub fn first_difference(&self, n: usize) -> f64 {
        if n >= self.head.len() {
            let x = n as f64;
            match self.tail {
                TailRule::LogReciprocal => {
                    let (l0, l1) = (x.ln(), (x + 1.0).ln());
                    return (1.0 / x).ln_1p() / (l0 * l1);
                }
                TailRule::LogSquaredReciprocal => {
                    let (l0, l1) = (x.ln(), (x + 1.0).ln());
                    return (1.0 / x).ln_1p() * (l0 + l1) / (l0 * l0 * l1 * l1);
                }
                TailRule::Constant | TailRule::Zero => return 0.0,
            }
        }
        self.value(n) - self.value(n + 1)
    }

    /// `Δ²a_j = a_j + a_{j+2} - 2a_{j+1}`.
    pub fn second_difference(&self, j: usize) -> f64 {
        self.first_difference(j) - self.first_difference(j + 1)
    }

    /// Index from which every second difference is exactly zero, if any.
    pub fn second_difference_support(&self) -> Option<usize> {
        match self.tail {
            TailRule::Constant | TailRule::Zero => Some(self.head.len()),
            _ => None,
        }
    }

    /// True when only finitely many coefficients are nonzero.
    pub fn is_trigonometric_polynomial(&self) -> bool {
        self.tail == TailRule::Zero
    }

    /// `Σ_{j≥m} (j+1) Δ²a_j = m·Δa_m + a_m - lim a_n`, the mass of the Fejér
    /// representation carried by kernels of order `≥ m`.
    pub fn fejer_mass_from(&self, m: usize) -> f64 {
        m as f64 * self.first_difference(m) + self.value(m) - self.limit()
    }

    /// Check positivity and convexity for indices up to `horizon`.
    pub fn verify_convex(&self, horizon: usize) -> ConvexityReport {
        let mut min_d2 = f64::INFINITY;
        let mut argmin_d2 = 0;
        for j in 0..=horizon {
            let d2 = self.second_difference(j);
            if d2 < min_d2 {
                min_d2 = d2;
                argmin_d2 = j;
            }
        }
        let mut min_value = f64::INFINITY;
        let mut argmin_value = 0;
        for n in 0..=horizon + 2 {
            let v = self.value(n);
            if v < min_value {
                min_value = v;
                argmin_value = n;
            }
        }
        ConvexityReport {
            horizon,
            min_second_difference: min_d2,
            argmin_second_difference: argmin_d2,
            min_value,
            argmin_value,
            pass: min_d2 >= CONVEXITY_TOLERANCE && min_value > 0.0,
        }
    }

    /// Numerical look at `a_n·ln n` for `2 ≤ n ≤ horizon`.
    ///
    /// The class is decided from the ratio of the product at `horizon` to the
    /// product at `⌊√horizon⌋`: growth by half or more reads as unbounded, a drop
    /// below three quarters as `o(1)`, anything between as `O(1)` but not `o(1)`.
    /// This is a finite-horizon heuristic.
    pub fn growth_classification(&self, horizon: usize) -> Result<GrowthReport> {
        if horizon < 16 {
            return Err(Error::InvalidArgument(format!(
                "growth horizon must be at least 16, got {horizon}"
            )));
        }
        let product = |n: usize| self.value(n) * (n as f64).ln();
        let start = self.head.len().max(2);
        let mut sup = f64::NEG_INFINITY;
        let mut sup_at = start;
        for n in start..=horizon.max(start) {
            let p = product(n);
            if p > sup {
                sup = p;
                sup_at = n;
            }
        }
        let mid = ((horizon as f64).sqrt().floor() as usize).max(start).max(4);
        let at_mid = product(mid);
        let at_end = product(horizon);
        let ratio = if at_mid > 0.0 { at_end / at_mid } else { f64::NAN };
        let class = if !(ratio.is_finite()) || at_end == 0.0 {
            GrowthClass::LittleO
        } else if ratio >= 1.5 {
            GrowthClass::Unbounded
        } else if ratio <= 0.75 {
            GrowthClass::LittleO
        } else {
            GrowthClass::BigONotLittleO
        };
        Ok(GrowthReport {
            horizon,
            sup_product: sup,
            sup_at,
            product_at_sqrt_horizon: at_mid,
            product_at_horizon: at_end,
            trend_ratio: ratio,
            class,
            heuristic: true,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub horizon: usize,
    pub min_second_difference: f64,
    pub argmin_second_difference: usize,
    pub min_value: f64,
    pub argmin_value: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthClass {
    #[serde(rename = "O(1)-not-o(1)")]
    BigONotLittleO,
    #[serde(rename = "o(1)")]
    LittleO,
    #[serde(rename = "unbounded")]
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub horizon: usize,
    pub sup_product: f64,
    pub sup_at: usize,
    pub product_at_sqrt_horizon: f64,
    pub product_at_horizon: f64,
    pub trend_ratio: f64,
    pub class: GrowthClass,
    pub heuristic: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn log_reciprocal_values() {
        let s = ConvexSequence::log_reciprocal();
        assert_abs_diff_eq!(s.value(2), 1.0 / 2f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.value(2), 1.442_695_040_888_963, epsilon = 1e-14);
        assert_abs_diff_eq!(s.value(3), 0.910_239_226_626_837, epsilon = 1e-14);
        assert_abs_diff_eq!(s.value(1), 1.975_150_855_151_089, epsilon = 1e-14);
        assert_abs_diff_eq!(s.value(0), 2.507_606_669_413_215, epsilon = 1e-14);
    }

    #[test]
    fn head_extension_kills_first_second_differences() {
        for s in [
            ConvexSequence::log_reciprocal(),
            ConvexSequence::log_squared_reciprocal(),
        ] {
            assert_abs_diff_eq!(s.second_difference(0), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(s.second_difference(1), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn stable_differences_match_naive_ones() {
        let s = ConvexSequence::log_reciprocal();
        let j = 10;
        let naive = s.value(j) + s.value(j + 2) - 2.0 * s.value(j + 1);
        assert!(naive > 0.0);
        assert_abs_diff_eq!(s.second_difference(j), naive, epsilon = 1e-15);
        for n in [2usize, 5, 40, 1000] {
            let q = ConvexSequence::log_squared_reciprocal();
            assert_abs_diff_eq!(
                q.first_difference(n),
                q.value(n) - q.value(n + 1),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn canonical_families_are_convex() {
        assert!(ConvexSequence::log_reciprocal().verify_convex(100_000).pass);
        assert!(ConvexSequence::log_squared_reciprocal()
            .verify_convex(100_000)
            .pass);
    }

    #[test]
    fn constructed_violation_is_reported() {
        let s = ConvexSequence::custom(vec![1.0, 3.0, 1.0], TailRule::Constant).unwrap();
        let r = s.verify_convex(1);
        assert!(!r.pass);
        assert_eq!(r.argmin_second_difference, 0);
        assert_eq!(r.min_second_difference, -4.0);
    }

    #[test]
    fn growth_classes() {
        let r = ConvexSequence::log_reciprocal()
            .growth_classification(10_000)
            .unwrap();
        assert_eq!(r.class, GrowthClass::BigONotLittleO);
        assert_abs_diff_eq!(r.sup_product, 1.0, epsilon = 1e-14);
        let r = ConvexSequence::log_squared_reciprocal()
            .growth_classification(10_000)
            .unwrap();
        assert_eq!(r.class, GrowthClass::LittleO);
        let ones = ConvexSequence::custom(vec![1.0], TailRule::Constant).unwrap();
        assert_eq!(
            ones.growth_classification(10_000).unwrap().class,
            GrowthClass::Unbounded
        );
        assert!(ones.growth_classification(15).is_err());
    }

    #[test]
    fn fejer_mass_equals_mean() {
        // Σ_{j≥0} (j+1)Δ²a_j = a_0 for null sequences
        for s in [
            ConvexSequence::log_reciprocal(),
            ConvexSequence::log_squared_reciprocal(),
        ] {
            assert_abs_diff_eq!(s.fejer_mass_from(0), s.value(0), epsilon = 1e-14);
            assert_abs_diff_eq!(s.fejer_mass_from(2), s.value(0), epsilon = 1e-14);
        }
    }

    #[test]
    fn text_format() {
        let s = ConvexSequence::parse("# demo\n3\n2\n1\n\ntail = zero\n").unwrap();
        assert_eq!(s.head(), &[3.0, 2.0, 1.0]);
        assert_eq!(s.tail(), TailRule::Zero);
        assert_eq!(s.value(7), 0.0);
        assert!(ConvexSequence::parse("1\n2\n").is_err());
        assert!(ConvexSequence::parse("1\n-2\ntail = const\n").is_err());
        assert!(ConvexSequence::parse("1\ntail = log\n").is_err());
        assert!(matches!(
            ConvexSequence::parse("1\nfoo\ntail = const\n"),
            Err(Error::SequenceParse { line: 2, .. })
        ));
        assert!(ConvexSequence::parse("1\ntail = const\ntail = zero\n").is_err());
    }
}
