//! L¹-type integrals of partial sums over interval unions.
//!
//! Integration runs over the cells `[k/(2N+1), (k+1)/(2N+1))` of the torus
//! (plus the two boundary pieces next to `±1/2`) intersected with the set.
//! Each cell carries a composite Gauss–Legendre rule; for absolute values
//! the cell is first split at the sign changes of the integrand. The error
//! estimate is the difference between `panels_per_cell` and twice as many
//! panels.

pub mod gauss;
mod intervals;

pub use intervals::IntervalUnion;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::ConvexSequence;
use crate::error::{Error, Result};
use crate::partial_sums::{reference_f, PartialSum, PartialSumEvaluator, ReferencePoint};
use crate::roots::illinois;
use gauss::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSettings {
    pub panels_per_cell: usize,
    pub nodes_per_panel: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            panels_per_cell: 1,
            nodes_per_panel: 16,
        }
    }
}

impl QuadSettings {
    fn validate(&self) -> Result<()> {
        if self.panels_per_cell == 0 || self.nodes_per_panel == 0 {
            return Err(Error::InvalidArgument(
                "panels per cell and nodes per panel must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Cells of the partition for order `n` intersected with `set`, in order.
pub fn cell_pieces(n: usize, set: &IntervalUnion) -> Vec<(f64, f64)> {
    let m = (2 * n + 1) as f64;
    let ni = n as i64;
    let mut pieces = Vec::new();
    for &(lo, hi) in set.intervals() {
        let kmin = ((lo * m).ceil() as i64).max(-ni);
        let kmax = ((hi * m).floor() as i64).min(ni);
        let mut left = lo;
        for k in kmin..=kmax {
            let b = k as f64 / m;
            if b > left && b < hi {
                pieces.push((left, b));
                left = b;
            }
        }
        pieces.push((left, hi));
    }
    pieces
}

/// Sub-pieces of `[lo, hi]` between the sign changes of `g` detected on
/// `scan` equal steps.
fn split_at_sign_changes(
    g: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    scan: usize,
) -> Vec<(f64, f64)> {
    let h = (hi - lo) / scan as f64;
    let mut cuts = vec![lo];
    let mut x0 = lo;
    let mut g0 = g(lo);
    for i in 1..=scan {
        let x1 = if i == scan { hi } else { lo + i as f64 * h };
        let g1 = g(x1);
        if g0 * g1 < 0.0 {
            if let Ok(r) = illinois(g, x0, x1, g0, g1, 1e-14 * (hi - lo)) {
                if r > *cuts.last().unwrap() && r < hi {
                    cuts.push(r);
                }
            }
        } else if g1 == 0.0 && i < scan && x1 > *cuts.last().unwrap() {
            cuts.push(x1);
        }
        x0 = x1;
        g0 = g1;
    }
    cuts.push(hi);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// `∫_set g` (or `∫_set |g|` when `absolute`) on the cells of order `n`.
///
/// The error estimate is never below the accumulated rounding level.
pub fn integrate_aligned<G>(
    g: G,
    n: usize,
    set: &IntervalUnion,
    settings: &QuadSettings,
    absolute: bool,
) -> Result<QuadResult>
where
    G: Fn(f64) -> f64 + Sync,
{
    settings.validate()?;
    let rule = GaussLegendre::new(settings.nodes_per_panel);
    let ppc = settings.panels_per_cell;
    let scan = settings.nodes_per_panel.max(8);
    let pieces = cell_pieces(n, set);
    let parts: Vec<(f64, f64, usize)> = pieces
        .par_iter()
        .map(|&(lo, hi)| {
            let subs = if absolute {
                split_at_sign_changes(&g, lo, hi, scan)
            } else {
                vec![(lo, hi)]
            };
            let mut coarse = 0.0;
            let mut fine = 0.0;
            for &(a, b) in &subs {
                if absolute {
                    coarse += rule.integrate_composite(a, b, ppc, |t| g(t).abs());
                    fine += rule.integrate_composite(a, b, 2 * ppc, |t| g(t).abs());
                } else {
                    coarse += rule.integrate_composite(a, b, ppc, &g);
                    fine += rule.integrate_composite(a, b, 2 * ppc, &g);
                }
            }
            (coarse, fine, 2 * ppc * subs.len())
        })
        .collect();
    let mut coarse = 0.0;
    let mut fine = 0.0;
    let mut magnitude = 0.0;
    let mut panels = 0;
    let piece_count = parts.len();
    for (c, f, p) in parts {
        coarse += c;
        fine += f;
        magnitude += f.abs();
        panels += p;
    }
    // rounding in the per-piece sums accumulates like a random walk
    let floor = 64.0 * f64::EPSILON * magnitude * (piece_count as f64).sqrt().max(1.0);
    Ok(QuadResult {
        value: fine,
        error_estimate: (fine - coarse).abs().max(floor),
        panels,
    })
}

/// `∫_set |S_N(t)| dt`.
pub fn integrate_abs_partial_sum(
    seq: &ConvexSequence,
    n: usize,
    set: &IntervalUnion,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    let s = PartialSum::new(seq, n);
    integrate_aligned(|t| s.eval(t), n, set, settings, true)
}

/// `∫_set S_N(t) dt`.
pub fn integrate_signed(
    seq: &ConvexSequence,
    n: usize,
    set: &IntervalUnion,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    let s = PartialSum::new(seq, n);
    integrate_aligned(|t| s.eval(t), n, set, settings, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualSettings {
    /// Half-width of the excluded window `(-η, η)` around the origin.
    pub eta: f64,
    pub j_max: usize,
    pub grid_size: usize,
}

impl Default for ResidualSettings {
    fn default() -> Self {
        ResidualSettings {
            eta: 1e-3,
            j_max: 100_000,
            grid_size: 1 << 18,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualResult {
    /// `∫_{set \ (-η, η)} |f - S_N|`
    pub quad: QuadResult,
    pub eta: f64,
    /// Upper bound on `∫_{set ∩ (-η, η)} |f - S_N|`.
    pub excluded_bound: f64,
    /// Grid integral of the truncation bounds of `f`, included in the error estimate.
    pub tail_integral: f64,
}

/// Reference values of `f` on the uniform grid, shared across orders.
#[derive(Debug, Clone)]
pub struct ResidualGrid {
    seq: ConvexSequence,
    settings: ResidualSettings,
    points: Vec<ReferencePoint>,
    /// `Σ_{j<M-1} (j+1)Δ²a_j·2η(j+1) + Σ_{j≥M-1} (j+1)Δ²a_j` with `M = ⌈1/(2η)⌉`
    window_f_mass: f64,
}

impl ResidualGrid {
    pub fn new(seq: &ConvexSequence, settings: ResidualSettings) -> Result<Self> {
        let h = 1.0 / settings.grid_size.max(1) as f64;
        if settings.grid_size < 2 {
            return Err(Error::InvalidArgument("residual grid needs at least 2 points".into()));
        }
        if !(settings.eta >= 0.0) || settings.eta >= 0.5 {
            return Err(Error::InvalidArgument(format!(
                "origin window η = {} must lie in [0, 1/2)",
                settings.eta
            )));
        }
        if settings.eta < h && !seq.is_trigonometric_polynomial() {
            return Err(Error::InvalidArgument(format!(
                "origin window η = {} is below the grid spacing {h}; f may be unbounded at 0",
                settings.eta
            )));
        }
        let points = reference_f(seq, settings.grid_size, settings.j_max, f64::INFINITY)?;
        let window_f_mass = if settings.eta > 0.0 {
            let m = (1.0 / (2.0 * settings.eta)).ceil().max(1.0) as usize;
            let near: f64 = (0..m.saturating_sub(1))
                .map(|j| {
                    let w = (j + 1) as f64;
                    w * seq.second_difference(j) * 2.0 * settings.eta * w
                })
                .sum();
            near + seq.fejer_mass_from(m - 1)
        } else {
            0.0
        };
        Ok(ResidualGrid {
            seq: seq.clone(),
            settings,
            points,
            window_f_mass,
        })
    }

    pub fn settings(&self) -> &ResidualSettings {
        &self.settings
    }

    pub fn points(&self) -> &[ReferencePoint] {
        &self.points
    }

    pub fn residual(
        &self,
        n: usize,
        set: &IntervalUnion,
        quad: &QuadSettings,
    ) -> Result<ResidualResult> {
        let eta = self.settings.eta;
        let size = self.settings.grid_size;
        let h = 1.0 / size as f64;
        let s = PartialSumEvaluator::with_threshold(self.seq.clone(), 0).grid(n, size)?;
        let mut fine = 0.0;
        let mut coarse = 0.0;
        let mut tail = 0.0;
        for (k, (p, s)) in self.points.iter().zip(&s).enumerate() {
            if p.t.abs() < eta || !set.contains(p.t) {
                continue;
            }
            let g = (p.value - s).abs();
            fine += g;
            tail += p.tail_bound;
            if k % 2 == 0 {
                coarse += g;
            }
        }
        let fine = h * fine;
        let coarse = 2.0 * h * coarse;
        let tail = h * tail;
        let excluded_bound = if eta > 0.0 {
            let window = set.restrict(-eta, eta);
            if window.is_empty() {
                0.0
            } else {
                let q = integrate_abs_partial_sum(&self.seq, n, &window, quad)?;
                self.window_f_mass + q.value + q.error_estimate
            }
        } else {
            0.0
        };
        Ok(ResidualResult {
            quad: QuadResult {
                value: fine,
                error_estimate: (fine - coarse).abs() + tail,
                panels: size,
            },
            eta,
            excluded_bound,
            tail_integral: tail,
        })
    }
}

/// `∫_{set \ (-η, η)} |f - S_N|` by the grid rule against the reference `f`.
pub fn residual_l1(
    seq: &ConvexSequence,
    n: usize,
    set: &IntervalUnion,
    settings: ResidualSettings,
    quad: &QuadSettings,
) -> Result<ResidualResult> {
    ResidualGrid::new(seq, settings)?.residual(n, set, quad)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceKind {
    /// `N ↦ ∫_E |S_N|`
    Abs,
    /// `N ↦ ∫_{E \ (-η, η)} |f - S_N|`
    Residual(ResidualSettings),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub n: usize,
    pub value: f64,
    pub error_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub excluded_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flag: Option<String>,
}

impl TraceEntry {
    pub fn new(n: usize, value: f64, error_estimate: f64) -> Self {
        TraceEntry {
            n,
            value,
            error_estimate,
            excluded_bound: None,
            flag: None,
        }
    }

    pub fn is_flagged(&self) -> bool {
        self.flag.is_some()
    }
}

/// Sequence of `(N, value, error)` entries with strictly increasing `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormTrace {
    entries: Vec<TraceEntry>,
}

impl NormTrace {
    pub fn new(entries: Vec<TraceEntry>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0].n >= w[1].n) {
            return Err(Error::InvalidArgument("trace orders must be strictly increasing".into()));
        }
        if entries.iter().any(|e| e.error_estimate < 0.0) {
            return Err(Error::InvalidArgument("negative error estimate".into()));
        }
        Ok(NormTrace { entries })
    }

    /// Convenience constructor from `(N, value, error)` triples.
    pub fn from_triples(triples: &[(usize, f64, f64)]) -> Result<Self> {
        Self::new(
            triples
                .iter()
                .map(|&(n, v, e)| TraceEntry::new(n, v, e))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One quadrature per order in `ns`.
pub fn norm_trace(
    seq: &ConvexSequence,
    ns: &[usize],
    set: &IntervalUnion,
    kind: TraceKind,
    quad: &QuadSettings,
) -> Result<NormTrace> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("orders must be strictly increasing".into()));
    }
    let grid = match kind {
        TraceKind::Abs => None,
        TraceKind::Residual(settings) => Some(ResidualGrid::new(seq, settings)?),
    };
    let entries = ns
        .iter()
        .map(|&n| {
            let outcome = match &grid {
                None => integrate_abs_partial_sum(seq, n, set, quad).map(|q| (q, None)),
                Some(g) => g
                    .residual(n, set, quad)
                    .map(|r| (r.quad, Some(r.excluded_bound))),
            };
            match outcome {
                Ok((q, excluded_bound)) => TraceEntry {
                    n,
                    value: q.value,
                    error_estimate: q.error_estimate,
                    excluded_bound,
                    flag: None,
                },
                Err(e) => TraceEntry {
                    n,
                    value: f64::NAN,
                    error_estimate: f64::INFINITY,
                    excluded_bound: None,
                    flag: Some(e.to_string()),
                },
            }
        })
        .collect();
    NormTrace::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::TailRule;
    use crate::kernels::dirichlet;

    #[test]
    fn partition_has_2n_plus_2_cells() {
        for n in [1usize, 2, 5, 64] {
            let p = cell_pieces(n, &IntervalUnion::torus());
            assert_eq!(p.len(), 2 * n + 2);
            let total: f64 = p.iter().map(|(a, b)| b - a).sum();
            assert!((total - 1.0).abs() < 1e-14);
        }
        let e = IntervalUnion::new(vec![(0.0, 0.1)]).unwrap();
        assert_eq!(cell_pieces(5, &e), vec![(0.0, 1.0 / 11.0), (1.0 / 11.0, 0.1)]);
    }

    #[test]
    fn constant_partial_sum() {
        let s = ConvexSequence::log_reciprocal();
        let q = integrate_abs_partial_sum(&s, 0, &IntervalUnion::torus(), &QuadSettings::default())
            .unwrap();
        assert!((q.value - s.value(0)).abs() < 1e-14);
    }

    #[test]
    fn dirichlet_one_closed_form() {
        let s = ConvexSequence::custom(vec![1.0, 1.0], TailRule::Zero).unwrap();
        let q = integrate_abs_partial_sum(&s, 1, &IntervalUnion::torus(), &QuadSettings::default())
            .unwrap();
        let exact = 1.0 / 3.0 + 2.0 * 3f64.sqrt() / std::f64::consts::PI;
        assert!((q.value - exact).abs() < 1e-12, "{} vs {exact}", q.value);
        let q = integrate_aligned(
            |t| dirichlet(1, t),
            1,
            &IntervalUnion::torus(),
            &QuadSettings::default(),
            true,
        )
        .unwrap();
        assert!((q.value - exact).abs() < 1e-12);
    }

    #[test]
    fn signed_integral_examples() {
        let s = ConvexSequence::log_reciprocal();
        let set = IntervalUnion::torus();
        let q = integrate_signed(&s, 37, &set, &QuadSettings::default()).unwrap();
        assert!((q.value - s.value(0)).abs() < 1e-12);
        let q = integrate_signed(&s, 5, &IntervalUnion::new(vec![(0.0, 1.0 / 11.0)]).unwrap(), &QuadSettings::default()).unwrap();
        assert!(q.value > 0.0);
        let exact = PartialSum::new(&s, 5).integral(0.0, 1.0 / 11.0);
        assert!((q.value - exact).abs() < 1e-13);
        let q = integrate_signed(&s, 5, &IntervalUnion::empty(), &QuadSettings::default()).unwrap();
        assert_eq!(q.value, 0.0);
    }

    #[test]
    fn rejects_zero_settings() {
        let s = ConvexSequence::log_reciprocal();
        let bad = QuadSettings {
            panels_per_cell: 0,
            nodes_per_panel: 16,
        };
        assert!(integrate_abs_partial_sum(&s, 3, &IntervalUnion::torus(), &bad).is_err());
    }

    #[test]
    fn residual_vanishes_for_trigonometric_polynomial() {
        // a_n = (5 - n)^+ gives f = 5 F_4 = S_N for N ≥ 4
        let s = ConvexSequence::custom(vec![5.0, 4.0, 3.0, 2.0, 1.0], TailRule::Zero).unwrap();
        let settings = ResidualSettings {
            eta: 0.0,
            j_max: 50,
            grid_size: 1024,
        };
        let r = residual_l1(&s, 6, &IntervalUnion::torus(), settings, &QuadSettings::default())
            .unwrap();
        assert!(r.quad.value < 1e-12, "{}", r.quad.value);
        assert_eq!(r.excluded_bound, 0.0);
    }

    #[test]
    fn residual_refuses_missing_window() {
        let s = ConvexSequence::log_reciprocal();
        let settings = ResidualSettings {
            eta: 0.0,
            j_max: 1000,
            grid_size: 1024,
        };
        assert!(residual_l1(&s, 6, &IntervalUnion::torus(), settings, &QuadSettings::default())
            .is_err());
    }

    #[test]
    fn trace_rejects_unsorted_orders() {
        let s = ConvexSequence::log_reciprocal();
        assert!(norm_trace(&s, &[8, 4], &IntervalUnion::torus(), TraceKind::Abs, &QuadSettings::default()).is_err());
        let t = norm_trace(&s, &[4], &IntervalUnion::torus(), TraceKind::Abs, &QuadSettings::default()).unwrap();
        assert_eq!(t.len(), 1);
        assert!(NormTrace::from_triples(&[(1, 1.0, -1.0)]).is_err());
    }
}
