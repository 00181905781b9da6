//! Partial sums `S_N(t) = a_0 + 2 Σ_{n=1..N} a_n cos(2πnt)`, the function
//! `f = Σ_j (j+1) Δ²a_j F_j` they converge to off the origin, and the
//! summation-by-parts identity relating the two.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::coefficients::ConvexSequence;
use crate::error::{Error, Result};
use crate::kernels::{canonical, cos_pi, dirichlet, fejer, sin_pi};
use crate::quadrature::IntervalUnion;

/// Default number of `(N × grid point)` products above which grids go through the FFT.
pub const DEFAULT_FAST_PATH_THRESHOLD: usize = 1 << 16;

/// `S_N(t)` by Reinsch's modification of the Clenshaw recurrence, which stays
/// accurate when `cos(2πt)` is close to `±1`.
pub fn partial_sum(seq: &ConvexSequence, n: usize, t: f64) -> f64 {
    let t = canonical(t);
    let coeff = |k: usize| {
        if k == 0 {
            seq.value(0)
        } else {
            2.0 * seq.value(k)
        }
    };
    reinsch_cosine_sum(coeff, n, t)
}

/// `Σ_{k=0..n} c_k cos(2πkt)`.
pub(crate) fn reinsch_cosine_sum(coeff: impl Fn(usize) -> f64, n: usize, t: f64) -> f64 {
    let mut b = 0.0;
    let mut d = 0.0;
    if cos_pi(2.0 * t) > 0.0 {
        let s = sin_pi(t);
        let lambda = -4.0 * s * s;
        for k in (0..=n).rev() {
            d = coeff(k) + lambda * b + d;
            if k > 0 {
                b += d;
            }
        }
        d - 0.5 * lambda * b
    } else {
        let c = cos_pi(t);
        let lambda = 4.0 * c * c;
        for k in (0..=n).rev() {
            d = coeff(k) + lambda * b - d;
            if k > 0 {
                b = d - b;
            }
        }
        d - 0.5 * lambda * b
    }
}

/// `S_N` with its cosine coefficients `a_0, 2a_1, ..., 2a_N` precomputed, for
/// repeated evaluation at many points.
#[derive(Debug, Clone)]
pub struct PartialSum {
    coeffs: Vec<f64>,
}

impl PartialSum {
    pub fn new(seq: &ConvexSequence, n: usize) -> Self {
        let coeffs = (0..=n)
            .map(|k| if k == 0 { seq.value(0) } else { 2.0 * seq.value(k) })
            .collect();
        PartialSum { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        reinsch_cosine_sum(|k| self.coeffs[k], self.order(), canonical(t))
    }

    /// `∫_lo^hi S_N(t) dt` from the antiderivative `a_0 t + Σ a_n sin(2πnt)/(πn)`.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        let mut acc = self.coeffs[0] * (hi - lo);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let kf = k as f64;
            acc += 0.5 * c * (sin_pi(2.0 * kf * hi) - sin_pi(2.0 * kf * lo)) / (std::f64::consts::PI * kf);
        }
        acc
    }
}

/// `S_N(t)` summed term by term with one cosine per frequency.
pub fn partial_sum_direct(seq: &ConvexSequence, n: usize, t: f64) -> f64 {
    let t = canonical(t);
    seq.value(0)
        + 2.0
            * (1..=n)
                .map(|k| seq.value(k) * cos_pi(2.0 * k as f64 * t))
                .sum::<f64>()
}

/// The uniform grid `t_k = -1/2 + k/size`, `k = 0..size`.
pub fn grid_points(size: usize) -> Vec<f64> {
    (0..size).map(|k| -0.5 + k as f64 / size as f64).collect()
}

/// `Σ_{|n|≤n_max} c(|n|) e(n t_k)` on the uniform grid, folding frequencies
/// modulo the grid size and applying one inverse FFT.
fn cosine_series_on_grid(coeff: impl Fn(usize) -> f64, n_max: usize, size: usize) -> Vec<f64> {
    let mut buf = vec![Complex::new(0.0, 0.0); size];
    // e(n t_k) = (-1)^n ω^{nk} with ω = e^{2πi/size}
    let sign = |n: usize| if n % 2 == 0 { 1.0 } else { -1.0 };
    buf[0].re += coeff(0);
    for n in 1..=n_max {
        let c = sign(n) * coeff(n);
        buf[n % size].re += c;
        buf[(size - n % size) % size].re += c;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(size).process(&mut buf);
    buf.into_iter().map(|z| z.re).collect()
}

/// Bulk evaluator of partial sums for one sequence.
#[derive(Debug, Clone)]
pub struct PartialSumEvaluator {
    seq: ConvexSequence,
    fast_path_threshold: usize,
}

impl PartialSumEvaluator {
    pub fn new(seq: ConvexSequence) -> Self {
        Self::with_threshold(seq, DEFAULT_FAST_PATH_THRESHOLD)
    }

    pub fn with_threshold(seq: ConvexSequence, fast_path_threshold: usize) -> Self {
        PartialSumEvaluator {
            seq,
            fast_path_threshold,
        }
    }

    pub fn sequence(&self) -> &ConvexSequence {
        &self.seq
    }

    pub fn eval(&self, n: usize, t: f64) -> f64 {
        partial_sum(&self.seq, n, t)
    }

    /// `S_N` on the grid of [`grid_points`].
    pub fn grid(&self, n: usize, grid_size: usize) -> Result<Vec<f64>> {
        if grid_size == 0 {
            return Err(Error::InvalidArgument("grid size must be positive".into()));
        }
        if n.saturating_mul(grid_size) > self.fast_path_threshold {
            let coeffs = self.seq.values(n);
            Ok(cosine_series_on_grid(|k| coeffs[k], n, grid_size))
        } else {
            Ok(grid_points(grid_size)
                .into_iter()
                .map(|t| partial_sum(&self.seq, n, t))
                .collect())
        }
    }
}

pub fn partial_sum_grid(seq: &ConvexSequence, n: usize, grid_size: usize) -> Result<Vec<f64>> {
    PartialSumEvaluator::new(seq.clone()).grid(n, grid_size)
}

/// A truncated value of `f` with a bound on the neglected terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FejerValue {
    pub value: f64,
    /// `+∞` when no finite bound applies at this truncation.
    pub tail_bound: f64,
}

/// Precomputed weights `(j+1)Δ²a_j`, `j = 0..=j_max`, of the Fejér representation.
#[derive(Debug, Clone)]
pub struct FejerRepresentation {
    weights: Vec<f64>,
    /// `Δa_{j_max}`
    last_difference: f64,
    /// `Σ_{j>j_max} (j+1)² Δ²a_j`
    global_tail: f64,
}

impl FejerRepresentation {
    pub fn new(seq: &ConvexSequence, j_max: usize) -> Result<Self> {
        if j_max < 2 {
            return Err(Error::InvalidArgument(format!(
                "Fejér truncation must be at least 2, got {j_max}"
            )));
        }
        let diffs: Vec<f64> = (0..=j_max + 1).map(|n| seq.first_difference(n)).collect();
        let weights = (0..=j_max)
            .map(|j| (j + 1) as f64 * (diffs[j] - diffs[j + 1]))
            .collect();
        let global_tail = match seq.second_difference_support() {
            Some(k) => (j_max + 1..k.max(j_max + 1))
                .map(|j| (j + 1) as f64 * (j + 1) as f64 * seq.second_difference(j))
                .sum(),
            None => f64::INFINITY,
        };
        Ok(FejerRepresentation {
            weights,
            last_difference: diffs[j_max],
            global_tail,
        })
    }

    pub fn j_max(&self) -> usize {
        self.weights.len() - 1
    }

    /// `(j+1)Δ²a_j`.
    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    /// Bound on `Σ_{j>j_max} (j+1)Δ²a_j F_j(t)`.
    pub fn tail_bound(&self, t: f64) -> f64 {
        let s = sin_pi(canonical(t));
        let off_origin = if s == 0.0 {
            f64::INFINITY
        } else {
            self.last_difference / (s * s)
        };
        off_origin.min(self.global_tail)
    }

    /// `Σ_{j=from..=j_max} (j+1)Δ²a_j F_j(t)`.
    pub fn partial(&self, from: usize, t: f64) -> f64 {
        (from..self.weights.len())
            .map(|j| self.weights[j] * fejer(j, t))
            .sum()
    }

    pub fn eval(&self, t: f64) -> FejerValue {
        FejerValue {
            value: self.partial(0, t),
            tail_bound: self.tail_bound(t),
        }
    }
}

/// `f(t)` truncated after `j_max` Fejér kernels.
pub fn fejer_representation(seq: &ConvexSequence, j_max: usize, t: f64) -> Result<FejerValue> {
    Ok(FejerRepresentation::new(seq, j_max)?.eval(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferencePoint {
    pub t: f64,
    pub value: f64,
    pub tail_bound: f64,
    /// Set when the tail bound exceeds the requested cap.
    pub flagged: bool,
}

/// `f` on the uniform grid, truncated after `j_max` Fejér kernels.
///
/// Uses `Σ_{j≤J}(j+1)Δ²a_j F_j = S_{J+2} - (J+2)Δa_{J+1}F_{J+1} - a_{J+2}D_{J+2}`
/// so the whole grid costs one folded FFT. Points whose tail bound exceeds
/// `cap` are flagged; the origin is always flagged unless the bound there is finite.
pub fn reference_f(
    seq: &ConvexSequence,
    grid_size: usize,
    j_max: usize,
    cap: f64,
) -> Result<Vec<ReferencePoint>> {
    if grid_size == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    let rep = FejerRepresentation::new(seq, j_max)?;
    let m = j_max + 2;
    let coeffs = seq.values(m);
    let s = cosine_series_on_grid(|k| coeffs[k], m, grid_size);
    let boundary_weight = m as f64 * seq.first_difference(m - 1);
    let last = coeffs[m];
    let points = grid_points(grid_size)
        .into_par_iter()
        .zip(s.into_par_iter())
        .map(|(t, s)| {
            let value = s - boundary_weight * fejer(m - 1, t) - last * dirichlet(m, t);
            let tail_bound = rep.tail_bound(t);
            ReferencePoint {
                t,
                value,
                tail_bound,
                flagged: !(tail_bound <= cap),
            }
        })
        .collect();
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityVariant {
    /// `Σ_{j≥N-1} (j+1)Δ²a_j F_j - N F_{N-1} (a_{N-1} - a_{N-2}) + D_N a_N`
    Literal,
    /// `Σ_{j≥N-1} (j+1)Δ²a_j F_j - N F_{N-1} (a_{N-1} - a_N) - D_N a_N`
    Derived,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub n: usize,
    pub t: f64,
    pub j_max: usize,
    /// `f(t) - S_N(t)` with `f` truncated at `j_max`
    pub lhs: f64,
    pub rhs_literal: f64,
    pub rhs_derived: f64,
    pub discrepancy_literal: f64,
    pub discrepancy_derived: f64,
    pub tolerance: f64,
    pub matched: Option<IdentityVariant>,
}

/// Absolute slack added to the truncation bounds when comparing the two sides.
pub const IDENTITY_SLACK: f64 = 1e-8;

/// Compare `f(t) - S_N(t)` with both index variants of the twice-summed-by-parts
/// expression.
pub fn residual_identity_check(
    seq: &ConvexSequence,
    n: usize,
    t: f64,
    j_max: usize,
) -> Result<IdentityCheck> {
    let rep = FejerRepresentation::new(seq, j_max)?;
    check_with(seq, &rep, n, t)
}

fn check_with(
    seq: &ConvexSequence,
    rep: &FejerRepresentation,
    n: usize,
    t: f64,
) -> Result<IdentityCheck> {
    let t = canonical(t);
    if n < 2 {
        return Err(Error::InvalidArgument(format!("identity needs N ≥ 2, got {n}")));
    }
    if t == 0.0 {
        return Err(Error::InvalidArgument("identity is checked off the origin".into()));
    }
    if rep.j_max() <= n {
        return Err(Error::InvalidArgument(format!(
            "truncation {} must exceed N = {n}",
            rep.j_max()
        )));
    }
    let f = rep.partial(0, t);
    let tail_sum = rep.partial(n - 1, t);
    let lhs = f - partial_sum(seq, n, t);
    let fn1 = fejer(n - 1, t);
    let dn = dirichlet(n, t);
    let an = seq.value(n);
    let rhs_literal =
        tail_sum - n as f64 * fn1 * (seq.value(n - 1) - seq.value(n - 2)) + dn * an;
    let rhs_derived = tail_sum - n as f64 * fn1 * seq.first_difference(n - 1) - dn * an;
    let tb = rep.tail_bound(t);
    let tolerance = 2.0 * tb + IDENTITY_SLACK;
    let discrepancy_literal = (lhs - rhs_literal).abs();
    let discrepancy_derived = (lhs - rhs_derived).abs();
    let matched = if discrepancy_literal <= tolerance {
        Some(IdentityVariant::Literal)
    } else if discrepancy_derived <= tolerance {
        Some(IdentityVariant::Derived)
    } else {
        None
    };
    Ok(IdentityCheck {
        n,
        t,
        j_max: rep.j_max(),
        lhs,
        rhs_literal,
        rhs_derived,
        discrepancy_literal,
        discrepancy_derived,
        tolerance,
        matched,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySweep {
    pub seed: u64,
    pub checks: Vec<IdentityCheck>,
    /// The variant that closed on every sample, if one did.
    pub matched_variant: Option<IdentityVariant>,
    pub literal_matches: usize,
    pub derived_matches: usize,
}

/// Run [`residual_identity_check`] on `samples` pseudo-random pairs with
/// `2 ≤ N ≤ n_max` and `t ∈ [t_lo, t_hi]`.
pub fn residual_identity_sweep(
    seq: &ConvexSequence,
    samples: usize,
    seed: u64,
    n_max: usize,
    (t_lo, t_hi): (f64, f64),
    j_max: usize,
) -> Result<IdentitySweep> {
    if n_max < 2 || !(t_lo < t_hi) {
        return Err(Error::InvalidArgument("empty sampling range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, f64)> = (0..samples)
        .map(|_| (rng.random_range(2..=n_max), rng.random_range(t_lo..=t_hi)))
        .collect();
    let rep = FejerRepresentation::new(seq, j_max)?;
    let checks = pairs
        .into_par_iter()
        .map(|(n, t)| check_with(seq, &rep, n, t))
        .collect::<Result<Vec<_>>>()?;
    let literal_matches = checks
        .iter()
        .filter(|c| c.discrepancy_literal <= c.tolerance)
        .count();
    let derived_matches = checks
        .iter()
        .filter(|c| c.discrepancy_derived <= c.tolerance)
        .count();
    let matched_variant = if literal_matches == checks.len() {
        Some(IdentityVariant::Literal)
    } else if derived_matches == checks.len() {
        Some(IdentityVariant::Derived)
    } else {
        None
    };
    Ok(IdentitySweep {
        seed,
        checks,
        matched_variant,
        literal_matches,
        derived_matches,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformConvergenceRow {
    pub n: usize,
    pub sup_deviation: f64,
    pub argsup: f64,
    /// Sup over the probes of `2Δa_{N-1}/sin²(πt) + a_N/|sin(πt)|` plus the truncation bound of `f`.
    pub envelope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformConvergenceReport {
    pub rows: Vec<UniformConvergenceRow>,
    pub threshold: f64,
    pub probes: usize,
    /// Sup deviation at the largest N is at most the one at the smallest N.
    pub non_increasing_trend: bool,
    pub below_threshold: bool,
}

/// Sup of `|S_N - f|` over probe points spread evenly through `set`.
pub fn uniform_convergence_check(
    seq: &ConvexSequence,
    set: &IntervalUnion,
    ns: &[usize],
    probe_count: usize,
    j_max: usize,
    threshold: f64,
) -> Result<UniformConvergenceReport> {
    if set.distance_to_origin() <= 0.0 {
        return Err(Error::ContainsOrigin(set.to_string()));
    }
    if probe_count == 0 || ns.is_empty() {
        return Err(Error::InvalidArgument("need at least one probe and one N".into()));
    }
    let rep = FejerRepresentation::new(seq, j_max)?;
    let probes = set.spread_points(probe_count);
    let f: Vec<FejerValue> = probes.par_iter().map(|&t| rep.eval(t)).collect();
    let rows: Vec<UniformConvergenceRow> = ns
        .iter()
        .map(|&n| {
            let n = n.max(1);
            let da = seq.first_difference(n - 1);
            let an = seq.value(n);
            let mut sup = 0.0;
            let mut argsup = probes[0];
            let mut envelope: f64 = 0.0;
            for (&t, fv) in probes.iter().zip(&f) {
                let dev = (partial_sum(seq, n, t) - fv.value).abs();
                if dev > sup {
                    sup = dev;
                    argsup = t;
                }
                let s = sin_pi(t).abs();
                envelope = envelope.max(2.0 * da / (s * s) + an / s + fv.tail_bound);
            }
            UniformConvergenceRow {
                n,
                sup_deviation: sup,
                argsup,
                envelope,
            }
        })
        .collect();
    let first = rows.first().map(|r| r.sup_deviation).unwrap_or(0.0);
    let last = rows.last().map(|r| r.sup_deviation).unwrap_or(0.0);
    Ok(UniformConvergenceReport {
        non_increasing_trend: last <= first,
        below_threshold: last <= threshold,
        rows,
        threshold,
        probes: probe_count,
    })
}
