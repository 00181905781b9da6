//! Dirichlet and Fejér kernels on the unit-length torus `[-1/2, 1/2)`.
//!
//! With `e(t) = exp(2πit)` the kernels are
//!
//! ```text
//! D_N(t) = Σ_{|n|≤N} e(nt)          = sin((2N+1)πt) / sin(πt)
//! F_j(t) = (1/(j+1)) Σ_{k≤j} D_k(t) = (1/(j+1)) (sin((j+1)πt) / sin(πt))²
//! ```
//!
//! so both integrate to one against the normalized measure. The closed forms
//! switch to a direct cosine sum whenever `|sin(πt)|` falls below
//! [`SINGULAR_THRESHOLD`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Below this value of `|sin(πt)|` the closed forms are replaced by direct sums.
pub const SINGULAR_THRESHOLD: f64 = 1e-8;

/// A point of the torus, stored as its canonical representative in `[-1/2, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct TorusPoint(f64);

impl TorusPoint {
    pub fn new(t: f64) -> Self {
        TorusPoint(canonical(t))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True when the input was not already in canonical position.
    pub fn was_reduced(t: f64) -> bool {
        canonical(t) != t
    }
}

impl From<f64> for TorusPoint {
    fn from(t: f64) -> Self {
        TorusPoint::new(t)
    }
}

/// Reduce `t` modulo one into `[-1/2, 1/2)`.
pub fn canonical(t: f64) -> f64 {
    if (-0.5..0.5).contains(&t) {
        return t;
    }
    let r = (t + 0.5).rem_euclid(1.0) - 0.5;
    // rem_euclid may round up to exactly 1.0 for tiny negative inputs
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// `x - 2·round(x/2)`, exact, in `[-1, 1]`.
fn reduce_mod_two(x: f64) -> f64 {
    x - 2.0 * (0.5 * x).round()
}

/// `sin(πx)`, reduced to `[-1/2, 1/2]` first so small results keep full
/// relative precision.
pub fn sin_pi(x: f64) -> f64 {
    let mut r = reduce_mod_two(x);
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

/// `cos(πx)` as `sin(π(1/2 - |x|))` after reduction.
pub fn cos_pi(x: f64) -> f64 {
    let r = reduce_mod_two(x).abs();
    (PI * (0.5 - r)).sin()
}

/// Dirichlet kernel `D_N(t)`.
pub fn dirichlet(n: usize, t: f64) -> f64 {
    let t = canonical(t);
    if t == 0.0 {
        return (2 * n + 1) as f64;
    }
    let s = sin_pi(t);
    if s.abs() < SINGULAR_THRESHOLD {
        return dirichlet_oracle(n, t);
    }
    sin_pi((2 * n + 1) as f64 * t) / s
}

/// Fejér kernel `F_j(t)`.
pub fn fejer(j: usize, t: f64) -> f64 {
    let t = canonical(t);
    if t == 0.0 {
        return (j + 1) as f64;
    }
    let s = sin_pi(t);
    if s.abs() < SINGULAR_THRESHOLD {
        return fejer_cosine_sum(j, t);
    }
    let r = sin_pi((j + 1) as f64 * t) / s;
    r * r / (j + 1) as f64
}

/// `D_N(t)` as the direct sum `1 + 2 Σ_{n=1..N} cos(2πnt)`.
pub fn dirichlet_oracle(n: usize, t: f64) -> f64 {
    let t = canonical(t);
    1.0 + 2.0 * (1..=n).map(|k| cos_pi(2.0 * k as f64 * t)).sum::<f64>()
}

/// `F_j(t)` as the mean `(1/(j+1)) Σ_{k=0..j} D_k(t)`, accumulating `D_k` term by term.
pub fn fejer_oracle(j: usize, t: f64) -> f64 {
    let t = canonical(t);
    let mut d = 1.0;
    let mut acc = 1.0;
    for k in 1..=j {
        d += 2.0 * cos_pi(2.0 * k as f64 * t);
        acc += d;
    }
    acc / (j + 1) as f64
}

/// `F_j(t) = 1 + 2 Σ_{k=1..j} (1 - k/(j+1)) cos(2πkt)`, used next to the singularity.
fn fejer_cosine_sum(j: usize, t: f64) -> f64 {
    let m = (j + 1) as f64;
    1.0 + 2.0
        * (1..=j)
            .map(|k| (1.0 - k as f64 / m) * cos_pi(2.0 * k as f64 * t))
            .sum::<f64>()
}
