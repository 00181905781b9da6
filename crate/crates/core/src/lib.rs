//! Convex-coefficient cosine series `a_0 + 2Σ a_n cos(2πnt)` on the torus
//! `[-1/2, 1/2)`: kernels, partial sums, L¹ quadrature, Dirichlet extrema,
//! exceptional-set witnesses and convergence diagnostics.

pub mod coefficients;
pub mod diagnostics;
pub mod error;
pub mod exceptional;
pub mod extrema;
pub mod kernels;
pub mod partial_sums;
pub mod quadrature;
pub mod roots;

pub use coefficients::{ConvexSequence, GrowthClass, TailRule};
pub use error::{Error, Result};
pub use kernels::{dirichlet, fejer, TorusPoint};
pub use partial_sums::{partial_sum, PartialSum, PartialSumEvaluator};
pub use quadrature::{IntervalUnion, NormTrace, QuadResult, QuadSettings, TraceKind};
pub use diagnostics::{analyze_trace, ConvergenceVerdict, Verdict};
pub use exceptional::{build_witness, WitnessSet};
pub use extrema::{find_extrema, ExtremaTable};
