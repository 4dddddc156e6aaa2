//! Gauge functions, barrier calculus, and a convexity certifier for lower
//! semicontinuous functions on ℝⁿ (n ≤ 3 for grid-based pipelines).
//!
//! The crate is organized around five numeric subsystems plus a CLI layer:
//!
//! - [`bodies`]: bounded open convex neighbourhoods of the origin (polytopes,
//!   norm balls, segment tubes) with their Minkowski gauges, gauge
//!   subgradients, and inner/outer radius constants.
//! - [`barrier`]: the rational barrier `k(x) = μ(x)/(1−μ(x))` over a convex
//!   body, extended by `+∞` outside, with subgradients and certified level-set
//!   Lipschitz constants.
//! - [`subdiff`]: function oracles, a sampled proximal subdifferential,
//!   Fenchel-membership certification, and the graph-translation stability
//!   check.
//! - [`variational`]: a constructive Ekeland variational principle on finite
//!   grids and an instrumented two-sequence minimization trace with
//!   convergence diagnostics.
//! - [`certify`]: pairwise monotonicity checking, the monotone-relation
//!   (Minty) test, the affine subgradient envelope, and the
//!   monotone-graph ⇒ convex-function certification pipeline.
//!
//! Everything operates on plain `f64` slices; `+∞` is a legal extended value,
//! `NaN` and `−∞` are rejected at the pipeline boundaries.

#![forbid(unsafe_code)]

pub mod barrier;
pub mod bodies;
pub mod certify;
pub mod cli;
pub mod error;
pub mod expr;
pub mod grid;
pub mod registry;
pub mod subdiff;
pub mod variational;
pub mod vecmath;

pub use barrier::{Barrier, BarrierWithLinear};
pub use bodies::{ConvexBody, GaugeValue, PNorm, RadiusBounds};
pub use certify::{
    CertificationReport, CertifyOptions, MintyReport, MonotonicityReport, Verdict,
};
pub use error::{Error, Result};
pub use grid::{DomainBox, Grid};
pub use subdiff::{
    FunctionOracle, GraphSample, MembershipCert, ProxPair, SampleOptions, StabilityReport,
    SubgradientGraph,
};
pub use variational::{EkelandResult, TraceConfig, TraceRecord, TraceStep};
