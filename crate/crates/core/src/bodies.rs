//! Bounded open convex neighbourhoods of the origin and their Minkowski
//! gauges.
//!
//! A body `U` here is always open, convex, bounded, and contains `0`. Its
//! gauge is `μ(x) = inf { λ > 0 : x ∈ λU }`, which is finite, positively
//! homogeneous, subadditive, and satisfies `b‖x‖ ≤ μ(x) ≤ c‖x‖` with
//! `b = 1/s` and `c = 1/δ` for any sandwich `δB ⊂ U ⊂ sB` in the Euclidean
//! norm. Membership is equivalent to `μ(x) < 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vecmath::{self, dot, norm1, norm2, norm_inf, project_segment, scale};

/// Relative bisection tolerance for gauges without a closed form. Far below
/// every property-test tolerance in the crate.
pub const GAUGE_TOL: f64 = 1e-10;

/// Norm order for ball bodies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PNorm {
    #[serde(rename = "1", alias = "one")]
    One,
    #[serde(rename = "2", alias = "two")]
    Two,
    #[serde(rename = "inf", alias = "infinity")]
    Inf,
}

/// Gauge evaluation result. `boundary_proximity` is `1 − value` inside the
/// body and `0` outside; it is positive exactly on the open body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeValue {
    pub value: f64,
    pub boundary_proximity: f64,
}

impl GaugeValue {
    fn new(value: f64) -> Self {
        let boundary_proximity = if value < 1.0 { 1.0 - value } else { 0.0 };
        Self { value, boundary_proximity }
    }
}

/// Euclidean sandwich radii: `inner·B ⊂ U ⊂ outer·B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusBounds {
    pub inner: f64,
    pub outer: f64,
}

impl RadiusBounds {
    /// `b` with `b‖x‖ ≤ μ(x)`.
    pub fn lower_constant(&self) -> f64 {
        1.0 / self.outer
    }

    /// `c` with `μ(x) ≤ c‖x‖`; also a Lipschitz constant for `μ`.
    pub fn upper_constant(&self) -> f64 {
        1.0 / self.inner
    }
}

/// A bounded open convex neighbourhood of `0`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    /// `U = { x : ⟨aᵢ, x⟩ < 1 for all i }`, bounded (the normals positively
    /// span the space).
    HalfspacePolytope { normals: Vec<Vec<f64>> },
    /// `U = { x : ‖x‖_p < radius }`.
    NormBall { dim: usize, radius: f64, p: PNorm },
    /// `U = [0, axis] + δ·B°`, the segment tube already translated so the
    /// anchor endpoint sits at the origin.
    SegmentTube { axis: Vec<f64>, delta: f64 },
}

impl ConvexBody {
    pub fn polytope(normals: Vec<Vec<f64>>) -> Result<Self> {
        if normals.is_empty() {
            return Err(Error::InvalidInput("polytope needs at least one normal".into()));
        }
        let dim = normals[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("polytope normals must be non-empty".into()));
        }
        for a in &normals {
            if a.len() != dim {
                return Err(Error::InvalidInput("polytope normals differ in dimension".into()));
            }
            if !vecmath::all_finite(a) {
                return Err(Error::InvalidInput("polytope normal has non-finite entry".into()));
            }
            if norm2(a) == 0.0 {
                return Err(Error::InvalidInput("polytope normal is zero".into()));
            }
        }
        let body = Self::HalfspacePolytope { normals };
        body.check_polytope_bounded()?;
        Ok(body)
    }

    pub fn ball(dim: usize, radius: f64, p: PNorm) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("ball dimension must be positive".into()));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidInput(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self::NormBall { dim, radius, p })
    }

    /// Tube body `([p, q] + δ·B°) − {p}`: the anchor `p` maps to the origin.
    pub fn tube(p: &[f64], q: &[f64], delta: f64) -> Result<Self> {
        if p.len() != q.len() || p.is_empty() {
            return Err(Error::InvalidInput(
                "tube endpoints must be non-empty and of equal dimension".into(),
            ));
        }
        if !vecmath::all_finite(p) || !vecmath::all_finite(q) {
            return Err(Error::InvalidInput("tube endpoint has non-finite entry".into()));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidInput(format!("tube radius must be positive, got {delta}")));
        }
        Ok(Self::SegmentTube { axis: vecmath::sub(q, p), delta })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::HalfspacePolytope { normals } => normals[0].len(),
            Self::NormBall { dim, .. } => *dim,
            Self::SegmentTube { axis, .. } => axis.len(),
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "point dimension {} does not match body dimension {}",
                x.len(),
                self.dim()
            )));
        }
        if !vecmath::all_finite(x) {
            return Err(Error::InvalidInput("point has non-finite coordinate".into()));
        }
        Ok(())
    }

    /// Strict membership in the open body. Assumes finite coordinates.
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Self::HalfspacePolytope { normals } => normals.iter().all(|a| dot(a, x) < 1.0),
            Self::NormBall { radius, p, .. } => p_norm(x, *p) < *radius,
            Self::SegmentTube { axis, delta } => {
                let proj = project_segment(x, axis);
                vecmath::dist(x, &proj) < *delta
            }
        }
    }

    /// Minkowski gauge `μ(x)`.
    pub fn gauge(&self, x: &[f64]) -> Result<GaugeValue> {
        self.check_dim(x)?;
        let value = match self {
            Self::HalfspacePolytope { normals } => normals
                .iter()
                .map(|a| dot(a, x))
                .fold(0.0_f64, f64::max),
            Self::NormBall { radius, p, .. } => p_norm(x, *p) / radius,
            Self::SegmentTube { .. } => self.gauge_by_bisection(x),
        };
        Ok(GaugeValue::new(value))
    }

    /// Bisection on `λ ↦ [x/λ ∈ U]`, valid for any of the variants; the tube
    /// gauge has no closed form so this is its evaluation path.
    fn gauge_by_bisection(&self, x: &[f64]) -> f64 {
        if norm2(x) == 0.0 {
            return 0.0;
        }
        let rb = self.radius_bounds();
        let nx = norm2(x);
        // Sandwich bracket μ ∈ [‖x‖/s, ‖x‖/δ], padded so the invariant
        // (inside at hi, outside at lo) holds after rounding.
        let mut hi = nx / rb.inner * (1.0 + 1e-9);
        let mut lo = nx / rb.outer * (1.0 - 1e-9);
        let mut guard = 0;
        while !self.contains(&scale(x, 1.0 / hi)) {
            hi *= 2.0;
            guard += 1;
            assert!(guard < 200, "gauge bracket expansion failed");
        }
        while self.contains(&scale(x, 1.0 / lo)) {
            lo *= 0.5;
            guard += 1;
            assert!(guard < 400, "gauge bracket shrink failed");
        }
        while hi - lo > GAUGE_TOL * hi {
            let mid = 0.5 * (lo + hi);
            if self.contains(&scale(x, 1.0 / mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// One element of the Fenchel subdifferential of the gauge at `x`:
    /// `⟨g, y − x⟩ ≤ μ(y) − μ(x)` for all `y`.
    ///
    /// At `μ(x) = 0` (i.e. `x = 0` for a valid bounded body) the zero
    /// covector is returned; it is always valid there since `μ ≥ 0 = μ(0)`.
    pub fn gauge_subgradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mu = self.gauge(x)?.value;
        if mu <= 0.0 {
            return Ok(vec![0.0; self.dim()]);
        }
        match self {
            Self::HalfspacePolytope { normals } => {
                // Active normal, ties broken by lowest index.
                let mut best = 0;
                let mut best_val = dot(&normals[0], x);
                for (i, a) in normals.iter().enumerate().skip(1) {
                    let v = dot(a, x);
                    if v > best_val {
                        best = i;
                        best_val = v;
                    }
                }
                Ok(normals[best].clone())
            }
            Self::NormBall { radius, p, .. } => Ok(match p {
                PNorm::Two => scale(x, 1.0 / (radius * norm2(x))),
                PNorm::One => x.iter().map(|v| sign(*v) / radius).collect(),
                PNorm::Inf => {
                    let mut j = 0;
                    for (i, v) in x.iter().enumerate().skip(1) {
                        if v.abs() > x[j].abs() {
                            j = i;
                        }
                    }
                    let mut g = vec![0.0; x.len()];
                    g[j] = sign(x[j]) / radius;
                    g
                }
            }),
            Self::SegmentTube { axis, delta } => {
                // z = x/μ(x) sits on the boundary; the outward unit normal of
                // the supporting hyperplane there is (z − proj)/δ, and scaling
                // it so it evaluates to 1 at z makes it a gauge subgradient.
                let z = scale(x, 1.0 / mu);
                let proj = project_segment(&z, axis);
                let u = vecmath::sub(&z, &proj);
                let nu = norm2(&u);
                if nu <= 1e-9 * delta {
                    return Err(Error::Internal(
                        "tube boundary point collapsed onto the segment".into(),
                    ));
                }
                let unit = scale(&u, 1.0 / nu);
                let denom = dot(&unit, &z);
                if denom <= 0.0 {
                    return Err(Error::Internal("tube support value non-positive".into()));
                }
                Ok(scale(&unit, 1.0 / denom))
            }
        }
    }

    /// Euclidean sandwich radii `(δ, s)` with `δB ⊂ cl U ⊂ sB`.
    ///
    /// Polytopes use exact endpoint/vertex enumeration in ℝ¹/ℝ² and sampled
    /// support directions with a 1.01 safety factor on `s` above that; tubes
    /// use support-function sampling (64 directions in ℝ², more in higher
    /// dimension) with the same 1.01 factor, so `s` may overestimate the true
    /// outer radius by up to a few percent but never undershoots it.
    pub fn radius_bounds(&self) -> RadiusBounds {
        match self {
            Self::NormBall { dim, radius, p } => {
                let root = (*dim as f64).sqrt();
                let (inner, outer) = match p {
                    PNorm::Two => (*radius, *radius),
                    PNorm::One => (*radius / root, *radius),
                    PNorm::Inf => (*radius, *radius * root),
                };
                RadiusBounds { inner, outer }
            }
            Self::HalfspacePolytope { normals } => {
                let max_norm = normals.iter().map(|a| norm2(a)).fold(0.0, f64::max);
                let inner = 1.0 / max_norm;
                let outer = match self.dim() {
                    1 => {
                        let mut right = f64::INFINITY;
                        let mut left = f64::NEG_INFINITY;
                        for a in normals {
                            let a = a[0];
                            if a > 0.0 {
                                right = right.min(1.0 / a);
                            } else {
                                left = left.max(1.0 / a);
                            }
                        }
                        right.max(-left)
                    }
                    2 => polytope_outer_radius_2d(normals),
                    _ => {
                        let dirs = sphere_directions(self.dim(), 1024);
                        let mut s = 0.0_f64;
                        for d in &dirs {
                            let mu = normals.iter().map(|a| dot(a, d)).fold(0.0_f64, f64::max);
                            if mu > 0.0 {
                                s = s.max(1.0 / mu);
                            }
                        }
                        s * 1.01
                    }
                };
                RadiusBounds { inner, outer }
            }
            Self::SegmentTube { axis, delta } => {
                let dim = axis.len();
                let outer = match dim {
                    1 => {
                        let support = |d: f64| (d * axis[0]).max(0.0) + delta;
                        support(1.0).max(support(-1.0)) * 1.01
                    }
                    _ => {
                        let dirs = if dim == 2 {
                            circle_directions(64)
                        } else {
                            sphere_directions(dim, 512)
                        };
                        dirs.iter()
                            .map(|d| dot(axis, d).max(0.0) + delta)
                            .fold(0.0_f64, f64::max)
                            * 1.01
                    }
                };
                RadiusBounds { inner: *delta, outer }
            }
        }
    }

    fn check_polytope_bounded(&self) -> Result<()> {
        let Self::HalfspacePolytope { normals } = self else {
            return Ok(());
        };
        let unbounded = || {
            Error::InvalidInput(
                "polytope is unbounded: normals do not positively span the space".into(),
            )
        };
        match self.dim() {
            1 => {
                let has_pos = normals.iter().any(|a| a[0] > 0.0);
                let has_neg = normals.iter().any(|a| a[0] < 0.0);
                if has_pos && has_neg {
                    Ok(())
                } else {
                    Err(unbounded())
                }
            }
            2 => {
                // Bounded iff every open half-circle of directions contains a
                // normal, i.e. the largest circular gap between consecutive
                // normal angles is < π.
                let mut angles: Vec<f64> =
                    normals.iter().map(|a| a[1].atan2(a[0])).collect();
                angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
                let mut max_gap = 0.0_f64;
                for i in 0..angles.len() {
                    let next = if i + 1 == angles.len() {
                        angles[0] + 2.0 * std::f64::consts::PI
                    } else {
                        angles[i + 1]
                    };
                    max_gap = max_gap.max(next - angles[i]);
                }
                if max_gap < std::f64::consts::PI {
                    Ok(())
                } else {
                    Err(unbounded())
                }
            }
            dim => {
                // Sampled check: some recession direction survives iff the
                // gauge vanishes along a direction.
                let dirs = sphere_directions(dim, 1024);
                for d in &dirs {
                    let mu = normals.iter().map(|a| dot(a, d)).fold(0.0_f64, f64::max);
                    if mu <= 1e-9 {
                        return Err(unbounded());
                    }
                }
                Ok(())
            }
        }
    }
}

/// Builds the segment-tube body `([p, q] + δ·B°) − {p}`.
pub fn tube_body(p: &[f64], q: &[f64], delta: f64) -> Result<ConvexBody> {
    ConvexBody::tube(p, q, delta)
}

fn p_norm(x: &[f64], p: PNorm) -> f64 {
    match p {
        PNorm::One => norm1(x),
        PNorm::Two => norm2(x),
        PNorm::Inf => norm_inf(x),
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Exact outer radius of a bounded 2-D polytope via vertex enumeration.
fn polytope_outer_radius_2d(normals: &[Vec<f64>]) -> f64 {
    let m = normals.len();
    let mut s = 0.0_f64;
    for i in 0..m {
        for j in (i + 1)..m {
            let (ai, aj) = (&normals[i], &normals[j]);
            let det = ai[0] * aj[1] - ai[1] * aj[0];
            if det.abs() <= 1e-12 * norm2(ai) * norm2(aj) {
                continue;
            }
            let v = [(aj[1] - ai[1]) / det, (ai[0] - aj[0]) / det];
            let feasible = normals.iter().all(|a| dot(a, &v) <= 1.0 + 1e-9);
            if feasible {
                s = s.max(norm2(&v));
            }
        }
    }
    s
}

fn circle_directions(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
            vec![theta.cos(), theta.sin()]
        })
        .collect()
}

/// Deterministic, roughly uniform unit directions: Fibonacci lattice in ℝ³,
/// seeded rejection sampling above that.
fn sphere_directions(dim: usize, count: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => circle_directions(count),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / (count as f64);
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * k as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        _ => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            let mut dirs = Vec::with_capacity(count);
            while dirs.len() < count {
                let d: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = norm2(&d);
                if n > 1e-3 && n <= 1.0 {
                    dirs.push(scale(&d, 1.0 / n));
                }
            }
            dirs
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Interval (−1, 2) ⊂ ℝ as a polytope: x < 2 from a₁ = 1/2, x > −1 from
    /// a₂ = −1.
    fn interval_body() -> ConvexBody {
        ConvexBody::polytope(vec![vec![0.5], vec![-1.0]]).unwrap()
    }

    /// Independent oracle: bisection straight off the definition
    /// inf { λ > 0 : x ∈ λU }, using only `contains`.
    fn oracle_gauge(body: &ConvexBody, x: &[f64]) -> f64 {
        if norm2(x) == 0.0 {
            return 0.0;
        }
        let mut hi = 1e-6;
        while !body.contains(&scale(x, 1.0 / hi)) {
            hi *= 2.0;
            assert!(hi < 1e12, "oracle bracket failed");
        }
        let mut lo = hi / 2.0;
        while body.contains(&scale(x, 1.0 / lo)) {
            lo /= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if body.contains(&scale(x, 1.0 / mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Fenchel membership of `g` for the gauge at `x` over a grid of probes.
    fn gauge_fenchel_ok(body: &ConvexBody, x: &[f64], g: &[f64], tol: f64) -> bool {
        let dim = body.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mux = body.gauge(x).unwrap().value;
        for _ in 0..1000 {
            let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let muy = body.gauge(&y).unwrap().value;
            let lhs = dot(g, &vecmath::sub(&y, x));
            if lhs > muy - mux + tol {
                return false;
            }
        }
        true
    }

    #[test]
    fn gauge_unit_sphere_point() {
        let ball = ConvexBody::ball(2, 1.0, PNorm::Two).unwrap();
        let g = ball.gauge(&[0.6, 0.8]).unwrap();
        assert!((g.value - 1.0).abs() < 1e-12);
        assert_eq!(g.boundary_proximity, 0.0);
    }

    #[test]
    fn gauge_vanishes_at_origin_for_every_variant() {
        let bodies = [
            interval_body(),
            ConvexBody::ball(3, 2.5, PNorm::Inf).unwrap(),
            ConvexBody::tube(&[0.0, 0.0], &[1.0, 0.0], 0.5).unwrap(),
        ];
        for b in &bodies {
            let z = vec![0.0; b.dim()];
            assert_eq!(b.gauge(&z).unwrap().value, 0.0);
        }
    }

    #[test]
    fn gauge_interval_polytope_frozen_values() {
        let b = interval_body();
        // Frozen from the bisection oracle on inf { λ : x ∈ λ(−1,2) }.
        assert!((oracle_gauge(&b, &[1.0]) - 0.5).abs() < 1e-9);
        assert!((oracle_gauge(&b, &[-0.5]) - 0.5).abs() < 1e-9);
        assert!((b.gauge(&[1.0]).unwrap().value - 0.5).abs() < 1e-12);
        assert!((b.gauge(&[-0.5]).unwrap().value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gauge_rejects_non_finite_points() {
        let b = interval_body();
        assert!(b.gauge(&[f64::NAN]).is_err());
        assert!(b.gauge(&[f64::INFINITY]).is_err());
        assert!(b.gauge_subgradient(&[f64::NAN]).is_err());
    }

    #[test]
    fn subgradient_ball_is_normalized_point() {
        let ball = ConvexBody::ball(2, 1.0, PNorm::Two).unwrap();
        let g = ball.gauge_subgradient(&[1.0, 0.0]).unwrap();
        assert_eq!(g, vec![1.0, 0.0]);
    }

    #[test]
    fn subgradient_interval_is_active_normal() {
        let b = interval_body();
        let g = b.gauge_subgradient(&[1.0]).unwrap();
        assert_eq!(g, vec![0.5]);
        assert!(gauge_fenchel_ok(&b, &[1.0], &g, 1e-9));
    }

    #[test]
    fn subgradient_at_origin_passes_fenchel_test() {
        let bodies = [
            interval_body(),
            ConvexBody::ball(2, 1.5, PNorm::One).unwrap(),
            ConvexBody::tube(&[0.0, 0.0], &[1.0, 0.0], 0.5).unwrap(),
        ];
        for b in &bodies {
            let z = vec![0.0; b.dim()];
            let g = b.gauge_subgradient(&z).unwrap();
            assert!(gauge_fenchel_ok(b, &z, &g, 1e-9));
        }
    }

    #[test]
    fn subgradient_tube_and_pnorm_pass_fenchel_test() {
        let tube = ConvexBody::tube(&[0.0, 0.0], &[1.0, 0.0], 0.5).unwrap();
        for x in [[0.7, 0.2], [-0.1, -0.3], [1.2, 0.1], [0.5, 0.45]] {
            let g = tube.gauge_subgradient(&x).unwrap();
            assert!(gauge_fenchel_ok(&tube, &x, &g, 1e-8), "tube failed at {x:?}");
        }
        for p in [PNorm::One, PNorm::Inf] {
            let ball = ConvexBody::ball(2, 2.0, p).unwrap();
            for x in [[0.3, -0.9], [1.0, 1.0], [-0.2, 0.0]] {
                let g = ball.gauge_subgradient(&x).unwrap();
                assert!(gauge_fenchel_ok(&ball, &x, &g, 1e-9));
            }
        }
    }

    #[test]
    fn radius_bounds_ball_is_tight() {
        let b = ConvexBody::ball(2, 2.0, PNorm::Two).unwrap();
        let rb = b.radius_bounds();
        assert_eq!((rb.inner, rb.outer), (2.0, 2.0));
    }

    #[test]
    fn radius_bounds_interval_frozen() {
        let rb = interval_body().radius_bounds();
        assert_eq!((rb.inner, rb.outer), (1.0, 2.0));
        assert_eq!(rb.lower_constant(), 0.5);
        assert_eq!(rb.upper_constant(), 1.0);
    }

    #[test]
    fn radius_bounds_tube_2d() {
        let tube = ConvexBody::tube(&[0.0, 0.0], &[1.0, 0.0], 0.5).unwrap();
        let rb = tube.radius_bounds();
        assert_eq!(rb.inner, 0.5);
        // True outer radius is ‖q−p‖ + δ = 1.5; sampling never undershoots
        // and the 1.01 factor caps the overshoot.
        assert!(rb.outer >= 1.5 && rb.outer <= 1.5 * 1.011, "outer = {}", rb.outer);
    }

    #[test]
    fn radius_bounds_polytope_2d_square() {
        let b = ConvexBody::polytope(vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ])
        .unwrap();
        let rb = b.radius_bounds();
        assert!((rb.inner - 1.0).abs() < 1e-12);
        assert!((rb.outer - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tube_degenerate_segment_is_a_ball() {
        let tube = ConvexBody::tube(&[0.5, -0.5], &[0.5, -0.5], 1.0).unwrap();
        for x in [[0.3, 0.4], [-0.9, 0.1], [0.0, 0.0]] {
            let mu = tube.gauge(&x).unwrap().value;
            assert!((mu - norm2(&x)).abs() < 1e-8, "x={x:?} mu={mu}");
        }
    }

    #[test]
    fn tube_1d_frozen_gauge() {
        // U = (−0.25, 1.25); gauge(0.5) = 0.4 since 0.5 ∈ λU first at λ = 0.4.
        let tube = ConvexBody::tube(&[0.0], &[1.0], 0.25).unwrap();
        let mu = tube.gauge(&[0.5]).unwrap().value;
        assert!((mu - 0.4).abs() < 1e-8);
        assert!((oracle_gauge(&tube, &[0.5]) - 0.4).abs() < 1e-9);
    }

    #[test]
    fn tube_contains_far_endpoint() {
        let tube = ConvexBody::tube(&[0.2, 0.1], &[1.0, 0.7], 0.3).unwrap();
        // q − p itself lies in U.
        let g = tube.gauge(&[0.8, 0.6]).unwrap();
        assert!(g.boundary_proximity > 0.0);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(ConvexBody::tube(&[0.0], &[1.0], 0.0).is_err());
        assert!(ConvexBody::tube(&[0.0], &[1.0], -1.0).is_err());
        assert!(ConvexBody::ball(2, 0.0, PNorm::Two).is_err());
        assert!(ConvexBody::polytope(vec![]).is_err());
        assert!(ConvexBody::polytope(vec![vec![0.0]]).is_err());
        // Unbounded: one-sided interval and a 2-D strip.
        assert!(ConvexBody::polytope(vec![vec![1.0]]).is_err());
        assert!(ConvexBody::polytope(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).is_err());
    }

    fn canonical_bodies() -> Vec<ConvexBody> {
        vec![
            ConvexBody::ball(2, 1.0, PNorm::Two).unwrap(),
            interval_body(),
            ConvexBody::tube(&[0.0, 0.0], &[1.0, 0.0], 0.5).unwrap(),
        ]
    }

    #[test]
    fn gauge_is_positively_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for body in canonical_bodies() {
            for _ in 0..300 {
                let x: Vec<f64> = (0..body.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let t: f64 = rng.gen_range(0.0..5.0);
                let mu = body.gauge(&x).unwrap().value;
                let mu_t = body.gauge(&scale(&x, t)).unwrap().value;
                assert!(
                    (mu_t - t * mu).abs() <= 1e-9 * (1.0 + t * mu),
                    "homogeneity failed: t={t} x={x:?}"
                );
            }
        }
    }

    #[test]
    fn gauge_is_subadditive_and_lipschitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for body in canonical_bodies() {
            let c = body.radius_bounds().upper_constant();
            for _ in 0..300 {
                let x: Vec<f64> = (0..body.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let y: Vec<f64> = (0..body.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let mx = body.gauge(&x).unwrap().value;
                let my = body.gauge(&y).unwrap().value;
                let ms = body.gauge(&vecmath::add(&x, &y)).unwrap().value;
                assert!(ms <= mx + my + 1e-9, "subadditivity failed");
                assert!(
                    (mx - my).abs() <= c * vecmath::dist(&x, &y) * (1.0 + 1e-9) + 1e-12,
                    "lipschitz failed"
                );
            }
        }
    }

    #[test]
    fn gauge_sandwich_and_level_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for body in canonical_bodies() {
            let rb = body.radius_bounds();
            let (b, c) = (rb.lower_constant(), rb.upper_constant());
            for _ in 0..300 {
                let x: Vec<f64> = (0..body.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let mu = body.gauge(&x).unwrap().value;
                let n = norm2(&x);
                assert!(b * n <= mu * (1.0 + 1e-9) + 1e-12, "lower sandwich failed");
                assert!(mu <= c * n * (1.0 + 1e-9) + 1e-12, "upper sandwich failed");
                assert_eq!(mu < 1.0, body.contains(&x), "level set failed at {x:?}");
            }
        }
    }
}
