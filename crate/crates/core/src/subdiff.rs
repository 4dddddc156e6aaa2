//! Function oracles and the sampled proximal subdifferential.
//!
//! The concrete subdifferential used throughout the crate is the proximal
//! one: a pair `(p, x*)` with `x* = tilt + (x − p)/λ` where `p` minimizes
//! `y ↦ f(y) − ⟨tilt, y⟩ + ‖y − x‖²/(2λ)` over a finite grid. Tilting sweeps
//! out multi-valued subdifferentials at kinks; the grid minimization is
//! exhaustive plus a local zoom (receding 10× passes around the incumbent),
//! which stays sound for merely lower semicontinuous functions where
//! gradient methods are not. The zoom matters because the covector
//! `tilt + (x − p)/λ` magnifies any quantization of `p` by `1/λ`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::vecmath::{self, dist, dot};

/// Membership tolerance for analytically generated inputs.
pub const DEFAULT_TOL_ANALYTIC: f64 = 1e-9;
/// Membership tolerance for grid-sampled inputs (quantization noise).
pub const DEFAULT_TOL_SAMPLED: f64 = 1e-6;

/// Componentwise tolerance under which two samples count as duplicates.
const DEDUP_TOL: f64 = 1e-12;

type EvalFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type SubgradFn = dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync;

/// An extended-real-valued function on ℝⁿ. Evaluations may return `+∞`;
/// `NaN` and `−∞` are contract violations surfaced as errors by the
/// pipelines. Oracles must be side-effect-free and re-entrant.
#[derive(Clone)]
pub struct FunctionOracle {
    name: String,
    domain: crate::grid::DomainBox,
    eval_fn: Arc<EvalFn>,
    subgrad_fn: Option<Arc<SubgradFn>>,
}

impl std::fmt::Debug for FunctionOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionOracle")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("analytic_subgrad", &self.subgrad_fn.is_some())
            .finish()
    }
}

impl FunctionOracle {
    pub fn new(
        name: impl Into<String>,
        domain: crate::grid::DomainBox,
        eval_fn: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain,
            eval_fn: Arc::new(eval_fn),
            subgrad_fn: None,
        }
    }

    pub fn with_analytic_subgrad(
        mut self,
        subgrad: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.subgrad_fn = Some(Arc::new(subgrad));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &crate::grid::DomainBox {
        &self.domain
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval_fn)(x)
    }

    /// Evaluation that enforces the extended-real contract.
    pub fn eval_checked(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() || !vecmath::all_finite(x) {
            return Err(Error::InvalidInput(format!(
                "oracle '{}' evaluated at a bad point {x:?}",
                self.name
            )));
        }
        let v = self.eval(x);
        if v.is_nan() || v == f64::NEG_INFINITY {
            return Err(Error::InvalidInput(format!(
                "oracle '{}' returned {v} at {x:?}; values must be finite or +inf",
                self.name
            )));
        }
        Ok(v)
    }

    /// Analytic subgradient set at `x`, when the oracle carries one.
    pub fn analytic_subgradients(&self, x: &[f64]) -> Option<Vec<Vec<f64>>> {
        self.subgrad_fn.as_ref().map(|f| f(x))
    }

    /// The tilted oracle `f + ⟨v, ·⟩`, sharing this oracle's domain.
    pub fn tilted(&self, v: &[f64]) -> FunctionOracle {
        let v = v.to_vec();
        let base = self.eval_fn.clone();
        let sub = self.subgrad_fn.clone();
        let vq = v.clone();
        let mut out = FunctionOracle {
            name: format!("{}+linear", self.name),
            domain: self.domain.clone(),
            eval_fn: Arc::new(move |x: &[f64]| base(x) + dot(&v, x)),
            subgrad_fn: None,
        };
        if let Some(sf) = sub {
            out.subgrad_fn = Some(Arc::new(move |x: &[f64]| {
                sf(x)
                    .into_iter()
                    .map(|g| vecmath::add(&g, &vq))
                    .collect()
            }));
        }
        out
    }
}

/// One sample of a subdifferential graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSample {
    pub x: Vec<f64>,
    pub xstar: Vec<f64>,
    pub fx: f64,
}

/// Finite sample of a subdifferential graph. A base point may carry several
/// covectors (multi-valued subdifferentials at kinks); duplicates are pairs
/// equal in both components up to `1e−12`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SubgradientGraph {
    samples: Vec<GraphSample>,
}

impl SubgradientGraph {
    pub fn from_samples(samples: Vec<GraphSample>) -> Result<Self> {
        let mut g = Self::default();
        for s in samples {
            if !vecmath::all_finite(&s.x) || !vecmath::all_finite(&s.xstar) || !s.fx.is_finite() {
                return Err(Error::InvalidInput("graph sample has non-finite entry".into()));
            }
            g.push_dedup(s);
        }
        Ok(g)
    }

    /// Graph of an analytic subgradient oracle over the finite-value grid
    /// points.
    pub fn from_analytic(f: &FunctionOracle, grid: &Grid) -> Result<Self> {
        if f.subgrad_fn.is_none() {
            return Err(Error::InvalidInput(format!(
                "oracle '{}' has no analytic subgradient",
                f.name()
            )));
        }
        let mut g = Self::default();
        for x in grid.iter() {
            let fx = f.eval_checked(&x)?;
            if !fx.is_finite() {
                continue;
            }
            for xstar in f.analytic_subgradients(&x).unwrap_or_default() {
                g.push_dedup(GraphSample { x: x.clone(), xstar, fx });
            }
        }
        if g.is_empty() {
            return Err(Error::EmptyGraph(format!(
                "analytic graph of '{}' has no finite samples",
                f.name()
            )));
        }
        Ok(g)
    }

    fn push_dedup(&mut self, s: GraphSample) {
        let dup = self.samples.iter().any(|t| {
            close(&t.x, &s.x, DEDUP_TOL) && close(&t.xstar, &s.xstar, DEDUP_TOL)
        });
        if !dup {
            self.samples.push(s);
        }
    }

    pub fn samples(&self) -> &[GraphSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Result of a grid-restricted Fenchel membership check.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipCert {
    pub holds: bool,
    /// Largest value of `⟨x*, y−x⟩ − (f(y) − f(x))` over the grid.
    pub worst_violation: f64,
    pub witness: Option<Vec<f64>>,
}

/// Desk-scale certificate that `x* ∈ ∂f(x)` in the Fenchel sense, restricted
/// to a verification grid: `⟨x*, y − x⟩ ≤ f(y) − f(x) + tol` for every grid
/// point `y` with finite value.
pub fn fenchel_membership(
    f: &FunctionOracle,
    x: &[f64],
    xstar: &[f64],
    grid: &Grid,
    tol: f64,
) -> Result<MembershipCert> {
    let fx = f.eval_checked(x)?;
    if !fx.is_finite() {
        return Err(Error::InvalidInput(format!(
            "fenchel membership needs f(x) finite, got f({x:?}) = +inf"
        )));
    }
    if xstar.len() != x.len() || !vecmath::all_finite(xstar) {
        return Err(Error::InvalidInput("covector is malformed".into()));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    let mut any = false;
    for y in grid.iter() {
        let fy = f.eval_checked(&y)?;
        if !fy.is_finite() {
            continue;
        }
        any = true;
        let violation = dot(xstar, &vecmath::sub(&y, x)) - (fy - fx);
        if violation > worst {
            worst = violation;
            witness = Some(y);
        }
    }
    if !any {
        return Err(Error::InvalidInput(
            "fenchel membership grid has no finite-value points".into(),
        ));
    }
    let holds = worst <= tol;
    Ok(MembershipCert {
        holds,
        worst_violation: worst,
        witness: if holds { None } else { witness },
    })
}

/// Output of one proximal minimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProxPair {
    pub x: Vec<f64>,
    pub xstar: Vec<f64>,
    pub fx: f64,
}

/// Grid values of an oracle, cached so repeated sweeps do not re-evaluate.
pub(crate) struct EvaluatedGrid<'g> {
    pub grid: &'g Grid,
    pub values: Vec<f64>,
}

impl<'g> EvaluatedGrid<'g> {
    pub fn new(f: &FunctionOracle, grid: &'g Grid) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            values.push(f.eval_checked(&grid.point(i))?);
        }
        Ok(Self { grid, values })
    }

    pub fn any_finite(&self) -> bool {
        self.values.iter().any(|v| v.is_finite())
    }
}

/// Zoom passes of the local prox refinement; each pass raises the local
/// resolution 10×, so the minimizer is pinned to ~1e−4 of a coarse cell.
const ZOOM_PASSES: usize = 4;
const ZOOM_POINTS: usize = 21;

pub(crate) fn prox_core(
    f: &FunctionOracle,
    eg: &EvaluatedGrid,
    x: &[f64],
    lambda: f64,
    tilt: &[f64],
    refine: bool,
) -> Result<Option<ProxPair>> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidInput(format!("prox needs λ > 0, got {lambda}")));
    }
    if x.len() != eg.grid.dim() || !vecmath::all_finite(x) {
        return Err(Error::InvalidInput("prox base point is malformed".into()));
    }
    if tilt.len() != x.len() || !vecmath::all_finite(tilt) {
        return Err(Error::InvalidInput("prox tilt is malformed".into()));
    }

    let objective = |p: &[f64], fp: f64| {
        let d = dist(p, x);
        fp - dot(tilt, p) + d * d / (2.0 * lambda)
    };

    let mut best: Option<(usize, f64)> = None;
    for (i, &fp) in eg.values.iter().enumerate() {
        if !fp.is_finite() {
            continue;
        }
        let obj = objective(&eg.grid.point(i), fp);
        if best.is_none_or(|(_, b)| obj < b) {
            best = Some((i, obj));
        }
    }
    let Some((inc_idx, inc_obj)) = best else {
        return Err(Error::InvalidInput(
            "prox objective is +inf on the entire grid".into(),
        ));
    };

    let dim = eg.grid.dim();
    let bounds = &eg.grid.bounds;
    let mut p = eg.grid.point(inc_idx);
    let mut p_obj = inc_obj;
    let mut p_val = eg.values[inc_idx];

    if refine {
        let n = eg.grid.points_per_axis;
        let mut half: Vec<f64> = (0..dim)
            .map(|a| (bounds.hi[a] - bounds.lo[a]) / ((n - 1) as f64))
            .collect();
        for _pass in 0..ZOOM_PASSES {
            // Freeze the window around the current incumbent, clipped to the
            // domain box, then scan it at 10× the current resolution.
            let lo_w: Vec<f64> = (0..dim).map(|a| (p[a] - half[a]).max(bounds.lo[a])).collect();
            let hi_w: Vec<f64> = (0..dim).map(|a| (p[a] + half[a]).min(bounds.hi[a])).collect();
            let total = ZOOM_POINTS.pow(dim as u32);
            for flat in 0..total {
                let mut rest = flat;
                let mut y = vec![0.0; dim];
                for a in (0..dim).rev() {
                    let i = rest % ZOOM_POINTS;
                    rest /= ZOOM_POINTS;
                    y[a] = (lo_w[a]
                        + (i as f64) * (hi_w[a] - lo_w[a]) / ((ZOOM_POINTS - 1) as f64))
                        .clamp(bounds.lo[a], bounds.hi[a]);
                }
                let fy = f.eval_checked(&y)?;
                if !fy.is_finite() {
                    continue;
                }
                let obj = objective(&y, fy);
                if obj < p_obj {
                    p_obj = obj;
                    p_val = fy;
                    p = y;
                }
            }
            for a in 0..dim {
                half[a] = (hi_w[a] - lo_w[a]) / ((ZOOM_POINTS - 1) as f64);
            }
        }
    }

    // A final minimizer pressed against the domain box means the quadratic
    // penalty failed to localize; absence is the contracted outcome.
    let touches_boundary = (0..dim).any(|a| {
        let span = bounds.hi[a] - bounds.lo[a];
        p[a] <= bounds.lo[a] + 1e-9 * span || p[a] >= bounds.hi[a] - 1e-9 * span
    });
    if touches_boundary {
        return Ok(None);
    }

    let xstar: Vec<f64> = tilt
        .iter()
        .zip(x.iter().zip(&p))
        .map(|(t, (xi, pi))| t + (xi - pi) / lambda)
        .collect();
    Ok(Some(ProxPair { x: p, xstar, fx: p_val }))
}

/// Tilted proximal subgradient of `f` near `x`: minimizes
/// `f(y) − ⟨tilt, y⟩ + ‖y − x‖²/(2λ)` over the grid, sharpens the incumbent
/// with the local zoom, and returns `(p, tilt + (x − p)/λ)`, or `None` when
/// the minimizer presses against the domain boundary.
pub fn proximal_subgradient(
    f: &FunctionOracle,
    grid: &Grid,
    x: &[f64],
    lambda: f64,
    tilt: &[f64],
) -> Result<Option<ProxPair>> {
    let eg = EvaluatedGrid::new(f, grid)?;
    prox_core(f, &eg, x, lambda, tilt, true)
}

/// Sampling plan for [`sample_graph`].
#[derive(Debug, Clone, Serialize)]
pub struct SampleOptions {
    pub lambdas: Vec<f64>,
    pub tilt_count: usize,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self { lambdas: vec![0.1, 0.01], tilt_count: 5 }
    }
}

/// Empirical difference-quotient bound over axis-adjacent grid points with
/// finite values; scales the default tilt spread.
pub fn empirical_lipschitz(values: &[f64], grid: &Grid) -> f64 {
    let dim = grid.dim();
    let n = grid.points_per_axis;
    let mut l = 0.0_f64;
    let mut stride = vec![1usize; dim];
    for a in (0..dim.saturating_sub(1)).rev() {
        stride[a] = stride[a + 1] * n;
    }
    for i in 0..grid.len() {
        if !values[i].is_finite() {
            continue;
        }
        let mut rest = i;
        let mut idx = vec![0usize; dim];
        for a in (0..dim).rev() {
            idx[a] = rest % n;
            rest /= n;
        }
        for a in 0..dim {
            if idx[a] + 1 >= n {
                continue;
            }
            let j = i + stride[a];
            if !values[j].is_finite() {
                continue;
            }
            let h = (grid.bounds.hi[a] - grid.bounds.lo[a]) / ((n - 1) as f64);
            l = l.max((values[j] - values[i]).abs() / h);
        }
    }
    l
}

fn default_tilts(lhat: f64, dim: usize, tilt_count: usize) -> Vec<Vec<f64>> {
    let magnitudes: Vec<f64> = if tilt_count <= 1 || lhat == 0.0 {
        vec![0.0]
    } else {
        (0..tilt_count)
            .map(|i| -lhat + (i as f64) * (2.0 * lhat) / ((tilt_count - 1) as f64))
            .collect()
    };
    let mut tilts: Vec<Vec<f64>> = Vec::new();
    for axis in 0..dim {
        for &m in &magnitudes {
            let mut t = vec![0.0; dim];
            t[axis] = m;
            if !tilts.iter().any(|u| close(u, &t, 0.0)) {
                tilts.push(t);
            }
        }
    }
    tilts
}

pub(crate) fn sample_graph_with_tilts(
    f: &FunctionOracle,
    grid: &Grid,
    lambdas: &[f64],
    tilts: &[Vec<f64>],
) -> Result<SubgradientGraph> {
    let eg = EvaluatedGrid::new(f, grid)?;
    if !eg.any_finite() {
        return Err(Error::EmptyGraph(format!(
            "oracle '{}' is +inf on the sampling grid",
            f.name()
        )));
    }
    let mut graph = SubgradientGraph::default();
    for base in 0..grid.len() {
        let x = grid.point(base);
        for &lambda in lambdas {
            for tilt in tilts {
                if let Some(pair) = prox_core(f, &eg, &x, lambda, tilt, true)? {
                    graph.push_dedup(GraphSample {
                        x: pair.x,
                        xstar: pair.xstar,
                        fx: pair.fx,
                    });
                }
            }
        }
    }
    if graph.is_empty() {
        return Err(Error::EmptyGraph(format!(
            "sampling '{}' produced no interior proximal pairs",
            f.name()
        )));
    }
    Ok(graph)
}

/// Sweeps base points × λ values × tilt directions through the proximal
/// subgradient and returns the deduplicated graph. Deterministic for a fixed
/// grid and option set.
pub fn sample_graph(
    f: &FunctionOracle,
    grid: &Grid,
    opts: &SampleOptions,
) -> Result<SubgradientGraph> {
    if opts.lambdas.is_empty() || opts.lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::InvalidInput("λ schedule must be positive".into()));
    }
    let eg = EvaluatedGrid::new(f, grid)?;
    let lhat = empirical_lipschitz(&eg.values, grid);
    let tilts = default_tilts(lhat, grid.dim(), opts.tilt_count);
    sample_graph_with_tilts(f, grid, &opts.lambdas, &tilts)
}

/// Outcome of the graph-translation stability check.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub max_mismatch: f64,
    pub tol: f64,
    pub holds: bool,
    pub graph_size: usize,
    pub shifted_size: usize,
}

/// Checks that translating the function by a linear term translates the
/// sampled graph: every `(x, x*)` of `∂f` must match `(x, x* + v)` in the
/// sampled graph of `f + ⟨v, ·⟩` and conversely. The shifted sampling uses
/// tilts aligned by `+v` so the two sweeps solve identical minimizations.
pub fn check_stability(
    f: &FunctionOracle,
    v: &[f64],
    grid: &Grid,
    opts: &SampleOptions,
    tol: f64,
) -> Result<StabilityReport> {
    if v.len() != f.dim() || !vecmath::all_finite(v) {
        return Err(Error::InvalidInput("stability shift vector is malformed".into()));
    }
    let eg = EvaluatedGrid::new(f, grid)?;
    let lhat = empirical_lipschitz(&eg.values, grid);
    let tilts = default_tilts(lhat, grid.dim(), opts.tilt_count);
    let shifted_tilts: Vec<Vec<f64>> = tilts.iter().map(|t| vecmath::add(t, v)).collect();

    let g = sample_graph_with_tilts(f, grid, &opts.lambdas, &tilts)?;
    let fv = f.tilted(v);
    let gv = sample_graph_with_tilts(&fv, grid, &opts.lambdas, &shifted_tilts)?;

    let mismatch_of = |x: &[f64], xstar: &[f64], other: &SubgradientGraph| -> f64 {
        other
            .samples()
            .iter()
            .map(|s| {
                let dx = x
                    .iter()
                    .zip(&s.x)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0_f64, f64::max);
                let ds = xstar
                    .iter()
                    .zip(&s.xstar)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0_f64, f64::max);
                dx.max(ds)
            })
            .fold(f64::INFINITY, f64::min)
    };

    let mut worst = 0.0_f64;
    for s in g.samples() {
        let shifted = vecmath::add(&s.xstar, v);
        worst = worst.max(mismatch_of(&s.x, &shifted, &gv));
    }
    for s in gv.samples() {
        let unshifted = vecmath::sub(&s.xstar, v);
        worst = worst.max(mismatch_of(&s.x, &unshifted, &g));
    }
    Ok(StabilityReport {
        max_mismatch: worst,
        tol,
        holds: worst <= tol,
        graph_size: g.len(),
        shifted_size: gv.len(),
    })
}
