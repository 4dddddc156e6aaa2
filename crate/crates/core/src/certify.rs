//! Monotonicity checking and the monotone-graph ⇒ convex-function
//! certification pipeline.
//!
//! The pipeline samples a proximal subdifferential graph, sweeps all
//! unordered pairs for monotonicity, and compares the function against its
//! affine subgradient envelope `g(x̄) = max {f(x) + ⟨x*, x̄ − x⟩}` at a set of
//! test points. A monotone graph whose envelope reproduces the function is
//! certified convex; a violating pair or an envelope poking above the
//! function is a concrete nonconvexity witness; anything else (typically
//! under-sampling, e.g. a domain that is disconnected on the grid) stays
//! inconclusive.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::subdiff::{
    empirical_lipschitz, sample_graph, EvaluatedGrid, FunctionOracle, GraphSample, SampleOptions,
    SubgradientGraph,
};
use crate::vecmath::{dot, sub};

/// Exact pairwise sweeps refuse graphs larger than this.
pub const MAX_PAIRWISE_GRAPH: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MonoVerdict {
    #[serde(rename = "monotone")]
    Monotone,
    #[serde(rename = "violated")]
    Violated,
}

/// Result of the exact O(m²) pairwise monotonicity sweep.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub verdict: MonoVerdict,
    /// Minimum of ⟨x₂*−x₁*, x₂−x₁⟩ over unordered pairs; `+∞` sentinel when
    /// the graph has fewer than two samples.
    pub worst_value: f64,
    pub worst_pair: Option<(GraphSample, GraphSample)>,
    pub tol: f64,
}

/// Sweeps all unordered pairs of the graph; monotone iff the worst pairing
/// product stays ≥ −tol.
pub fn monotonicity_check(graph: &SubgradientGraph, tol: f64) -> Result<MonotonicityReport> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph("monotonicity check needs samples".into()));
    }
    if graph.len() > MAX_PAIRWISE_GRAPH {
        return Err(Error::InvalidInput(format!(
            "graph has {} samples; the exact pairwise sweep is capped at {MAX_PAIRWISE_GRAPH}",
            graph.len()
        )));
    }
    let s = graph.samples();
    let mut worst = f64::INFINITY;
    let mut worst_pair = None;
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            let v = dot(&sub(&s[j].xstar, &s[i].xstar), &sub(&s[j].x, &s[i].x));
            if v < worst {
                worst = v;
                worst_pair = Some((s[i].clone(), s[j].clone()));
            }
        }
    }
    let verdict = if worst >= -tol {
        MonoVerdict::Monotone
    } else {
        MonoVerdict::Violated
    };
    Ok(MonotonicityReport { verdict, worst_value: worst, worst_pair, tol })
}

/// Result of the monotone-relation test of a probe pair against a graph.
#[derive(Debug, Clone, Serialize)]
pub struct MintyReport {
    pub related: bool,
    /// Minimum of ⟨x* − x₀*, x − x₀⟩ over the graph; `+∞` when empty.
    pub worst_value: f64,
    pub witness: Option<GraphSample>,
    /// True when the graph was empty and the result is vacuous.
    pub vacuous: bool,
}

/// Tests whether `(x₀, x₀*)` is in monotone relation to the graph:
/// `⟨x* − x₀*, x − x₀⟩ ≥ −tol` for every sample. A true result predicts
/// Fenchel membership of the pair, which callers cross-check explicitly.
pub fn minty_test(
    graph: &SubgradientGraph,
    x0: &[f64],
    x0star: &[f64],
    tol: f64,
) -> Result<MintyReport> {
    if !crate::vecmath::all_finite(x0) || !crate::vecmath::all_finite(x0star) {
        return Err(Error::InvalidInput("probe pair has non-finite entries".into()));
    }
    if graph.is_empty() {
        log::warn!("minty test against an empty graph is vacuously true");
        return Ok(MintyReport {
            related: true,
            worst_value: f64::INFINITY,
            witness: None,
            vacuous: true,
        });
    }
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for s in graph.samples() {
        let v = dot(&sub(&s.xstar, x0star), &sub(&s.x, x0));
        if v < worst {
            worst = v;
            witness = Some(s.clone());
        }
    }
    let related = worst >= -tol;
    Ok(MintyReport {
        related,
        worst_value: worst,
        witness: if related { None } else { witness },
        vacuous: false,
    })
}

/// Affine subgradient envelope `g(x̄) = max {f(x) + ⟨x*, x̄ − x⟩}` over the
/// graph samples; a finite max of affine functions, hence convex in `x̄`.
pub fn envelope(graph: &SubgradientGraph, xbar: &[f64]) -> Result<f64> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph("envelope needs samples".into()));
    }
    if !crate::vecmath::all_finite(xbar) {
        return Err(Error::InvalidInput("envelope point has non-finite entries".into()));
    }
    Ok(graph
        .samples()
        .iter()
        .map(|s| s.fx + dot(&s.xstar, &sub(xbar, &s.x)))
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "certified-convex")]
    CertifiedConvex,
    #[serde(rename = "nonconvex-witnessed")]
    NonconvexWitnessed,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

/// Knobs for [`certify_convexity`]. `None` tolerances derive from the grid:
/// the envelope tolerance defaults to `100·spacing·L̂` and the monotonicity
/// tolerance to `spacing·L̂`, with `L̂` the empirical difference-quotient
/// bound of the sampled values.
#[derive(Debug, Clone, Serialize)]
pub struct CertifyOptions {
    pub resolution: usize,
    pub sample: SampleOptions,
    pub test_points: Option<Vec<Vec<f64>>>,
    pub envelope_tol: Option<f64>,
    pub mono_tol: Option<f64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            resolution: 201,
            sample: SampleOptions::default(),
            test_points: None,
            envelope_tol: None,
            mono_tol: None,
        }
    }
}

/// Full certification report.
#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub verdict: Verdict,
    pub graph_size: usize,
    pub monotonicity: MonotonicityReport,
    /// sup over test points of f(x̄) − g(x̄); `None` when short-circuited by a
    /// monotonicity violation, `+∞` when a test point has f = +∞ (the
    /// envelope cannot reproduce the function there).
    pub envelope_gap: Option<f64>,
    pub gap_witness: Option<Vec<f64>>,
    /// min over finite-valued test points of f(x̄) − g(x̄); values below
    /// −tol mean the envelope pokes above the function, a nonconvexity
    /// witness in its own right.
    pub minorant_gap: Option<f64>,
    pub envelope_tol: f64,
    pub mono_tol: f64,
    pub spacing: f64,
    pub empirical_lipschitz: f64,
}

/// Pipeline: sample the proximal graph, check monotonicity, and compare the
/// function against its subgradient envelope at the test points.
pub fn certify_convexity(f: &FunctionOracle, opts: &CertifyOptions) -> Result<CertificationReport> {
    let grid = Grid::new(f.domain().clone(), opts.resolution)?;
    let spacing = grid.spacing();
    let eg = EvaluatedGrid::new(f, &grid)?;
    let lhat = empirical_lipschitz(&eg.values, &grid);
    let envelope_tol = opts.envelope_tol.unwrap_or(100.0 * spacing * lhat);
    let mono_tol = opts.mono_tol.unwrap_or(spacing * lhat);

    let graph = match sample_graph(f, &grid, &opts.sample) {
        Ok(g) => g,
        Err(Error::EmptyGraph(why)) => {
            // No usable samples: report, do not guess.
            log::warn!("certification inconclusive: {why}");
            return Ok(CertificationReport {
                verdict: Verdict::Inconclusive,
                graph_size: 0,
                monotonicity: MonotonicityReport {
                    verdict: MonoVerdict::Monotone,
                    worst_value: f64::INFINITY,
                    worst_pair: None,
                    tol: mono_tol,
                },
                envelope_gap: None,
                gap_witness: None,
                minorant_gap: None,
                envelope_tol,
                mono_tol,
                spacing,
                empirical_lipschitz: lhat,
            });
        }
        Err(e) => return Err(e),
    };

    let monotonicity = monotonicity_check(&graph, mono_tol)?;
    if monotonicity.verdict == MonoVerdict::Violated {
        return Ok(CertificationReport {
            verdict: Verdict::NonconvexWitnessed,
            graph_size: graph.len(),
            monotonicity,
            envelope_gap: None,
            gap_witness: None,
            minorant_gap: None,
            envelope_tol,
            mono_tol,
            spacing,
            empirical_lipschitz: lhat,
        });
    }

    let default_points: Vec<Vec<f64>>;
    let test_points: &[Vec<f64>] = match &opts.test_points {
        Some(p) => p,
        None => {
            default_points = grid.iter().collect();
            &default_points
        }
    };

    let mut sup_gap = f64::NEG_INFINITY;
    let mut sup_witness = None;
    let mut min_gap = f64::INFINITY;
    let mut min_witness = None;
    for xbar in test_points {
        let fx = f.eval_checked(xbar)?;
        let g = envelope(&graph, xbar)?;
        let gap = fx - g; // +∞ − finite stays +∞
        if gap > sup_gap {
            sup_gap = gap;
            sup_witness = Some(xbar.clone());
        }
        if fx.is_finite() && gap < min_gap {
            min_gap = gap;
            min_witness = Some(xbar.clone());
        }
    }

    let (verdict, gap_witness) = if min_gap < -envelope_tol {
        (Verdict::NonconvexWitnessed, min_witness)
    } else if sup_gap <= envelope_tol {
        (Verdict::CertifiedConvex, sup_witness)
    } else {
        (Verdict::Inconclusive, sup_witness)
    };

    Ok(CertificationReport {
        verdict,
        graph_size: graph.len(),
        monotonicity,
        envelope_gap: Some(sup_gap),
        gap_witness,
        minorant_gap: if min_gap.is_finite() { Some(min_gap) } else { None },
        envelope_tol,
        mono_tol,
        spacing,
        empirical_lipschitz: lhat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DomainBox;
    use crate::registry;
    use proptest::prelude::*;

    fn dom1() -> DomainBox {
        DomainBox::new(vec![-1.0], vec![1.0]).unwrap()
    }

    fn grid1(points: usize) -> Grid {
        Grid::new(dom1(), points).unwrap()
    }

    fn sampled(name: &str, points: usize) -> SubgradientGraph {
        let f = registry::by_name(name, dom1()).unwrap();
        sample_graph(&f, &grid1(points), &SampleOptions::default()).unwrap()
    }

    fn pair_graph(pairs: &[(f64, f64, f64)]) -> SubgradientGraph {
        SubgradientGraph::from_samples(
            pairs
                .iter()
                .map(|(x, xs, fx)| GraphSample { x: vec![*x], xstar: vec![*xs], fx: *fx })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn monotone_quadratic_graph() {
        let g = sampled("quadratic", 101);
        let rep = monotonicity_check(&g, 0.02).unwrap();
        assert_eq!(rep.verdict, MonoVerdict::Monotone);
        assert!(rep.worst_value >= -0.02, "worst = {}", rep.worst_value);
    }

    #[test]
    fn violated_pair_is_frozen_arithmetic() {
        // (−1, 1) and (1, −1): ⟨−1 − 1, 1 − (−1)⟩ = −4.
        let g = pair_graph(&[(-1.0, 1.0, -1.0), (1.0, -1.0, -1.0)]);
        let rep = monotonicity_check(&g, 1e-9).unwrap();
        assert_eq!(rep.verdict, MonoVerdict::Violated);
        assert_eq!(rep.worst_value, -4.0);
        assert!(rep.worst_pair.is_some());
    }

    #[test]
    fn single_sample_is_vacuously_monotone() {
        let g = pair_graph(&[(0.0, 0.0, 0.0)]);
        let rep = monotonicity_check(&g, 0.0).unwrap();
        assert_eq!(rep.verdict, MonoVerdict::Monotone);
        assert!(rep.worst_value.is_infinite());
        assert!(rep.worst_pair.is_none());
        assert!(monotonicity_check(&SubgradientGraph::default(), 0.0).is_err());
    }

    #[test]
    fn minty_abs_probe_examples() {
        let g = sampled("abs", 201);
        let ok = minty_test(&g, &[0.0], &[0.5], 1e-6).unwrap();
        assert!(ok.related, "worst = {}", ok.worst_value);
        let bad = minty_test(&g, &[0.0], &[1.5], 1e-6).unwrap();
        assert!(!bad.related);
        assert!(bad.witness.unwrap().x[0] > 0.0);
        let origin = minty_test(&sampled("quadratic", 101), &[0.0], &[0.0], 1e-6).unwrap();
        assert!(origin.related);
    }

    #[test]
    fn minty_empty_graph_is_vacuous() {
        let rep = minty_test(&SubgradientGraph::default(), &[0.0], &[0.0], 1e-6).unwrap();
        assert!(rep.related && rep.vacuous);
    }

    #[test]
    fn graph_elements_relate_to_their_own_monotone_graph() {
        let g = sampled("quadratic", 101);
        for s in g.samples().iter().step_by(5) {
            let rep = minty_test(&g, &s.x, &s.xstar, 0.02).unwrap();
            assert!(rep.related, "element ({:?}, {:?})", s.x, s.xstar);
        }
    }

    #[test]
    fn envelope_three_point_frozen() {
        // max(1 − 2(x̄+1), 0, 1 + 2(x̄−1)) at x̄ = 0.5 → max(−2, 0, 0) = 0.
        let g = pair_graph(&[(-1.0, -2.0, 1.0), (0.0, 0.0, 0.0), (1.0, 2.0, 1.0)]);
        assert_eq!(envelope(&g, &[0.5]).unwrap(), 0.0);
        assert!(envelope(&SubgradientGraph::default(), &[0.0]).is_err());
    }

    #[test]
    fn envelope_dense_quadratic_reproduces_values() {
        let f = registry::by_name("quadratic", dom1()).unwrap();
        let g = SubgradientGraph::from_analytic(&f, &grid1(201)).unwrap();
        // At sample points the own tangent attains the value exactly.
        for s in g.samples().iter().step_by(10) {
            let e = envelope(&g, &s.x).unwrap();
            assert!((e - s.fx).abs() <= 1e-12);
        }
        // Between samples the error is at most (h/2)².
        let e = envelope(&g, &[0.505]).unwrap();
        assert!((e - 0.505_f64.powi(2)).abs() <= 2.5e-5 + 1e-12);
    }

    #[test]
    fn certify_convex_registry() {
        for name in ["quadratic", "abs", "max_affine"] {
            let f = registry::by_name(name, dom1()).unwrap();
            let rep = certify_convexity(&f, &CertifyOptions::default()).unwrap();
            assert_eq!(rep.verdict, Verdict::CertifiedConvex, "{name}: {rep:?}");
            assert!(rep.envelope_gap.unwrap() <= rep.envelope_tol);
        }
    }

    #[test]
    fn certify_nonconvex_registry() {
        for name in ["neg_abs", "cube", "step"] {
            let f = registry::by_name(name, dom1()).unwrap();
            let rep = certify_convexity(&f, &CertifyOptions::default()).unwrap();
            assert_eq!(rep.verdict, Verdict::NonconvexWitnessed, "{name}: {rep:?}");
            assert!(rep.monotonicity.worst_pair.is_some(), "{name} lacks a witness");
        }
    }

    #[test]
    fn certify_indicator_stays_inconclusive_outside_domain() {
        // Test points outside the box have f = +∞; the finite envelope cannot
        // certify equality there.
        let f = registry::by_name("indicator_box", dom1()).unwrap();
        let rep = certify_convexity(&f, &CertifyOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert_eq!(rep.monotonicity.verdict, MonoVerdict::Monotone);
        assert!(rep.envelope_gap.unwrap().is_infinite());
    }

    #[test]
    fn certify_indicator_inside_its_domain_is_convex() {
        let f = registry::by_name("indicator_box", dom1()).unwrap();
        let inside: Vec<Vec<f64>> = (0..41).map(|i| vec![-0.4 + 0.02 * i as f64]).collect();
        let opts = CertifyOptions { test_points: Some(inside), ..Default::default() };
        let rep = certify_convexity(&f, &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::CertifiedConvex);
    }

    #[test]
    fn certify_disconnected_domain_is_witnessed() {
        // f = 0 on [−1, −0.5] ∪ [0.5, 1], +∞ between: the facing component
        // edges attract proximal pairs with inward-conflicting covectors, a
        // genuine nonconvexity witness (the domain is not convex).
        let f = crate::subdiff::FunctionOracle::new("split", dom1(), |x| {
            if x[0].abs() >= 0.5 {
                0.0
            } else {
                f64::INFINITY
            }
        });
        let rep = certify_convexity(&f, &CertifyOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::NonconvexWitnessed);
        assert!(rep.monotonicity.worst_pair.is_some());
    }

    #[test]
    fn envelope_minorant_and_sup_form_over_the_registry() {
        use crate::subdiff::{empirical_lipschitz, EvaluatedGrid};
        let convex = ["quadratic", "abs", "max_affine", "indicator_box"];
        for name in registry::NAMES {
            let f = registry::by_name(name, dom1()).unwrap();
            let grid = grid1(101);
            let h = grid.spacing();
            let eg = EvaluatedGrid::new(&f, &grid).unwrap();
            let lhat = empirical_lipschitz(&eg.values, &grid);
            let graph = sample_graph(&f, &grid, &SampleOptions::default()).unwrap();
            for (i, xbar) in grid.iter().enumerate() {
                let fx = eg.values[i];
                if !fx.is_finite() {
                    continue;
                }
                let e = envelope(&graph, &xbar).unwrap();
                // Minorant side: sampled pairs of convex functions are valid
                // Fenchel pairs, so the envelope stays below f up to
                // quantization slack L̂·h.
                if convex.contains(&name) {
                    assert!(
                        e <= fx + lhat * h + 1e-9,
                        "{name}: envelope above f at {xbar:?}: {e} vs {fx}"
                    );
                }
                // Sup-form side: where the graph is dense around x̄, some
                // affine piece reaches back up to f(x̄) minus local slack.
                let nearest = graph
                    .samples()
                    .iter()
                    .map(|s| crate::vecmath::dist(&s.x, &xbar))
                    .fold(f64::INFINITY, f64::min);
                if nearest <= 2.0 * h {
                    assert!(
                        e >= fx - 2.0 * lhat * (nearest + h) - 1e-9,
                        "{name}: envelope too far below f at {xbar:?}: {e} vs {fx}"
                    );
                }
            }
        }
    }

    #[test]
    fn envelope_reproduces_max_affine_pieces_at_samples() {
        let f = registry::by_name("max_affine", dom1()).unwrap();
        let graph = sample_graph(&f, &grid1(101), &SampleOptions::default()).unwrap();
        for s in graph.samples() {
            let e = envelope(&graph, &s.x).unwrap();
            assert!((e - s.fx).abs() <= 1e-6, "at {:?}: {e} vs {}", s.x, s.fx);
        }
    }

    #[test]
    fn scaling_preserves_monotonicity_structure() {
        let g = sampled("quadratic", 101);
        let c = 3.5;
        let scaled = SubgradientGraph::from_samples(
            g.samples()
                .iter()
                .map(|s| GraphSample {
                    x: s.x.clone(),
                    xstar: s.xstar.iter().map(|v| c * v).collect(),
                    fx: c * s.fx,
                })
                .collect(),
        )
        .unwrap();
        let base = monotonicity_check(&g, 0.02).unwrap();
        let scaled_rep = monotonicity_check(&scaled, 0.02 * c).unwrap();
        assert_eq!(base.verdict, scaled_rep.verdict);
        assert!((scaled_rep.worst_value - c * base.worst_value).abs() <= 1e-9 * c);
    }

    proptest! {
        /// The envelope is a finite max of affine maps, hence midpoint-convex
        /// up to rounding.
        #[test]
        fn envelope_midpoint_convexity(
            a in -2.0..2.0f64,
            b in -2.0..2.0f64,
        ) {
            let g = pair_graph(&[
                (-1.0, -2.0, 1.0),
                (-0.3, -0.6, 0.09),
                (0.0, 0.0, 0.0),
                (0.4, 0.8, 0.16),
                (1.0, 2.0, 1.0),
            ]);
            let mid = 0.5 * (a + b);
            let gm = envelope(&g, &[mid]).unwrap();
            let ga = envelope(&g, &[a]).unwrap();
            let gb = envelope(&g, &[b]).unwrap();
            prop_assert!(gm <= 0.5 * (ga + gb) + 1e-12);
        }
    }
}
