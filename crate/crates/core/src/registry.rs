//! Named test functions accepted by the CLI.
//!
//! Formulas are documented in `docs/functions.md`. All oracles are proper and
//! lower semicontinuous on their domain box; `step` takes the lower value at
//! its jump so its sublevel sets stay closed.

use crate::error::{Error, Result};
use crate::grid::DomainBox;
use crate::subdiff::FunctionOracle;
use crate::vecmath::dot;

pub const NAMES: [&str; 7] = [
    "quadratic",
    "abs",
    "neg_abs",
    "cube",
    "max_affine",
    "indicator_box",
    "step",
];

/// Optional parameters for the parameterized registry entries.
#[derive(Debug, Clone, Default, serde::Serialize, serde::Deserialize)]
pub struct RegistryParams {
    /// Pieces `(c_j, d_j)` of `max_j ⟨c_j, x⟩ + d_j`.
    pub max_affine_pieces: Option<Vec<(Vec<f64>, f64)>>,
    pub indicator_lo: Option<Vec<f64>>,
    pub indicator_hi: Option<Vec<f64>>,
}

pub fn by_name(name: &str, domain: DomainBox) -> Result<FunctionOracle> {
    by_name_with(name, domain, &RegistryParams::default())
}

pub fn by_name_with(
    name: &str,
    domain: DomainBox,
    params: &RegistryParams,
) -> Result<FunctionOracle> {
    let dim = domain.dim();
    match name {
        "quadratic" => Ok(FunctionOracle::new(
            "quadratic",
            domain,
            |x| x.iter().map(|v| v * v).sum(),
        )
        .with_analytic_subgrad(|x| vec![x.iter().map(|v| 2.0 * v).collect()])),

        "abs" => Ok(FunctionOracle::new(
            "abs",
            domain,
            |x| x.iter().map(|v| v.abs()).sum(),
        )
        .with_analytic_subgrad(abs_subgradients)),

        "neg_abs" => Ok(FunctionOracle::new(
            "neg_abs",
            domain,
            |x| -x.iter().map(|v| v.abs()).sum::<f64>(),
        )
        .with_analytic_subgrad(|x| {
            if x.contains(&0.0) {
                vec![] // no subgradient at the concave kink
            } else {
                vec![x.iter().map(|v| -v.signum()).collect()]
            }
        })),

        "cube" => Ok(FunctionOracle::new(
            "cube",
            domain,
            |x| x.iter().map(|v| v * v * v).sum(),
        )
        .with_analytic_subgrad(|x| vec![x.iter().map(|v| 3.0 * v * v).collect()])),

        "max_affine" => {
            let pieces = params
                .max_affine_pieces
                .clone()
                .unwrap_or_else(|| vec![(vec![1.0; dim], 0.0), (vec![2.0; dim], 0.0)]);
            if pieces.is_empty() {
                return Err(Error::InvalidInput("max_affine needs at least one piece".into()));
            }
            for (c, d) in &pieces {
                if c.len() != dim || !crate::vecmath::all_finite(c) || !d.is_finite() {
                    return Err(Error::InvalidInput("max_affine piece is malformed".into()));
                }
            }
            let eval_pieces = pieces.clone();
            Ok(FunctionOracle::new("max_affine", domain, move |x| {
                eval_pieces
                    .iter()
                    .map(|(c, d)| dot(c, x) + d)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .with_analytic_subgrad(move |x| {
                let vals: Vec<f64> = pieces.iter().map(|(c, d)| dot(c, x) + d).collect();
                let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                pieces
                    .iter()
                    .zip(&vals)
                    .filter(|(_, v)| **v >= top - 1e-12)
                    .map(|((c, _), _)| c.clone())
                    .collect()
            }))
        }

        "indicator_box" => {
            let lo = params.indicator_lo.clone().unwrap_or_else(|| vec![-0.5; dim]);
            let hi = params.indicator_hi.clone().unwrap_or_else(|| vec![0.5; dim]);
            let inner = DomainBox::new(lo, hi)?;
            if inner.dim() != dim {
                return Err(Error::InvalidInput(
                    "indicator box dimension does not match the domain".into(),
                ));
            }
            let sub_inner = inner.clone();
            Ok(FunctionOracle::new("indicator_box", domain, move |x| {
                if inner.contains(x) {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .with_analytic_subgrad(move |x| {
                let strictly_inside = x
                    .iter()
                    .zip(sub_inner.lo.iter().zip(&sub_inner.hi))
                    .all(|(v, (l, h))| *v > *l && *v < *h);
                if strictly_inside {
                    vec![vec![0.0; x.len()]]
                } else {
                    vec![]
                }
            }))
        }

        "step" => {
            if dim != 1 {
                return Err(Error::InvalidInput("step is one-dimensional".into()));
            }
            // Lower semicontinuous unit step: the jump at 0.5 takes the lower
            // value so { f ≤ α } stays closed.
            Ok(FunctionOracle::new("step", domain, |x| {
                if x[0] <= 0.5 {
                    0.0
                } else {
                    1.0
                }
            }))
        }

        other => Err(Error::InvalidInput(format!(
            "unknown function '{other}'; known: {}",
            NAMES.join(", ")
        ))),
    }
}

fn abs_subgradients(x: &[f64]) -> Vec<Vec<f64>> {
    // Sign pattern, fanned out over zero coordinates (up to two of them, which
    // covers every grid-dimension this crate runs at without blowing up).
    let zeros: Vec<usize> = x
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == 0.0)
        .map(|(i, _)| i)
        .collect();
    let base: Vec<f64> = x.iter().map(|v| v.signum() * f64::from(*v != 0.0)).collect();
    if zeros.is_empty() || zeros.len() > 2 {
        return vec![base];
    }
    let choices = [-1.0, 0.0, 1.0];
    let mut out = Vec::new();
    if zeros.len() == 1 {
        for c in choices {
            let mut g = base.clone();
            g[zeros[0]] = c;
            out.push(g);
        }
    } else {
        for c0 in choices {
            for c1 in choices {
                let mut g = base.clone();
                g[zeros[0]] = c0;
                g[zeros[1]] = c1;
                out.push(g);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom1() -> DomainBox {
        DomainBox::new(vec![-1.0], vec![1.0]).unwrap()
    }

    #[test]
    fn all_names_construct() {
        for name in NAMES {
            assert!(by_name(name, dom1()).is_ok(), "{name} failed");
        }
        assert!(by_name("nope", dom1()).is_err());
    }

    #[test]
    fn step_is_lower_semicontinuous_at_jump() {
        let f = by_name("step", dom1()).unwrap();
        assert_eq!(f.eval(&[0.5]), 0.0);
        assert_eq!(f.eval(&[0.5 + 1e-12]), 1.0);
        assert_eq!(f.eval(&[0.49]), 0.0);
    }

    #[test]
    fn max_affine_default_and_custom() {
        let f = by_name("max_affine", dom1()).unwrap();
        assert_eq!(f.eval(&[0.5]), 1.0); // max(x, 2x) at 0.5
        assert_eq!(f.eval(&[-0.5]), -0.5);
        let params = RegistryParams {
            max_affine_pieces: Some(vec![(vec![1.0], 0.0), (vec![-1.0], 0.0)]),
            ..Default::default()
        };
        let g = by_name_with("max_affine", dom1(), &params).unwrap();
        assert_eq!(g.eval(&[-0.25]), 0.25); // |x|
        let gs = g.analytic_subgradients(&[0.0]).unwrap();
        assert_eq!(gs.len(), 2); // both pieces active at the kink
    }

    #[test]
    fn indicator_is_extended_valued() {
        let f = by_name("indicator_box", dom1()).unwrap();
        assert_eq!(f.eval(&[0.0]), 0.0);
        assert_eq!(f.eval(&[0.5]), 0.0); // closed box
        assert!(f.eval(&[0.6]).is_infinite());
        assert!(f.analytic_subgradients(&[0.5]).unwrap().is_empty());
        assert_eq!(f.analytic_subgradients(&[0.2]).unwrap(), vec![vec![0.0]]);
    }

    #[test]
    fn abs_kink_fan() {
        let f = by_name("abs", dom1()).unwrap();
        let fan = f.analytic_subgradients(&[0.0]).unwrap();
        assert_eq!(fan.len(), 3);
        let g = f.analytic_subgradients(&[-0.3]).unwrap();
        assert_eq!(g, vec![vec![-1.0]]);
    }

    #[test]
    fn step_rejects_higher_dimensions() {
        let d2 = DomainBox::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        assert!(by_name("step", d2).is_err());
    }
}
