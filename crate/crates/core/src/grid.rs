//! Axis-aligned boxes and finite product grids.
//!
//! Grid-based pipelines are limited to dimensions 1–3. Grid coordinates are
//! computed as `lo + i·(hi−lo)/(n−1)` so that midpoints and endpoints land on
//! exact values where the arithmetic allows, and refining a grid with
//! [`Grid::refine`] (n → 2n−1 per axis) keeps every existing point, which
//! makes per-step grid infima monotone under refinement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_GRID_DIM: usize = 3;

/// Hard cap on total grid points; sweeps beyond this are not desk-scale.
pub const MAX_GRID_POINTS: usize = 50_000_000;

/// Closed axis-aligned box `[lo, hi]` in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidInput(
                "domain box bounds must be non-empty and of equal dimension".into(),
            ));
        }
        if !crate::vecmath::all_finite(&lo) || !crate::vecmath::all_finite(&hi) {
            return Err(Error::InvalidInput("domain box bounds must be finite".into()));
        }
        for (l, h) in lo.iter().zip(&hi) {
            if l >= h {
                return Err(Error::InvalidInput(format!(
                    "domain box needs lo < hi per axis, got [{l}, {h}]"
                )));
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (l, h))| *v >= *l && *v <= *h)
    }
}

/// Uniform product grid over a [`DomainBox`] with `points_per_axis` points on
/// every axis. Iteration order is row-major with the last axis fastest; that
/// order is the deterministic tie-break used throughout the crate.
#[derive(Debug, Clone)]
pub struct Grid {
    pub bounds: DomainBox,
    pub points_per_axis: usize,
}

impl Grid {
    pub fn new(bounds: DomainBox, points_per_axis: usize) -> Result<Self> {
        if bounds.dim() > MAX_GRID_DIM {
            return Err(Error::InvalidInput(format!(
                "grids support dimension 1..={MAX_GRID_DIM}, got {}",
                bounds.dim()
            )));
        }
        if points_per_axis < 2 {
            return Err(Error::InvalidInput(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        let total = points_per_axis
            .checked_pow(bounds.dim() as u32)
            .filter(|t| *t <= MAX_GRID_POINTS);
        if total.is_none() {
            return Err(Error::InvalidInput(format!(
                "grid of {points_per_axis}^{} points exceeds the {MAX_GRID_POINTS} cap",
                bounds.dim()
            )));
        }
        Ok(Self { bounds, points_per_axis })
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest axis spacing.
    pub fn spacing(&self) -> f64 {
        let n = (self.points_per_axis - 1) as f64;
        self.bounds
            .lo
            .iter()
            .zip(&self.bounds.hi)
            .map(|(l, h)| (h - l) / n)
            .fold(0.0, f64::max)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let dim = self.dim();
        let n = self.points_per_axis;
        let mut out = vec![0.0; dim];
        let mut rest = flat;
        for axis in (0..dim).rev() {
            let i = rest % n;
            rest /= n;
            out[axis] = self.coord(axis, i);
        }
        out
    }

    fn coord(&self, axis: usize, i: usize) -> f64 {
        let lo = self.bounds.lo[axis];
        let hi = self.bounds.hi[axis];
        lo + (i as f64) * (hi - lo) / ((self.points_per_axis - 1) as f64)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Index of the grid point nearest to `x` (coordinates clamped into the box).
    pub fn nearest_index(&self, x: &[f64]) -> usize {
        let n = self.points_per_axis;
        let mut flat = 0usize;
        for (xi, (lo, hi)) in x.iter().zip(self.bounds.lo.iter().zip(&self.bounds.hi)) {
            let t = ((xi - lo) / (hi - lo) * ((n - 1) as f64)).round();
            let i = (t.max(0.0) as usize).min(n - 1);
            flat = flat * n + i;
        }
        flat
    }

    /// True when the flat index touches the first or last slot of any axis.
    pub fn on_boundary(&self, flat: usize) -> bool {
        let n = self.points_per_axis;
        let mut rest = flat;
        for _ in 0..self.dim() {
            let i = rest % n;
            rest /= n;
            if i == 0 || i == n - 1 {
                return true;
            }
        }
        false
    }

    /// Nested refinement: keeps every current point and inserts midpoints.
    pub fn refine(&self) -> Self {
        Self {
            bounds: self.bounds.clone(),
            points_per_axis: 2 * self.points_per_axis - 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box(dim: usize) -> DomainBox {
        DomainBox::new(vec![-1.0; dim], vec![1.0; dim]).unwrap()
    }

    #[test]
    fn grid_points_hit_exact_landmarks() {
        let g = Grid::new(unit_box(1), 201).unwrap();
        assert_eq!(g.point(0), vec![-1.0]);
        assert_eq!(g.point(100), vec![0.0]);
        assert_eq!(g.point(200), vec![1.0]);
        assert_eq!(g.point(150), vec![0.5]);
    }

    #[test]
    fn refine_keeps_old_points() {
        let g = Grid::new(unit_box(1), 101).unwrap();
        let r = g.refine();
        assert_eq!(r.points_per_axis, 201);
        for i in 0..g.len() {
            assert_eq!(g.point(i), r.point(2 * i));
        }
    }

    #[test]
    fn row_major_order_last_axis_fastest() {
        let g = Grid::new(unit_box(2), 3).unwrap();
        assert_eq!(g.point(0), vec![-1.0, -1.0]);
        assert_eq!(g.point(1), vec![-1.0, 0.0]);
        assert_eq!(g.point(3), vec![0.0, -1.0]);
        assert_eq!(g.len(), 9);
    }

    #[test]
    fn nearest_index_round_trips() {
        let g = Grid::new(unit_box(2), 21).unwrap();
        for flat in [0usize, 7, 44, 440] {
            let p = g.point(flat);
            assert_eq!(g.nearest_index(&p), flat);
        }
        // clamping
        assert_eq!(g.nearest_index(&[-5.0, 5.0]), g.nearest_index(&[-1.0, 1.0]));
    }

    #[test]
    fn boundary_detection() {
        let g = Grid::new(unit_box(2), 3).unwrap();
        assert!(g.on_boundary(0));
        assert!(g.on_boundary(1)); // middle of top edge
        assert!(!g.on_boundary(4)); // center
    }

    #[test]
    fn rejects_bad_boxes_and_dims() {
        assert!(DomainBox::new(vec![0.0], vec![0.0]).is_err());
        assert!(DomainBox::new(vec![0.0, f64::NAN], vec![1.0, 1.0]).is_err());
        let b4 = DomainBox::new(vec![0.0; 4], vec![1.0; 4]).unwrap();
        assert!(Grid::new(b4, 5).is_err());
        assert!(Grid::new(unit_box(1), 1).is_err());
        // Total-size cap, including the overflow path.
        assert!(Grid::new(unit_box(3), 500).is_err());
        assert!(Grid::new(unit_box(3), 3_000_000).is_err());
        assert!(Grid::new(unit_box(1), 1_000_001).is_ok());
    }
}
