//! Exact support map, thresholding, Jaccard index and peak extraction.

use std::fmt::Write as _;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::imaging::{Algorithm, IndicatorMap};
use crate::scene::{ImagingGrid, Point, Scene};

/// `|k(z) − k0|` normalized by the largest inclusion contrast in the scene.
///
/// A cell belongs to an inclusion when its centre does. Normalizing by the
/// scene rather than the grid keeps the map meaningful when an inclusion is
/// smaller than a cell and no centre falls inside it.
pub fn exact_map(scene: &Scene, grid: &ImagingGrid) -> Result<IndicatorMap> {
    let bg = &scene.background;
    let contrast: Vec<f64> =
        scene.inhomogeneities.iter().map(|m| bg.k0 * ((m.permittivity / bg.eps0).sqrt() - 1.0).abs()).collect();
    let top = contrast.iter().copied().fold(0.0, f64::max);
    if !(top > 0.0) {
        return Err(Error::degenerate("scene has no inclusion with nonzero contrast"));
    }
    let values = Array2::from_shape_fn((grid.rows, grid.cols), |(r, c)| {
        let z = grid.point(r, c);
        scene.inhomogeneities.iter().position(|m| m.contains(z)).map_or(0.0, |m| contrast[m] / top)
    });
    let mut map = IndicatorMap::new(*grid, values, Algorithm::Exact)?;
    map.meta.scene_hash = Some(scene.fingerprint());
    Ok(map)
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::domain(format!("threshold must lie in [0, 1], got {kappa}")));
    }
    Ok(())
}

/// Keeps values `≥ κ`, zeroes the rest.
pub fn threshold_map(map: &IndicatorMap, kappa: f64) -> Result<IndicatorMap> {
    check_kappa(kappa)?;
    let mut out = map.clone();
    out.values.mapv_inplace(|v| if v >= kappa { v } else { 0.0 });
    Ok(out)
}

/// `100·|A∩B|/|A∪B|` with `A` the cells surviving the threshold and `B` the
/// support of `exact`; 100 when both are empty.
pub fn jaccard(map: &IndicatorMap, exact: &IndicatorMap, kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if map.grid != exact.grid {
        return Err(Error::domain("map and exact map live on different grids"));
    }
    let (mut inter, mut union) = (0usize, 0usize);
    for (&v, &e) in map.values.iter().zip(exact.values.iter()) {
        let a = v >= kappa && v > 0.0;
        let b = e > 0.0;
        inter += usize::from(a && b);
        union += usize::from(a || b);
    }
    Ok(if union == 0 { 100.0 } else { 100.0 * inter as f64 / union as f64 })
}

/// Jaccard scores over evenly spaced thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct JaccardCurve {
    pub kappas: Vec<f64>,
    pub scores: Vec<f64>,
    pub algorithm: Algorithm,
}

impl JaccardCurve {
    /// Score at the threshold closest to `kappa`.
    pub fn score_at(&self, kappa: f64) -> f64 {
        let i = self
            .kappas
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - kappa).abs().total_cmp(&(b.1 - kappa).abs()))
            .map_or(0, |(i, _)| i);
        self.scores[i]
    }

    /// `(κ, score)` with the highest score, smallest κ on ties.
    pub fn best(&self) -> (f64, f64) {
        let mut best = (self.kappas[0], self.scores[0]);
        for (&k, &s) in self.kappas.iter().zip(&self.scores) {
            if s > best.1 {
                best = (k, s);
            }
        }
        best
    }

    pub fn points_in(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.kappas
            .iter()
            .copied()
            .zip(self.scores.iter().copied())
            .filter(move |(k, _)| *k >= lo - 1e-12 && *k <= hi + 1e-12)
    }

    /// `kappa,score,algorithm` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kappa,score,algorithm\n");
        for (k, s) in self.kappas.iter().zip(&self.scores) {
            let _ = writeln!(out, "{k},{s},{}", self.algorithm);
        }
        out
    }
}

/// Jaccard index at `κ = j/(steps−1)`, `j = 0..steps`.
pub fn jaccard_curve(map: &IndicatorMap, exact: &IndicatorMap, steps: usize) -> Result<JaccardCurve> {
    if steps < 2 {
        return Err(Error::domain(format!("need at least 2 threshold steps, got {steps}")));
    }
    let kappas: Vec<f64> = (0..steps).map(|j| j as f64 / (steps - 1) as f64).collect();
    let scores = kappas.iter().map(|&k| jaccard(map, exact, k)).collect::<Result<Vec<_>>>()?;
    Ok(JaccardCurve { kappas, scores, algorithm: map.algorithm })
}

/// Up to `count` strongest local maxima at least `min_separation` apart.
///
/// A cell is a candidate when it is positive and no 8-neighbour exceeds it,
/// so flat tops yield several candidates; suppression then keeps the first
/// of each cluster in (value descending, row-major) order.
pub fn dominant_peaks(map: &IndicatorMap, count: usize, min_separation: f64) -> Vec<(usize, usize)> {
    let (rows, cols) = map.values.dim();
    let v = &map.values;
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let x = v[[r, c]];
            if !(x > 0.0) {
                continue;
            }
            let mut is_max = true;
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                    if (dr, dc) != (0, 0)
                        && nr >= 0
                        && nc >= 0
                        && (nr as usize) < rows
                        && (nc as usize) < cols
                        && v[[nr as usize, nc as usize]] > x
                    {
                        is_max = false;
                    }
                }
            }
            if is_max {
                candidates.push((r, c));
            }
        }
    }
    candidates.sort_by(|a, b| v[[b.0, b.1]].total_cmp(&v[[a.0, a.1]]).then(a.cmp(b)));
    let mut kept: Vec<(usize, usize)> = Vec::new();
    for cand in candidates {
        if kept.len() == count {
            break;
        }
        let p = map.grid.point(cand.0, cand.1);
        if kept.iter().all(|&(r, c)| map.grid.point(r, c).distance(p) >= min_separation) {
            kept.push(cand);
        }
    }
    kept
}

/// Whether `cell` is the grid cell containing `p` or one of its 8 neighbours.
pub fn within_one_cell(grid: &ImagingGrid, cell: (usize, usize), p: Point) -> bool {
    let (r, c) = grid.cell_of(p);
    cell.0.abs_diff(r) <= 1 && cell.1.abs_diff(c) <= 1
}

/// For each target, the distance to the nearest of `peaks` (cell centres).
pub fn detection_distances(grid: &ImagingGrid, peaks: &[(usize, usize)], targets: &[Point]) -> Vec<f64> {
    targets
        .iter()
        .map(|&t| peaks.iter().map(|&(r, c)| grid.point(r, c).distance(t)).fold(f64::INFINITY, f64::min))
        .collect()
}
