//! Closed-form limits of the indicator maps for many receivers and many
//! incident directions.
//!
//! With the constant prefactors dropped, each inclusion contributes with
//! weight `α_m² (ε_m − ε0)`:
//!
//! ```text
//! Ψ1(z) = |Σ_m α_m² (ε_m − ε0) e^{i k0 d·r_m} J0(k0 |z − r_m|)|
//! Ψ2(z) = |Σ_m α_m² (ε_m − ε0) J0(k0 |z − r_m|)²|
//! ```
//!
//! The normalized Kirchhoff limit Ψ3 has the same expression as Ψ2.

use ndarray::Array2;
use rayon::prelude::*;

use super::{Algorithm, IndicatorMap};
use crate::error::{Error, Result};
use crate::scene::{make_direction_set, ImagingGrid, Point, Scene};
use crate::specfun::j0_unchecked;
use crate::Complex;

fn check_scene(scene: &Scene) -> Result<()> {
    if scene.is_empty() {
        return Err(Error::degenerate("scene has no inclusions"));
    }
    Ok(())
}

fn weight(scene: &Scene, m: usize) -> f64 {
    let inc = &scene.inhomogeneities[m];
    inc.radius * inc.radius * (inc.permittivity - scene.background.eps0)
}

/// Unnormalized Ψ1 at one point, in F/m·m².
pub fn psi1_value(scene: &Scene, d: Point, z: Point) -> f64 {
    let k0 = scene.background.k0;
    scene
        .inhomogeneities
        .iter()
        .enumerate()
        .map(|(m, inc)| {
            Complex::from_polar(weight(scene, m), k0 * d.dot(inc.center)) * j0_unchecked(k0 * z.distance(inc.center))
        })
        .sum::<Complex>()
        .norm()
}

/// Unnormalized Ψ2 (= Ψ3) at one point.
pub fn psi2_value(scene: &Scene, z: Point) -> f64 {
    let k0 = scene.background.k0;
    scene
        .inhomogeneities
        .iter()
        .enumerate()
        .map(|(m, inc)| {
            let j = j0_unchecked(k0 * z.distance(inc.center));
            weight(scene, m) * j * j
        })
        .sum::<f64>()
        .abs()
}

fn build(
    grid: &ImagingGrid,
    algorithm: Algorithm,
    scene: &Scene,
    f: impl Fn(Point) -> f64 + Sync,
) -> Result<IndicatorMap> {
    let flat: Vec<f64> = grid.points().par_iter().map(|&z| f(z)).collect();
    let values = Array2::from_shape_vec((grid.rows, grid.cols), flat).expect("one value per grid point");
    let mut map = IndicatorMap::new(*grid, values, algorithm)?;
    map.meta.scene_hash = Some(scene.fingerprint());
    map.rescaled()
}

/// Ψ1 for incident direction `d`, rescaled to grid max 1.
pub fn psi1_map(scene: &Scene, d: Point, grid: &ImagingGrid) -> Result<IndicatorMap> {
    check_scene(scene)?;
    let mut map = build(grid, Algorithm::Psi1, scene, |z| psi1_value(scene, d, z))?;
    map.meta.incidences = Some(1);
    Ok(map)
}

pub fn psi2_map(scene: &Scene, grid: &ImagingGrid) -> Result<IndicatorMap> {
    check_scene(scene)?;
    build(grid, Algorithm::Psi2, scene, |z| psi2_value(scene, z))
}

/// Same values as [`psi2_map`], tagged as the Kirchhoff limit.
pub fn psi3_map(scene: &Scene, grid: &ImagingGrid) -> Result<IndicatorMap> {
    let mut map = psi2_map(scene, grid)?;
    map.algorithm = Algorithm::Psi3;
    Ok(map)
}

/// `|(1/L) Σ_l e^{i k0 d_l·(r−z)} − J0(k0|r−z|)|` for `L` evenly spaced
/// directions starting at angle 0.
pub fn plane_wave_bessel_check(count: usize, r: Point, z: Point, k0: f64) -> Result<f64> {
    if !(k0 > 0.0) || !k0.is_finite() {
        return Err(Error::domain(format!("wavenumber must be positive, got {k0}")));
    }
    let dirs = make_direction_set(count, 0.0)?;
    let v = r - z;
    let mean = dirs.directions.iter().map(|&d| Complex::from_polar(1.0, k0 * d.dot(v))).sum::<Complex>() / count as f64;
    Ok((mean - j0_unchecked(k0 * v.norm())).norm())
}
