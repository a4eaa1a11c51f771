//! Indicator maps over the imaging grid.
//!
//! Every data-driven map is built from the same projection
//! `U_l(z) = Σ_n conj(Φ(z, x_n)) K[n, l]`, computed once per grid point.
//! Grid points closer than `h/10` to a receiver are left at zero and listed
//! in [`MapMetadata::excluded`].

pub mod theory;

use std::fmt::Write as _;

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::MsrMatrix;
use crate::scene::{ImagingGrid, IncidentSet, Point, SensorArray};
use crate::specfun::green2d;
use crate::Complex;

/// Which formula produced a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Dsm,
    Dsma,
    Km,
    Nkm,
    Psi1,
    Psi2,
    Psi3,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Dsm,
        Algorithm::Dsma,
        Algorithm::Km,
        Algorithm::Nkm,
        Algorithm::Psi1,
        Algorithm::Psi2,
        Algorithm::Psi3,
        Algorithm::Exact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Dsm => "DSM",
            Algorithm::Dsma => "DSMA",
            Algorithm::Km => "KM",
            Algorithm::Nkm => "NKM",
            Algorithm::Psi1 => "PSI1",
            Algorithm::Psi2 => "PSI2",
            Algorithm::Psi3 => "PSI3",
            Algorithm::Exact => "EXACT",
        }
    }

    /// Whether maps of this kind are rescaled to a grid maximum of 1.
    pub fn is_normalized(self) -> bool {
        self != Algorithm::Km
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MapMetadata {
    /// Number of incident directions that fed the map.
    pub incidences: Option<usize>,
    pub noise_seed: Option<u64>,
    pub scene_hash: Option<u64>,
    /// Largest value before rescaling to grid max 1 (the Hölder-normalized
    /// peak for DSM, the raw peak for the other maps).
    pub holder_peak: Option<f64>,
    /// `(row, col)` of grid points skipped for lying on a receiver.
    pub excluded: Vec<(usize, usize)>,
}

/// Real map over an [`ImagingGrid`], row 0 at the top.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorMap {
    pub grid: ImagingGrid,
    pub values: Array2<f64>,
    pub algorithm: Algorithm,
    pub meta: MapMetadata,
}

impl IndicatorMap {
    pub fn new(grid: ImagingGrid, values: Array2<f64>, algorithm: Algorithm) -> Result<Self> {
        if values.dim() != (grid.rows, grid.cols) {
            return Err(Error::config(format!(
                "map shape {:?} does not match grid {}x{}",
                values.dim(),
                grid.rows,
                grid.cols
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("{algorithm} map has non-finite values")));
        }
        Ok(IndicatorMap { grid, values, algorithm, meta: MapMetadata::default() })
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// First `(row, col)` attaining the maximum in row-major order.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut top = f64::NEG_INFINITY;
        for ((r, c), &v) in self.values.indexed_iter() {
            if v > top {
                top = v;
                best = (r, c);
            }
        }
        best
    }

    pub fn point(&self, row: usize, col: usize) -> Point {
        self.grid.point(row, col)
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.meta.noise_seed = seed;
        self
    }

    pub fn with_scene_hash(mut self, hash: Option<u64>) -> Self {
        self.meta.scene_hash = hash;
        self
    }

    /// Largest pointwise absolute difference to another map on the same grid.
    pub fn max_abs_diff(&self, other: &IndicatorMap) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::domain("maps live on different grids"));
        }
        Ok(self.values.iter().zip(other.values.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// CSV with a one-line grid header, then `row,col,x,y,value` row-major.
    pub fn to_csv(&self) -> String {
        let g = &self.grid;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# algorithm={} rows={} cols={} cell={} center={},{}",
            self.algorithm, g.rows, g.cols, g.cell, g.center.x, g.center.y
        );
        out.push_str("row,col,x,y,value\n");
        for ((r, c), v) in self.values.indexed_iter() {
            let p = g.point(r, c);
            let _ = writeln!(out, "{r},{c},{},{},{v}", p.x, p.y);
        }
        out
    }

    /// Divides by the grid maximum. A map that is zero everywhere is degenerate.
    fn rescaled(mut self) -> Result<Self> {
        let top = self.max();
        if !(top > 0.0) {
            return Err(Error::degenerate(format!("{} map is zero on the whole grid", self.algorithm)));
        }
        self.values.mapv_inplace(|v| v / top);
        self.meta.holder_peak.get_or_insert(top);
        Ok(self)
    }
}

/// Receive and transmit test vectors at one search point.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVectors {
    /// `Φ(x_n, z)` for each receiver.
    pub w1: Vec<Complex>,
    /// `e^{i k0 d_l·z}` for each incident direction.
    pub w2: Vec<Complex>,
}

impl SteeringVectors {
    pub fn at(z: Point, sensors: &SensorArray, incidents: &IncidentSet, k0: f64) -> Result<Self> {
        let w1 = sensors.positions.iter().map(|&x| green2d(x, z, k0)).collect::<Result<Vec<_>>>()?;
        let w2 = incidents.directions.iter().map(|&d| Complex::from_polar(1.0, k0 * d.dot(z))).collect();
        Ok(SteeringVectors { w1, w2 })
    }
}

/// How a single-direction DSM map is normalized before the final rescale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DsmNormalization {
    /// `|⟨u, Φ_z⟩| / (‖u‖ ‖Φ_z‖)`, bounded by 1 by Cauchy–Schwarz.
    #[default]
    Holder,
    /// `|⟨u, Φ_z⟩| / max_z |⟨u, Φ_z⟩|`; the form under which DSM coincides
    /// with normalized Kirchhoff migration.
    GridMax,
}

/// `Σ_n u_n conj(Φ(z, x_n))` over the receivers.
pub fn inner_product_gamma(column: &[Complex], z: Point, sensors: &SensorArray, k0: f64) -> Result<Complex> {
    if column.len() != sensors.len() {
        return Err(Error::config(format!("column has {} entries for {} sensors", column.len(), sensors.len())));
    }
    let mut acc = Complex::new(0.0, 0.0);
    for (&u, &x) in column.iter().zip(&sensors.positions) {
        acc += u * green2d(z, x, k0)?.conj();
    }
    Ok(acc)
}

/// Per-point projections of every MSR column.
struct Projections {
    /// `U_l(z)` per point, `None` where the point was excluded.
    u: Vec<Option<Vec<Complex>>>,
    /// `‖Φ_z‖` over the receivers measured in column `l`.
    phi_norm: Vec<Option<Vec<f64>>>,
    excluded: Vec<(usize, usize)>,
}

fn excluded_point(z: Point, sensors: &SensorArray, h: f64) -> bool {
    sensors.positions.iter().any(|&x| x.distance(z) < 0.1 * h)
}

fn project(msr: &MsrMatrix, grid: &ImagingGrid, k0: f64) -> Result<Projections> {
    if !(k0 > 0.0) {
        return Err(Error::domain(format!("wavenumber must be positive, got {k0}")));
    }
    let sensors = msr.sensors();
    let values = msr.values();
    let mask = msr.mask();
    let (n, l) = values.dim();
    let points = grid.points();
    let per_point: Vec<Option<(Vec<Complex>, Vec<f64>)>> = points
        .par_iter()
        .map(|&z| {
            if excluded_point(z, sensors, grid.cell) {
                return Ok(None);
            }
            let w1 =
                sensors.positions.iter().map(|&x| green2d(z, x, k0).map(|g| g.conj())).collect::<Result<Vec<_>>>()?;
            let mut u = vec![Complex::new(0.0, 0.0); l];
            let mut norm2 = vec![0.0; l];
            for i in 0..n {
                let w = w1[i];
                let w2 = w.norm_sqr();
                for j in 0..l {
                    if mask[[i, j]] {
                        u[j] += w * values[[i, j]];
                        norm2[j] += w2;
                    }
                }
            }
            Ok(Some((u, norm2.into_iter().map(f64::sqrt).collect())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut excluded = Vec::new();
    let mut u = Vec::with_capacity(per_point.len());
    let mut phi_norm = Vec::with_capacity(per_point.len());
    for (idx, item) in per_point.into_iter().enumerate() {
        match item {
            Some((a, b)) => {
                u.push(Some(a));
                phi_norm.push(Some(b));
            }
            None => {
                excluded.push((idx / grid.cols, idx % grid.cols));
                u.push(None);
                phi_norm.push(None);
            }
        }
    }
    Ok(Projections { u, phi_norm, excluded })
}

fn map_from(
    grid: &ImagingGrid,
    flat: Vec<f64>,
    algorithm: Algorithm,
    msr: &MsrMatrix,
    excluded: &[(usize, usize)],
) -> Result<IndicatorMap> {
    let values = Array2::from_shape_vec((grid.rows, grid.cols), flat).expect("one value per grid point");
    let mut map = IndicatorMap::new(*grid, values, algorithm)?;
    map.meta.incidences = Some(msr.n_incidents());
    map.meta.excluded = excluded.to_vec();
    Ok(map)
}

fn check_column(msr: &MsrMatrix, l: usize) -> Result<f64> {
    if l >= msr.n_incidents() {
        return Err(Error::config(format!("incidence index {l} out of range (L = {})", msr.n_incidents())));
    }
    let norm = msr.column_norm(l);
    if !(norm > 0.0) {
        return Err(Error::degenerate(format!("MSR column {l} has zero norm")));
    }
    Ok(norm)
}

fn dsm_from_projections(
    msr: &MsrMatrix,
    proj: &Projections,
    l: usize,
    grid: &ImagingGrid,
    normalization: DsmNormalization,
) -> Result<IndicatorMap> {
    let col_norm = check_column(msr, l)?;
    let flat = proj
        .u
        .iter()
        .zip(&proj.phi_norm)
        .map(|(u, p)| match (u, p) {
            (Some(u), Some(p)) => match normalization {
                DsmNormalization::Holder if p[l] > 0.0 => u[l].norm() / (col_norm * p[l]),
                DsmNormalization::Holder => 0.0,
                DsmNormalization::GridMax => u[l].norm(),
            },
            _ => 0.0,
        })
        .collect();
    let mut map = map_from(grid, flat, Algorithm::Dsm, msr, &proj.excluded)?;
    map.meta.incidences = Some(1);
    map.rescaled()
}

/// Single-direction DSM map for column `l`, Hölder-normalized.
pub fn dsm_single(msr: &MsrMatrix, l: usize, grid: &ImagingGrid, k0: f64) -> Result<IndicatorMap> {
    dsm_single_with(msr, l, grid, k0, DsmNormalization::Holder)
}

pub fn dsm_single_with(
    msr: &MsrMatrix,
    l: usize,
    grid: &ImagingGrid,
    k0: f64,
    normalization: DsmNormalization,
) -> Result<IndicatorMap> {
    check_column(msr, l)?;
    let proj = project(msr, grid, k0)?;
    dsm_from_projections(msr, &proj, l, grid, normalization)
}

/// Pointwise maximum of the single-direction maps over all columns.
pub fn dsm_multi(msr: &MsrMatrix, grid: &ImagingGrid, k0: f64) -> Result<IndicatorMap> {
    dsm_multi_with(msr, grid, k0, DsmNormalization::Holder)
}

pub fn dsm_multi_with(
    msr: &MsrMatrix,
    grid: &ImagingGrid,
    k0: f64,
    normalization: DsmNormalization,
) -> Result<IndicatorMap> {
    for l in 0..msr.n_incidents() {
        check_column(msr, l)?;
    }
    let proj = project(msr, grid, k0)?;
    let mut out: Option<IndicatorMap> = None;
    let mut holder_peak = f64::NEG_INFINITY;
    for l in 0..msr.n_incidents() {
        let m = dsm_from_projections(msr, &proj, l, grid, normalization)?;
        holder_peak = holder_peak.max(m.meta.holder_peak.unwrap_or(0.0));
        out = Some(match out {
            None => m,
            Some(mut acc) => {
                acc.values.zip_mut_with(&m.values, |a, &b| *a = a.max(b));
                acc
            }
        });
    }
    let mut map = out.expect("at least one column");
    map.meta.incidences = Some(msr.n_incidents());
    map.meta.holder_peak = Some(holder_peak);
    Ok(map)
}

/// Alternative DSM: `|Σ_l e^{-i k0 d_l·z} U_l(z)|`, rescaled to grid max 1.
pub fn dsma(msr: &MsrMatrix, grid: &ImagingGrid, k0: f64) -> Result<IndicatorMap> {
    if msr.values().iter().all(|v| v.norm() == 0.0) {
        return Err(Error::degenerate("MSR matrix is identically zero"));
    }
    let proj = project(msr, grid, k0)?;
    let points = grid.points();
    let dirs = &msr.incidents().directions;
    let flat = proj
        .u
        .iter()
        .zip(&points)
        .map(|(u, &z)| match u {
            Some(u) => u
                .iter()
                .zip(dirs)
                .map(|(&ul, &d)| Complex::from_polar(1.0, -k0 * d.dot(z)) * ul)
                .sum::<Complex>()
                .norm(),
            None => 0.0,
        })
        .collect();
    map_from(grid, flat, Algorithm::Dsma, msr, &proj.excluded)?.rescaled()
}

/// Kirchhoff migration `|conj(W1)ᵀ K conj(W2)|`; `normalized` rescales to
/// grid max 1 (NKM).
///
/// Sums over incidences first, then receivers, independently of the DSM
/// projection path.
pub fn kirchhoff(msr: &MsrMatrix, grid: &ImagingGrid, k0: f64, normalized: bool) -> Result<IndicatorMap> {
    if !(k0 > 0.0) {
        return Err(Error::domain(format!("wavenumber must be positive, got {k0}")));
    }
    let sensors = msr.sensors();
    let incidents = msr.incidents();
    let values = msr.values();
    let points = grid.points();
    let per_point: Vec<Option<f64>> = points
        .par_iter()
        .map(|&z| {
            if excluded_point(z, sensors, grid.cell) {
                return Ok(None);
            }
            let sv = SteeringVectors::at(z, sensors, incidents, k0)?;
            let mut total = Complex::new(0.0, 0.0);
            for (i, w1) in sv.w1.iter().enumerate() {
                let row: Complex = values.row(i).iter().zip(&sv.w2).map(|(&k, w2)| k * w2.conj()).sum();
                total += w1.conj() * row;
            }
            Ok(Some(total.norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut excluded = Vec::new();
    let flat = per_point
        .into_iter()
        .enumerate()
        .map(|(idx, v)| {
            v.unwrap_or_else(|| {
                excluded.push((idx / grid.cols, idx % grid.cols));
                0.0
            })
        })
        .collect();
    let algorithm = if normalized { Algorithm::Nkm } else { Algorithm::Km };
    let map = map_from(grid, flat, algorithm, msr, &excluded)?;
    if normalized {
        map.rescaled()
    } else {
        Ok(map)
    }
}
