//! Synthetic multistatic response data.
//!
//! The asymptotic model superposes one Green's-function term per inclusion.
//! [`mie`] supplies the exact single-cylinder series used to cross-check it,
//! [`noise`] the additive white Gaussian noise, and [`csv`] the on-disk format.

pub mod csv;
pub mod mie;
pub mod noise;

use std::f64::consts::PI;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scene::{IncidentSet, Point, Scene, SensorArray};
use crate::specfun::green2d;
use crate::Complex;

pub use mie::{mie_cylinder_scattered_field, MieCylinder, DEFAULT_EXTRA_TERMS};
pub use noise::add_awgn;

/// Where an MSR matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Asymptotic,
    Mie,
    External,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Asymptotic => "asymptotic",
            Provenance::Mie => "mie",
            Provenance::External => "external",
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asymptotic" => Ok(Provenance::Asymptotic),
            "mie" => Ok(Provenance::Mie),
            "external" => Ok(Provenance::External),
            other => Err(Error::config(format!("unknown provenance `{other}`"))),
        }
    }
}

/// Multistatic response matrix `K[n, l] = u^s(x_n, d_l)`.
///
/// Rows are receivers, columns incident directions. Entries with
/// `mask == false` were not measured; they are held at exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MsrMatrix {
    values: Array2<Complex>,
    mask: Array2<bool>,
    sensors: SensorArray,
    incidents: IncidentSet,
    provenance: Provenance,
}

impl MsrMatrix {
    pub fn new(
        mut values: Array2<Complex>,
        mask: Array2<bool>,
        sensors: SensorArray,
        incidents: IncidentSet,
        provenance: Provenance,
    ) -> Result<Self> {
        let shape = (sensors.len(), incidents.len());
        if values.dim() != shape || mask.dim() != shape {
            return Err(Error::config(format!(
                "MSR dimensions {:?} / mask {:?} do not match {} sensors x {} incidences",
                values.dim(),
                mask.dim(),
                shape.0,
                shape.1
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Numerical("MSR contains non-finite entries".into()));
        }
        values.zip_mut_with(&mask, |v, &m| {
            if !m {
                *v = Complex::new(0.0, 0.0);
            }
        });
        Ok(MsrMatrix { values, mask, sensors, incidents, provenance })
    }

    /// Fully measured matrix.
    pub fn full(
        values: Array2<Complex>,
        sensors: SensorArray,
        incidents: IncidentSet,
        provenance: Provenance,
    ) -> Result<Self> {
        let mask = Array2::from_elem(values.dim(), true);
        MsrMatrix::new(values, mask, sensors, incidents, provenance)
    }

    pub fn values(&self) -> &Array2<Complex> {
        &self.values
    }

    pub fn mask(&self) -> &Array2<bool> {
        &self.mask
    }

    pub fn sensors(&self) -> &SensorArray {
        &self.sensors
    }

    pub fn incidents(&self) -> &IncidentSet {
        &self.incidents
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn n_sensors(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_incidents(&self) -> usize {
        self.values.ncols()
    }

    pub fn unmasked_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Column `l` as a contiguous vector.
    pub fn column(&self, l: usize) -> Vec<Complex> {
        self.values.column(l).to_vec()
    }

    /// Euclidean norm of column `l` over measured entries.
    pub fn column_norm(&self, l: usize) -> f64 {
        self.values
            .column(l)
            .iter()
            .zip(self.mask.column(l))
            .filter(|(_, &m)| m)
            .map(|(v, _)| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Same data multiplied by a complex constant.
    pub fn scaled(&self, factor: Complex) -> MsrMatrix {
        let mut out = self.clone();
        out.values.mapv_inplace(|v| v * factor);
        out
    }

    /// Keeps only the listed incidence columns, in the given order.
    pub fn select_incidents(&self, columns: &[usize]) -> Result<MsrMatrix> {
        if columns.is_empty() {
            return Err(Error::config("column selection is empty"));
        }
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.n_incidents()) {
            return Err(Error::config(format!("incidence column {bad} out of range")));
        }
        let n = self.n_sensors();
        let values = Array2::from_shape_fn((n, columns.len()), |(i, j)| self.values[[i, columns[j]]]);
        let mask = Array2::from_shape_fn((n, columns.len()), |(i, j)| self.mask[[i, columns[j]]]);
        let incidents = IncidentSet::explicit(columns.iter().map(|&c| self.incidents.directions[c]).collect())?;
        MsrMatrix::new(values, mask, self.sensors.clone(), incidents, self.provenance)
    }

    pub(crate) fn with_values(&self, values: Array2<Complex>) -> MsrMatrix {
        MsrMatrix { values, ..self.clone() }
    }
}

/// Amplitude constant in front of the asymptotic sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Prefactor {
    /// `k0²(1+i)/(4√(k0π)) · (ε_m−ε0)/√(ε0μ0)`, as the small-inclusion
    /// expansion is usually quoted.
    #[default]
    Literal,
    /// Leading-order Born term for TM polarization, `−k0² (ε_m−ε0)/ε0`.
    /// Differs from [`Prefactor::Literal`] by one global complex constant and
    /// matches the Mie series in absolute terms.
    Physical,
}

fn contrast_weight(scene: &Scene, prefactor: Prefactor) -> impl Fn(usize) -> Complex + '_ {
    let bg = scene.background;
    let k0 = bg.k0;
    let front = match prefactor {
        Prefactor::Literal => Complex::new(1.0, 1.0) * (k0 * k0 / (4.0 * (k0 * PI).sqrt() * (bg.eps0 * bg.mu0).sqrt())),
        Prefactor::Physical => Complex::new(-k0 * k0 / bg.eps0, 0.0),
    };
    move |m| {
        let inc = &scene.inhomogeneities[m];
        front * (inc.radius * inc.radius * (inc.permittivity - bg.eps0) * inc.shape_area)
    }
}

/// Leading-order scattered field `u^s(x, d)` of the scene, [`Prefactor::Literal`].
pub fn asymptotic_scattered_field(scene: &Scene, x: Point, d: Point) -> Result<Complex> {
    asymptotic_scattered_field_with(scene, x, d, Prefactor::Literal)
}

pub fn asymptotic_scattered_field_with(scene: &Scene, x: Point, d: Point, prefactor: Prefactor) -> Result<Complex> {
    let k0 = scene.background.k0;
    let weight = contrast_weight(scene, prefactor);
    let mut sum = Complex::new(0.0, 0.0);
    for (m, inc) in scene.inhomogeneities.iter().enumerate() {
        let phase = Complex::from_polar(1.0, k0 * d.dot(inc.center));
        let g = green2d(inc.center, x, k0).map_err(|_| {
            Error::domain(format!("receiver ({}, {}) coincides with the centre of inclusion {m}", x.x, x.y))
        })?;
        sum += weight(m) * phase * g;
    }
    Ok(sum)
}

/// Asymptotic MSR matrix for every (sensor, direction) pair.
pub fn assemble_msr(scene: &Scene, sensors: &SensorArray, incidents: &IncidentSet) -> Result<MsrMatrix> {
    assemble_msr_with(scene, sensors, incidents, Prefactor::Literal)
}

pub fn assemble_msr_with(
    scene: &Scene,
    sensors: &SensorArray,
    incidents: &IncidentSet,
    prefactor: Prefactor,
) -> Result<MsrMatrix> {
    let (n, l) = (sensors.len(), incidents.len());
    let mut values = Array2::zeros((n, l));
    for (i, &x) in sensors.positions.iter().enumerate() {
        for (j, &d) in incidents.directions.iter().enumerate() {
            values[[i, j]] = asymptotic_scattered_field_with(scene, x, d, prefactor)
                .map_err(|e| Error::domain(format!("entry (n={i}, l={j}): {e}")))?;
        }
    }
    MsrMatrix::full(values, sensors.clone(), incidents.clone(), Provenance::Asymptotic)
}

/// MSR matrix from superposed single-cylinder Mie fields (no multiple
/// scattering between inclusions).
pub fn assemble_mie_msr(
    scene: &Scene,
    sensors: &SensorArray,
    incidents: &IncidentSet,
    extra_terms: usize,
) -> Result<MsrMatrix> {
    let bg = scene.background;
    let cylinders = scene
        .inhomogeneities
        .iter()
        .map(|inc| {
            let eps_r = inc.permittivity / bg.eps0;
            let truncation = (bg.k0 * inc.radius).ceil() as usize + extra_terms;
            MieCylinder::new(inc.radius, eps_r, inc.center, bg.k0, truncation)
        })
        .collect::<Result<Vec<_>>>()?;
    let (n, l) = (sensors.len(), incidents.len());
    let mut values = Array2::zeros((n, l));
    for (i, &x) in sensors.positions.iter().enumerate() {
        for (j, &d) in incidents.directions.iter().enumerate() {
            let mut sum = Complex::new(0.0, 0.0);
            for cyl in &cylinders {
                sum += cyl.scattered_field(x, d).map_err(|e| Error::domain(format!("entry (n={i}, l={j}): {e}")))?;
            }
            values[[i, j]] = sum;
        }
    }
    MsrMatrix::full(values, sensors.clone(), incidents.clone(), Provenance::Mie)
}
