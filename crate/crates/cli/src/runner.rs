//! Runs a configured experiment and writes its artifacts.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use dsmap_core::forward::csv::write_msr_csv;
use dsmap_core::imaging::dsm_multi_with;
use dsmap_core::metrics::{detection_distances, dominant_peaks};
use dsmap_core::{
    add_awgn, assemble_mie_msr, assemble_msr_with, dsma, exact_map, jaccard_curve, kirchhoff, make_circle_array,
    make_direction_set, make_grid, parse_fresnel, psi1_map, psi2_map, psi3_map, to_msr, Algorithm, Background,
    ImagingGrid, IndicatorMap, Inhomogeneity, MsrMatrix, Point, Prefactor, Scene,
};

use crate::config::{DiskSpec, ExperimentConfig, ForwardModel};
use crate::output::{write_file, write_pgm};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub name: Option<String>,
    pub wavelength: f64,
    pub k0: f64,
    pub data: DataInfo,
    pub grid: GridInfo,
    pub noise: Option<NoiseInfo>,
    pub scatterers: Vec<ScattererInfo>,
    /// File name of the exact map, when the scene geometry is known.
    pub exact_map: Option<String>,
    pub maps: Vec<MapReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataInfo {
    pub source: &'static str,
    pub receivers: usize,
    /// Measured (unmasked) entries of the full data file.
    pub measured: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridInfo {
    pub center: [f64; 2],
    pub side: f64,
    pub cell: f64,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseInfo {
    pub snr_db: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScattererInfo {
    pub center: [f64; 2],
    pub radius: f64,
    pub eps_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Location {
    pub row: usize,
    pub col: usize,
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

impl Location {
    fn of(map: &IndicatorMap, (row, col): (usize, usize)) -> Self {
        let p = map.point(row, col);
        Location { row, col, x: p.x, y: p.y, value: map.values[[row, col]] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapReport {
    pub algorithm: String,
    pub incidences: usize,
    pub map_csv: String,
    pub map_pgm: String,
    pub curve_csv: Option<String>,
    pub argmax: Location,
    /// Largest value before any rescaling to a maximum of 1.
    pub peak_value: f64,
    pub excluded_points: usize,
    /// Dominant local maxima, one per known scatterer, at least λ/2 apart.
    pub peaks: Vec<Location>,
    /// Distance from each known scatterer to its nearest peak.
    pub detection_distances: Vec<f64>,
    pub best_kappa: Option<f64>,
    pub best_jaccard: Option<f64>,
}

struct Setup {
    background: Background,
    scene: Option<Scene>,
    grid: ImagingGrid,
    data: Data,
}

enum Data {
    Synthetic { scene: Scene, sensors: dsmap_core::SensorArray },
    Measured(MsrMatrix),
}

fn build_scene(background: Background, disks: &[DiskSpec]) -> dsmap_core::Result<Scene> {
    let items = disks
        .iter()
        .map(|d| Inhomogeneity::disk(Point::new(d.center[0], d.center[1]), d.radius, d.eps_r, &background))
        .collect::<dsmap_core::Result<Vec<_>>>()?;
    Scene::new(background, items)
}

fn setup(config: &ExperimentConfig) -> Result<Setup> {
    let g = &config.grid;
    let grid = make_grid(Point::new(g.center[0], g.center[1]), g.side, g.cell).context("grid")?;
    if let Some(f) = &config.scene.fresnel {
        let text = std::fs::read_to_string(&f.path).with_context(|| format!("reading {}", f.path.display()))?;
        let parsed = parse_fresnel(&text, &config.schema()?, f.frequency_ghz)
            .with_context(|| format!("parsing {}", f.path.display()))?;
        let msr = to_msr(&parsed.records, &config.fresnel_geometry())
            .with_context(|| format!("assembling MSR data from {}", f.path.display()))?;
        let background = Background::from_frequency(f.frequency_ghz * 1e9).context("scene.fresnel.frequency_ghz")?;
        grid.check_inside(msr.sensors()).context("grid")?;
        let scene = if f.reference.is_empty() {
            None
        } else {
            Some(build_scene(background, &f.reference).context("scene.fresnel.reference")?)
        };
        return Ok(Setup { background, scene, grid, data: Data::Measured(msr) });
    }

    let medium = config.medium.as_ref().context("medium")?;
    let background = match (medium.wavelength, medium.frequency_ghz) {
        (Some(w), _) => Background::from_wavelength(w),
        (None, Some(f)) => Background::from_frequency(f * 1e9),
        (None, None) => unreachable!("validated config"),
    }
    .context("medium")?;
    let scene = build_scene(background, config.known_disks()).context("scene.disks")?;
    let s = config.sensors.context("sensors")?;
    let sensors = make_circle_array(s.radius, s.count, s.start_angle_deg.to_radians()).context("sensors")?;
    grid.check_inside(&sensors).context("grid")?;
    Ok(Setup { background, scene: Some(scene.clone()), grid, data: Data::Synthetic { scene, sensors } })
}

fn msr_for(config: &ExperimentConfig, data: &Data, count: usize) -> Result<MsrMatrix> {
    match data {
        Data::Synthetic { scene, sensors } => {
            let start = config.incidence.start_angle_deg.unwrap_or(180.0).to_radians();
            let dirs = make_direction_set(count, start)?;
            let msr = match config.forward.model {
                ForwardModel::Asymptotic => assemble_msr_with(scene, sensors, &dirs, Prefactor::Literal),
                ForwardModel::Physical => assemble_msr_with(scene, sensors, &dirs, Prefactor::Physical),
                ForwardModel::Mie => assemble_mie_msr(scene, sensors, &dirs, config.forward.mie_extra_terms),
            };
            Ok(msr?)
        }
        Data::Measured(full) => {
            let n = full.n_incidents();
            let columns: Vec<usize> = (0..count).map(|i| i * n / count).collect();
            Ok(full.select_incidents(&columns)?)
        }
    }
}

fn compute(algorithm: Algorithm, msr: &MsrMatrix, setup: &Setup, config: &ExperimentConfig) -> Result<IndicatorMap> {
    let (grid, k0) = (&setup.grid, setup.background.k0);
    let scene = || setup.scene.as_ref().context("Ψ maps need known scatterers");
    let map = match algorithm {
        Algorithm::Dsm => dsm_multi_with(msr, grid, k0, config.run.dsm_normalization.into())?,
        Algorithm::Dsma => dsma(msr, grid, k0)?,
        Algorithm::Km => kirchhoff(msr, grid, k0, false)?,
        Algorithm::Nkm => kirchhoff(msr, grid, k0, true)?,
        Algorithm::Psi1 => psi1_map(scene()?, msr.incidents().directions[0], grid)?,
        Algorithm::Psi2 => psi2_map(scene()?, grid)?,
        Algorithm::Psi3 => psi3_map(scene()?, grid)?,
        Algorithm::Exact => anyhow::bail!("the exact map is not an imaging algorithm"),
    };
    Ok(map)
}

/// Map rescaled to a maximum of 1 for images and thresholds.
fn display(map: &IndicatorMap) -> Result<IndicatorMap> {
    if map.algorithm.is_normalized() {
        return Ok(map.clone());
    }
    let top = map.max();
    anyhow::ensure!(top > 0.0, "{} map is zero on the whole grid", map.algorithm);
    let mut out = map.clone();
    out.values.mapv_inplace(|v| v / top);
    Ok(out)
}

/// Runs every (algorithm, incidence count) pair and writes maps, curves,
/// the MSR data actually imaged and `summary.json` into the output directory.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let algorithms = config.algorithms()?;
    let dir = config.run.output_dir.as_path();
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let setup = setup(config)?;
    let grid = &setup.grid;
    let known: Vec<Point> =
        setup.scene.as_ref().map(|s| s.inhomogeneities.iter().map(|m| m.center).collect()).unwrap_or_default();
    let peak_count = known.len().max(1);
    let separation = 0.5 * setup.background.wavelength;
    let seed = config.noise.enabled.then_some(config.noise.seed);

    let exact = match &setup.scene {
        Some(scene) => {
            let e = exact_map(scene, grid)?;
            write_file(&dir.join("exact.csv"), e.to_csv().as_bytes())?;
            write_pgm(&e, &dir.join("exact.pgm"))?;
            Some(e)
        }
        None => None,
    };

    let mut maps = Vec::new();
    for &count in &config.incidence.counts {
        let clean = msr_for(config, &setup.data, count).with_context(|| format!("data for L = {count}"))?;
        let msr = match seed {
            Some(s) => add_awgn(&clean, config.noise.snr_db, s)?,
            None => clean,
        };
        write_file(&dir.join(format!("msr_L{count}.csv")), write_msr_csv(&msr).as_bytes())?;

        for &algorithm in &algorithms {
            let context = || format!("{algorithm} with L = {count}");
            let data_driven = !matches!(algorithm, Algorithm::Psi1 | Algorithm::Psi2 | Algorithm::Psi3);
            let map = compute(algorithm, &msr, &setup, config)
                .with_context(context)?
                .with_seed(if data_driven { seed } else { None })
                .with_scene_hash(setup.scene.as_ref().map(Scene::fingerprint));
            let shown = display(&map).with_context(context)?;
            let stem = format!("{}_L{count}", algorithm.as_str().to_lowercase());
            let (csv, pgm) = (format!("{stem}.csv"), format!("{stem}.pgm"));
            write_file(&dir.join(&csv), map.to_csv().as_bytes())?;
            write_pgm(&shown, &dir.join(&pgm))?;

            let mut report = MapReport {
                algorithm: algorithm.to_string(),
                incidences: count,
                map_csv: csv,
                map_pgm: pgm,
                curve_csv: None,
                argmax: Location::of(&map, map.argmax()),
                peak_value: map.meta.holder_peak.unwrap_or_else(|| map.max()),
                excluded_points: map.meta.excluded.len(),
                peaks: dominant_peaks(&map, peak_count, separation)
                    .into_iter()
                    .map(|p| Location::of(&map, p))
                    .collect(),
                detection_distances: Vec::new(),
                best_kappa: None,
                best_jaccard: None,
            };
            let cells: Vec<(usize, usize)> = report.peaks.iter().map(|l| (l.row, l.col)).collect();
            report.detection_distances = detection_distances(grid, &cells, &known);
            if let Some(e) = &exact {
                let curve = jaccard_curve(&shown, e, config.run.kappa_steps).with_context(context)?;
                let name = format!("{stem}_jaccard.csv");
                write_file(&dir.join(&name), curve.to_csv().as_bytes())?;
                let (k, j) = curve.best();
                report.curve_csv = Some(name);
                report.best_kappa = Some(k);
                report.best_jaccard = Some(j);
            }
            maps.push(report);
        }
    }

    let full = match &setup.data {
        Data::Measured(m) => (m.n_sensors(), Some(m.unmasked_count())),
        Data::Synthetic { sensors, .. } => (sensors.len(), None),
    };
    let report = Report {
        name: config.name.clone(),
        wavelength: setup.background.wavelength,
        k0: setup.background.k0,
        data: DataInfo {
            source: match (&setup.data, config.forward.model) {
                (Data::Measured(_), _) => "fresnel",
                (_, ForwardModel::Asymptotic) => "asymptotic",
                (_, ForwardModel::Physical) => "physical",
                (_, ForwardModel::Mie) => "mie",
            },
            receivers: full.0,
            measured: full.1,
        },
        grid: GridInfo {
            center: config.grid.center,
            side: grid.side,
            cell: grid.cell,
            rows: grid.rows,
            cols: grid.cols,
        },
        noise: seed.map(|seed| NoiseInfo { snr_db: config.noise.snr_db, seed }),
        scatterers: config
            .known_disks()
            .iter()
            .map(|d| ScattererInfo { center: d.center, radius: d.radius, eps_r: d.eps_r })
            .collect(),
        exact_map: exact.as_ref().map(|_| "exact.csv".to_string()),
        maps,
    };
    write_summary(&report, &dir.join("summary.json"))?;
    Ok(report)
}

fn write_summary(report: &Report, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    write_file(path, text.as_bytes())
}
