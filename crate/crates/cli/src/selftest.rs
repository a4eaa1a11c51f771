//! Quick invariant checks on the installed library.

use dsmap_core::forward::csv::{read_msr_csv, write_msr_csv};
use dsmap_core::metrics::{dominant_peaks, within_one_cell};
use dsmap_core::{
    add_awgn, assemble_msr, bessel_j0, bessel_y0, dsm_multi, dsma, exact_map, green2d, jaccard, kirchhoff,
    make_circle_array, make_direction_set, make_grid, parse_fresnel, threshold_map, to_msr, write_fresnel, Background,
    Complex, FresnelGeometry, FresnelRecord, FresnelSchema, IndicatorMap, Inhomogeneity, Point, Scene,
};

use crate::output::encode_pgm;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

type Outcome = dsmap_core::Result<(bool, String)>;
type CheckFn = fn() -> Outcome;

const SAMPLES: [(f64, f64); 6] = [(0.3, -0.3), (-0.71, 0.12), (1.9, 2.4), (-2.2, -0.05), (0.0, 0.9), (0.45, 0.45)];

fn points() -> impl Iterator<Item = Point> {
    SAMPLES.iter().map(|&(x, y)| Point::new(x, y))
}

fn scene() -> dsmap_core::Result<Scene> {
    let bg = Background::from_wavelength(0.4)?;
    let disks = [(0.3, -0.3), (-0.25, 0.1), (0.15, 0.3)]
        .iter()
        .map(|&(x, y)| Inhomogeneity::disk(Point::new(x, y), 0.03, 5.0, &bg))
        .collect::<dsmap_core::Result<Vec<_>>>()?;
    Scene::new(bg, disks)
}

fn green_symmetry() -> Outcome {
    let mut worst = 0.0f64;
    for z in points() {
        for x in points().filter(|&x| x != z) {
            worst = worst.max((green2d(z, x, 15.7)? - green2d(x, z, 15.7)?).norm());
        }
    }
    Ok((worst == 0.0, format!("max |Φ(z,x) − Φ(x,z)| = {worst:e}")))
}

fn bessel_bounds() -> Outcome {
    let mut bounded = true;
    for i in 0..=400 {
        bounded &= bessel_j0(0.5 * i as f64)?.abs() <= 1.0;
    }
    let mut worst = 0.0f64;
    for z in [2.404_825_557_695_773, 5.520_078_110_286_311, 30.634_606_468_431_976] {
        worst = worst.max(bessel_j0(z)?.abs());
    }
    for z in [0.893_576_966_279_167_5, 3.957_678_419_314_858, 22.782_028_047_291_56] {
        worst = worst.max(bessel_y0(z)?.abs());
    }
    Ok((bounded && worst < 1e-8, format!("|J0| <= 1: {bounded}; largest value at a zero {worst:.1e}")))
}

fn pattern_map(grid: &dsmap_core::ImagingGrid) -> dsmap_core::Result<IndicatorMap> {
    let values = ndarray::Array2::from_shape_fn((grid.rows, grid.cols), |(r, c)| ((r * 7 + c * 13) % 17) as f64 / 16.0);
    IndicatorMap::new(*grid, values, dsmap_core::Algorithm::Dsm)
}

fn threshold_and_jaccard() -> Outcome {
    let s = scene()?;
    let grid = make_grid(Point::ORIGIN, 1.2, 0.05)?;
    let map = pattern_map(&grid)?;
    let exact = exact_map(&s, &grid)?;
    let mut scaled = exact.clone();
    scaled.values.mapv_inplace(|v| 3.5 * v);
    let mut ok = true;
    for i in 0..=10 {
        let kappa = i as f64 / 10.0;
        let once = threshold_map(&map, kappa)?;
        ok &= threshold_map(&once, kappa)? == once;
        let j = jaccard(&map, &exact, kappa)?;
        ok &= (0.0..=100.0).contains(&j) && j == jaccard(&map, &scaled, kappa)?;
    }
    Ok((ok, "idempotent threshold, scale-free Jaccard in [0, 100]".into()))
}

fn round_trips() -> Outcome {
    let s = scene()?;
    let sensors = make_circle_array(3.0, 12, 0.0)?;
    let k = add_awgn(&assemble_msr(&s, &sensors, &make_direction_set(5, 0.4)?)?, 20.0, 9)?;
    let msr_ok = read_msr_csv(&write_msr_csv(&k))? == k;

    let geometry = FresnelGeometry::default();
    let records: Vec<FresnelRecord> = (0..36)
        .flat_map(|t| (0..49).filter(move |r| (r + t) % 3 != 0).map(move |r| (t, r)))
        .map(|(t, r)| FresnelRecord {
            transmitter: t + 1,
            receiver: r + 1,
            frequency_ghz: 2.0,
            total: Complex::new(t as f64 * 0.125 - 1.0, r as f64 / 3.0),
            incident: Complex::new(1.0 / (1.0 + r as f64), -0.5),
        })
        .collect();
    let text = write_fresnel(&records);
    let parsed = parse_fresnel(&text, &FresnelSchema::default(), 2.0)?;
    let fresnel_ok = parsed.records == records && write_fresnel(&parsed.records) == text;
    let masked = to_msr(&parsed.records, &geometry)?.unmasked_count() == records.len();
    Ok((msr_ok && fresnel_ok && masked, format!("MSR CSV {msr_ok}; Fresnel text {fresnel_ok}; mask {masked}")))
}

fn normalized_maps() -> Outcome {
    let s = scene()?;
    let k0 = s.background.k0;
    let grid = make_grid(Point::ORIGIN, 1.2, 0.05)?;
    let k = assemble_msr(&s, &make_circle_array(3.0, 36, 0.0)?, &make_direction_set(12, std::f64::consts::PI)?)?;
    let scaled = k.scaled(Complex::new(-2.0e3, 0.7));
    let mut ok = true;
    let mut worst = 0.0f64;
    let pairs = [
        (dsm_multi(&k, &grid, k0)?, dsm_multi(&scaled, &grid, k0)?),
        (dsma(&k, &grid, k0)?, dsma(&scaled, &grid, k0)?),
        (kirchhoff(&k, &grid, k0, true)?, kirchhoff(&scaled, &grid, k0, true)?),
    ];
    for (a, b) in &pairs {
        ok &= a.max() == 1.0 && a.values.iter().all(|v| (0.0..=1.0).contains(v));
        worst = worst.max(a.max_abs_diff(b)?);
        for c in s.inhomogeneities.iter().map(|m| m.center) {
            ok &= dominant_peaks(a, 3, 0.2).into_iter().any(|p| within_one_cell(&grid, p, c));
        }
    }
    let same = pairs[1].0.max_abs_diff(&pairs[2].0)?;
    Ok((
        ok && worst < 1e-12 && same < 1e-9,
        format!("range and peaks ok: {ok}; scale change {worst:.1e}; DSMA vs NKM {same:.1e}"),
    ))
}

fn noise_determinism() -> Outcome {
    let k = assemble_msr(&scene()?, &make_circle_array(3.0, 8, 0.0)?, &make_direction_set(3, 0.0)?)?;
    let same = add_awgn(&k, 20.0, 42)? == add_awgn(&k, 20.0, 42)?;
    let differ = add_awgn(&k, 20.0, 42)? != add_awgn(&k, 20.0, 43)?;
    Ok((same && differ, format!("same seed equal: {same}; other seed differs: {differ}")))
}

fn pgm_levels() -> Outcome {
    let grid = make_grid(Point::ORIGIN, 2.0, 1.0)?;
    let map = IndicatorMap::new(
        grid,
        ndarray::Array2::from_shape_vec((2, 2), vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]).expect("2x2"),
        dsmap_core::Algorithm::Dsm,
    )?;
    let bytes = encode_pgm(&map)?;
    let px: Vec<u16> = bytes[13..].chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect();
    Ok((px == [0, 21845, 43690, 65535], format!("{px:?}")))
}

/// Runs every check; a check that errors counts as failed.
pub fn run_checks() -> Vec<Check> {
    let checks: [(&'static str, CheckFn); 7] = [
        ("green-symmetry", green_symmetry),
        ("bessel-bounds", bessel_bounds),
        ("threshold-jaccard", threshold_and_jaccard),
        ("round-trips", round_trips),
        ("normalized-maps", normalized_maps),
        ("noise-determinism", noise_determinism),
        ("pgm-levels", pgm_levels),
    ];
    checks
        .iter()
        .map(|&(name, f)| match f() {
            Ok((pass, detail)) => Check { name, pass, detail },
            Err(e) => Check { name, pass: false, detail: format!("error: {e}") },
        })
        .collect()
}
