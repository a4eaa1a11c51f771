#![allow(dead_code)]

pub mod oracle;

use std::f64::consts::PI;

use dsmap_core::{
    make_circle_array, make_direction_set, make_grid, Background, ImagingGrid, IncidentSet, Inhomogeneity, Point,
    Scene, SensorArray,
};

pub const LAMBDA: f64 = 0.4;
pub const CENTERS: [(f64, f64); 3] = [(0.3, -0.3), (-0.4, -0.2), (-0.3, 0.4)];

pub fn background() -> Background {
    Background::from_wavelength(LAMBDA).unwrap()
}

pub fn disks(radii: &[f64], centers: &[(f64, f64)], eps_r: f64) -> Scene {
    let bg = background();
    let inc = centers
        .iter()
        .zip(radii)
        .map(|(&(x, y), &a)| Inhomogeneity::disk(Point::new(x, y), a, eps_r, &bg).unwrap())
        .collect();
    Scene::new(bg, inc).unwrap()
}

/// Three equal disks, α = 0.03 m, ε = 5ε0.
pub fn example1() -> Scene {
    disks(&[0.03; 3], &CENTERS, 5.0)
}

/// Same centres, radii 0.035, 0.03, 0.025 m.
pub fn example2() -> Scene {
    disks(&[0.035, 0.03, 0.025], &CENTERS, 5.0)
}

/// One disk of radius λ at (−0.3, −0.3).
pub fn example4() -> Scene {
    disks(&[0.4], &[(-0.3, -0.3)], 5.0)
}

pub fn centers(scene: &Scene) -> Vec<Point> {
    scene.inhomogeneities.iter().map(|m| m.center).collect()
}

/// 36 receivers on the 3 m circle.
pub fn sensors() -> SensorArray {
    make_circle_array(3.0, 36, 0.0).unwrap()
}

/// `count` directions starting at d = (−1, 0).
pub fn directions(count: usize) -> IncidentSet {
    make_direction_set(count, PI).unwrap()
}

/// 1.2 m square, h = 0.0245 m.
pub fn grid() -> ImagingGrid {
    make_grid(Point::ORIGIN, 1.2, 0.0245).unwrap()
}

/// 1.0 m square, h = 0.0408 m.
pub fn grid_large_disk() -> ImagingGrid {
    make_grid(Point::ORIGIN, 1.0, 0.0408).unwrap()
}

/// Fresnel-format records for two dielectric cylinders, generated with the
/// single-cylinder series and plane-wave illumination. Receivers within 60°
/// of the active source are omitted, as in the measurement set-up.
pub fn synthetic_fresnel(frequencies_ghz: &[f64]) -> (Vec<dsmap_core::FresnelRecord>, Scene) {
    use dsmap_core::forward::{MieCylinder, DEFAULT_EXTRA_TERMS};
    use dsmap_core::{Complex, FresnelGeometry, FresnelRecord};

    let geometry = FresnelGeometry::default();
    let receivers = geometry.receivers().unwrap();
    let incidents = geometry.incidents().unwrap();
    let mut records = Vec::new();
    let mut scene_at_2ghz = None;
    for &f in frequencies_ghz {
        let bg = Background::from_frequency(f * 1e9).unwrap();
        let lam = bg.wavelength;
        let centers = [(-2.0 * lam / 30.0, -0.3 * lam), (0.0, 0.3 * lam)];
        let radius = 0.015;
        let inc: Vec<Inhomogeneity> =
            centers.iter().map(|&(x, y)| Inhomogeneity::disk(Point::new(x, y), radius, 3.0, &bg).unwrap()).collect();
        let cylinders: Vec<MieCylinder> = inc
            .iter()
            .map(|m| {
                let order = (bg.k0 * radius).ceil() as usize + DEFAULT_EXTRA_TERMS;
                MieCylinder::new(radius, 3.0, m.center, bg.k0, order).unwrap()
            })
            .collect();
        if (f - 2.0).abs() < 1e-12 {
            scene_at_2ghz = Some(Scene::new(bg, inc).unwrap());
        }
        for (l, (&theta, &d)) in geometry.source_angles_deg.iter().zip(&incidents.directions).enumerate() {
            for (n, (&phi, &x)) in geometry.receiver_angles_deg.iter().zip(&receivers.positions).enumerate() {
                let gap = (phi - theta).rem_euclid(360.0);
                if !(60.0..=300.0).contains(&gap) {
                    continue;
                }
                let incident = Complex::from_polar(1.0, bg.k0 * d.dot(x));
                let scattered: Complex = cylinders.iter().map(|c| c.scattered_field(x, d).unwrap()).sum();
                records.push(FresnelRecord {
                    transmitter: l + 1,
                    receiver: n + 1,
                    frequency_ghz: f,
                    total: incident + scattered,
                    incident,
                });
            }
        }
    }
    (records, scene_at_2ghz.expect("2 GHz among the generated frequencies"))
}

/// `count` receivers on the 3 m circle.
pub fn sensors_n(count: usize) -> SensorArray {
    make_circle_array(3.0, count, 0.0).unwrap()
}
