//! Shared fixtures for the imaging benchmarks.

use dsmap_core::{
    assemble_msr, make_circle_array, make_direction_set, make_grid, Background, ImagingGrid, Inhomogeneity, MsrMatrix,
    Point, Scene,
};

/// Three-disk scene at λ = 0.4 m with its 36 × `incidences` MSR matrix and a
/// 1.2 m grid of cell size `cell`.
pub fn three_disks(incidences: usize, cell: f64) -> (Scene, MsrMatrix, ImagingGrid) {
    let bg = Background::from_wavelength(0.4).expect("valid wavelength");
    let disks = [(0.3, -0.3), (-0.4, -0.2), (-0.3, 0.4)]
        .iter()
        .map(|&(x, y)| Inhomogeneity::disk(Point::new(x, y), 0.03, 5.0, &bg).expect("valid disk"))
        .collect();
    let scene = Scene::new(bg, disks).expect("distinct centres");
    let sensors = make_circle_array(3.0, 36, 0.0).expect("valid array");
    let incidents = make_direction_set(incidences, std::f64::consts::PI).expect("valid directions");
    let msr = assemble_msr(&scene, &sensors, &incidents).expect("sensors avoid inclusions");
    let grid = make_grid(Point::ORIGIN, 1.2, cell).expect("valid grid");
    (scene, msr, grid)
}
