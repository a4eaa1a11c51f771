//! Background medium, inclusions, sensor array, incident directions and the
//! imaging grid.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Vacuum permeability (H/m).
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;

/// Point or vector in the plane, in metres.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point::new(radius * c, radius * s)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counter-clockwise rotation by `angle` about the origin.
    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// Homogeneous, non-magnetic background medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Background {
    pub frequency: f64,
    pub wavelength: f64,
    pub k0: f64,
    pub eps0: f64,
    pub mu0: f64,
    pub omega: f64,
}

impl Background {
    /// Vacuum background at the given wavelength.
    pub fn from_wavelength(wavelength: f64) -> Result<Self> {
        if !(wavelength > 0.0) || !wavelength.is_finite() {
            return Err(Error::config(format!("wavelength must be positive, got {wavelength}")));
        }
        let eps0 = VACUUM_PERMITTIVITY;
        let mu0 = VACUUM_PERMEABILITY;
        let c = 1.0 / (eps0 * mu0).sqrt();
        let frequency = c / wavelength;
        Ok(Background { frequency, wavelength, k0: TAU / wavelength, eps0, mu0, omega: TAU * frequency })
    }

    /// Vacuum background at the given frequency in Hz.
    pub fn from_frequency(frequency: f64) -> Result<Self> {
        if !(frequency > 0.0) || !frequency.is_finite() {
            return Err(Error::config(format!("frequency must be positive, got {frequency}")));
        }
        let c = 1.0 / (VACUUM_PERMITTIVITY * VACUUM_PERMEABILITY).sqrt();
        let mut bg = Background::from_wavelength(c / frequency)?;
        bg.frequency = frequency;
        bg.omega = TAU * frequency;
        Ok(bg)
    }

    /// Wavenumber inside a medium of permittivity `eps` (F/m).
    pub fn wavenumber_in(&self, eps: f64) -> f64 {
        self.omega * (eps * self.mu0).sqrt()
    }
}

/// Small disk-shaped dielectric inclusion `r + α B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inhomogeneity {
    pub center: Point,
    pub radius: f64,
    /// Absolute permittivity in F/m.
    pub permittivity: f64,
    /// Area of the reference shape `B` (π for the unit disk).
    pub shape_area: f64,
}

impl Inhomogeneity {
    /// Disk with relative permittivity `eps_r` against the background.
    pub fn disk(center: Point, radius: f64, eps_r: f64, background: &Background) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::config(format!("inclusion radius must be positive, got {radius}")));
        }
        if !(eps_r > 0.0) || !eps_r.is_finite() {
            return Err(Error::config(format!("relative permittivity must be positive, got {eps_r}")));
        }
        Ok(Inhomogeneity { center, radius, permittivity: eps_r * background.eps0, shape_area: PI })
    }

    /// Whether the small-inclusion hypothesis `α < λ/2` holds.
    pub fn is_small(&self, background: &Background) -> bool {
        self.radius < 0.5 * background.wavelength
    }

    pub fn contains(&self, p: Point) -> bool {
        self.center.distance(p) <= self.radius
    }
}

/// Background plus the ordered list of inclusions.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub background: Background,
    pub inhomogeneities: Vec<Inhomogeneity>,
}

impl Scene {
    /// Builds a scene, rejecting coincident centres.
    pub fn new(background: Background, inhomogeneities: Vec<Inhomogeneity>) -> Result<Self> {
        let scene = Scene { background, inhomogeneities };
        if let Some(d0) = scene.min_separation() {
            if !(d0 > 0.0) {
                return Err(Error::config("inclusion centres must be pairwise distinct"));
            }
        }
        Ok(scene)
    }

    pub fn is_empty(&self) -> bool {
        self.inhomogeneities.is_empty()
    }

    /// Minimum pairwise centre distance, `None` for fewer than two inclusions.
    pub fn min_separation(&self) -> Option<f64> {
        let inc = &self.inhomogeneities;
        let mut best: Option<f64> = None;
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let d = inc[i].center.distance(inc[j].center);
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
        }
        best
    }

    /// Indices of inclusions that violate `α < λ/2`.
    pub fn large_inclusions(&self) -> Vec<usize> {
        self.inhomogeneities.iter().enumerate().filter(|(_, m)| !m.is_small(&self.background)).map(|(i, _)| i).collect()
    }

    /// Stable 64-bit FNV-1a fingerprint of every numeric field.
    pub fn fingerprint(&self) -> u64 {
        let bg = &self.background;
        let mut words = vec![bg.wavelength, bg.k0, bg.eps0, bg.mu0];
        for m in &self.inhomogeneities {
            words.extend([m.center.x, m.center.y, m.radius, m.permittivity, m.shape_area]);
        }
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for w in words {
            for b in w.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

/// How a sensor array was constructed.
#[derive(Debug, Clone, PartialEq)]
pub enum SensorLayout {
    Circle { radius: f64, start_angle: f64, count: usize },
    Explicit,
}

/// Receiver positions `x_n` on the measurement curve Γ.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorArray {
    pub positions: Vec<Point>,
    pub layout: SensorLayout,
}

impl SensorArray {
    /// Arbitrary receiver positions; must be non-empty and distinct.
    pub fn explicit(positions: Vec<Point>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::config("sensor array needs at least one position"));
        }
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                if positions[i] == positions[j] {
                    return Err(Error::config(format!("sensor positions {i} and {j} coincide")));
                }
            }
        }
        Ok(SensorArray { positions, layout: SensorLayout::Explicit })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Point-in-polygon test against the closed curve through the sensors,
    /// ordered by polar angle about their centroid.
    pub fn encloses(&self, p: Point) -> bool {
        if let SensorLayout::Circle { radius, .. } = self.layout {
            return p.norm() < radius;
        }
        let n = self.positions.len();
        if n < 3 {
            return false;
        }
        let c = self.positions.iter().fold(Point::ORIGIN, |a, &b| a + b) * (1.0 / n as f64);
        let mut ring = self.positions.clone();
        ring.sort_by(|a, b| (*a - c).angle().total_cmp(&(*b - c).angle()));
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (ring[i], ring[j]);
            if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
                inside = !inside;
            }
            j = i;
        }
        inside
    }
}

/// `count` sensors evenly spaced on a circle centred at the origin.
pub fn make_circle_array(radius: f64, count: usize, start_angle: f64) -> Result<SensorArray> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::config(format!("sensor circle radius must be positive, got {radius}")));
    }
    if count == 0 {
        return Err(Error::config("sensor count must be at least 1"));
    }
    let positions =
        (0..count).map(|n| Point::from_polar(radius, start_angle + TAU * n as f64 / count as f64)).collect();
    Ok(SensorArray { positions, layout: SensorLayout::Circle { radius, start_angle, count } })
}

/// Plane-wave propagation directions `d_l` on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidentSet {
    pub directions: Vec<Point>,
}

impl IncidentSet {
    /// Arbitrary directions; each is checked to be a unit vector.
    pub fn explicit(directions: Vec<Point>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::config("incident set needs at least one direction"));
        }
        for (l, d) in directions.iter().enumerate() {
            if (d.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::config(format!("direction {l} is not a unit vector")));
            }
        }
        Ok(IncidentSet { directions })
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

/// `count` directions evenly spaced on S¹ starting at `start_angle`.
pub fn make_direction_set(count: usize, start_angle: f64) -> Result<IncidentSet> {
    if count == 0 {
        return Err(Error::config("number of incident directions must be at least 1"));
    }
    let directions = (0..count).map(|l| Point::from_polar(1.0, start_angle + TAU * l as f64 / count as f64)).collect();
    Ok(IncidentSet { directions })
}

/// Square sampling of the search domain, one point per cell centre.
///
/// Row 0 is the top row (largest y), columns run left to right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagingGrid {
    pub center: Point,
    pub side: f64,
    pub cell: f64,
    pub rows: usize,
    pub cols: usize,
}

impl ImagingGrid {
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Centre of cell `(row, col)`.
    pub fn point(&self, row: usize, col: usize) -> Point {
        let half_w = 0.5 * (self.cols as f64 - 1.0);
        let half_h = 0.5 * (self.rows as f64 - 1.0);
        Point::new(self.center.x + (col as f64 - half_w) * self.cell, self.center.y + (half_h - row as f64) * self.cell)
    }

    /// All cell centres in row-major order.
    pub fn points(&self) -> Vec<Point> {
        (0..self.rows).flat_map(|r| (0..self.cols).map(move |c| (r, c))).map(|(r, c)| self.point(r, c)).collect()
    }

    /// Cell whose square contains `p`, clamped to the grid.
    pub fn cell_of(&self, p: Point) -> (usize, usize) {
        let half_w = 0.5 * self.cols as f64;
        let half_h = 0.5 * self.rows as f64;
        let col = ((p.x - self.center.x) / self.cell + half_w).floor();
        let row = (half_h - (p.y - self.center.y) / self.cell).floor();
        let clamp = |v: f64, n: usize| v.max(0.0).min(n as f64 - 1.0) as usize;
        (clamp(row, self.rows), clamp(col, self.cols))
    }

    /// Checks that every grid point lies strictly inside the curve Γ.
    pub fn check_inside(&self, sensors: &SensorArray) -> Result<()> {
        for (i, p) in self.points().into_iter().enumerate() {
            if !sensors.encloses(p) {
                return Err(Error::config(format!(
                    "grid point {i} at ({:.4}, {:.4}) lies outside the measurement curve",
                    p.x, p.y
                )));
            }
        }
        Ok(())
    }
}

/// Uniform grid of cell size `cell` over a square of side `side`.
///
/// The number of cells per side is `round(side / cell)` (at least one); cell
/// centres are placed symmetrically about `center`.
pub fn make_grid(center: Point, side: f64, cell: f64) -> Result<ImagingGrid> {
    if !(side > 0.0) || !side.is_finite() {
        return Err(Error::config(format!("grid side must be positive, got {side}")));
    }
    if !(cell > 0.0) || !cell.is_finite() {
        return Err(Error::config(format!("grid cell size must be positive, got {cell}")));
    }
    if cell > side {
        return Err(Error::config(format!("cell size {cell} exceeds grid side {side}")));
    }
    let n = ((side / cell).round() as usize).max(1);
    Ok(ImagingGrid { center, side, cell, rows: n, cols: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_circle_array() {
        let a = make_circle_array(3.0, 4, 0.0).unwrap();
        let expect = [(3.0, 0.0), (0.0, 3.0), (-3.0, 0.0), (0.0, -3.0)];
        for (p, (x, y)) in a.positions.iter().zip(expect) {
            assert!((p.x - x).abs() < 1e-12 && (p.y - y).abs() < 1e-12);
        }
    }

    #[test]
    fn thirty_six_sensors_ten_degrees_apart() {
        let a = make_circle_array(3.0, 36, 0.0).unwrap();
        assert_eq!(a.len(), 36);
        for w in a.positions.windows(2) {
            let gap = (w[1].angle() - w[0].angle()).rem_euclid(TAU);
            assert!((gap.to_degrees() - 10.0).abs() < 1e-9);
        }
        for p in &a.positions {
            assert!((p.norm() - 3.0).abs() <= 1e-12 * 3.0);
        }
    }

    #[test]
    fn circle_array_rejects_bad_input() {
        assert!(matches!(make_circle_array(0.0, 8, 0.0), Err(Error::Config(_))));
        assert!(make_circle_array(1.0, 0, 0.0).is_err());
    }

    #[test]
    fn direction_sets() {
        let one = make_direction_set(1, PI).unwrap();
        assert!((one.directions[0].x + 1.0).abs() < 1e-15);
        assert!(one.directions[0].y.abs() < 1e-15);
        let two = make_direction_set(2, 0.0).unwrap();
        assert!((two.directions[1].x + 1.0).abs() < 1e-15);
        let many = make_direction_set(36, 0.0).unwrap();
        assert!(many.directions.iter().all(|d| (d.norm() - 1.0).abs() < 1e-12));
        assert!(make_direction_set(0, 0.0).is_err());
    }

    #[test]
    fn grid_sizes() {
        let g = make_grid(Point::ORIGIN, 1.2, 0.0245).unwrap();
        assert_eq!((g.rows, g.cols), (49, 49));
        let g = make_grid(Point::ORIGIN, 1.0, 0.0408).unwrap();
        assert_eq!((g.rows, g.cols), (25, 25));
        let g = make_grid(Point::new(0.1, 0.2), 1.0, 1.0).unwrap();
        assert_eq!((g.rows, g.cols), (1, 1));
        assert_eq!(g.point(0, 0), Point::new(0.1, 0.2));
        assert!(make_grid(Point::ORIGIN, 1.0, 1.5).is_err());
    }

    #[test]
    fn grid_orientation_and_cell_lookup() {
        let g = make_grid(Point::ORIGIN, 1.2, 0.0245).unwrap();
        assert!(g.point(0, 0).y > 0.0 && g.point(0, 0).x < 0.0);
        let (r, c) = g.cell_of(Point::new(0.3, -0.3));
        let p = g.point(r, c);
        assert!((p.x - 0.3).abs() <= 0.5 * g.cell && (p.y + 0.3).abs() <= 0.5 * g.cell);
    }

    #[test]
    fn background_consistency() {
        let bg = Background::from_wavelength(0.4).unwrap();
        assert!((bg.k0 - TAU / 0.4).abs() <= 1e-12 * bg.k0);
        let k = bg.omega * (bg.eps0 * bg.mu0).sqrt();
        assert!((k - bg.k0).abs() <= 1e-9 * bg.k0);
        let f = Background::from_frequency(2e9).unwrap();
        assert!((f.wavelength - 0.1499).abs() < 1e-4);
    }

    #[test]
    fn scene_separation_and_small_flag() {
        let bg = Background::from_wavelength(0.4).unwrap();
        let a = Inhomogeneity::disk(Point::new(0.3, -0.3), 0.03, 5.0, &bg).unwrap();
        let b = Inhomogeneity::disk(Point::new(-0.4, -0.2), 0.4, 5.0, &bg).unwrap();
        let s = Scene::new(bg, vec![a, b]).unwrap();
        assert!((s.min_separation().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(s.large_inclusions(), vec![1]);
        assert!(Scene::new(bg, vec![a, a]).is_err());
    }

    #[test]
    fn explicit_sensor_polygon_encloses_centre() {
        let pts: Vec<Point> = (0..12).map(|i| Point::from_polar(2.0, TAU * i as f64 / 12.0 + 0.1)).collect();
        let arr = SensorArray::explicit(pts).unwrap();
        assert!(arr.encloses(Point::new(0.2, -0.1)));
        assert!(!arr.encloses(Point::new(3.0, 0.0)));
    }

    #[test]
    fn construction_is_deterministic() {
        let a = make_circle_array(3.0, 36, 0.25).unwrap();
        let b = make_circle_array(3.0, 36, 0.25).unwrap();
        assert!(a.positions.iter().zip(&b.positions).all(|(p, q)| p.x.to_bits() == q.x.to_bits()));
    }
}
