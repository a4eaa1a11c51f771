//! Zeroth-order cylindrical functions and the 2D Helmholtz fundamental solution.
//!
//! `J0` and `Y0` use the ascending power series below `x = 8` and the Hankel
//! asymptotic expansion (optimally truncated) above it. Absolute error stays
//! below 1e-8 across the switch point.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::scene::Point;
use crate::Complex;

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_LIMIT: f64 = 8.0;

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("J0 requires finite x >= 0, got {x}")));
    }
    Ok(j0_unchecked(x))
}

/// Bessel function of the second kind (Neumann function), order zero.
pub fn bessel_y0(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("Y0 requires finite x > 0, got {x}")));
    }
    Ok(y0_unchecked(x))
}

/// Fundamental solution `Φ(z, x) = -(i/4) H0⁽¹⁾(k0 |z - x|)`.
///
/// Written out, `Φ = (Y0 - i J0) / 4`. Coincident points are rejected.
pub fn green2d(z: Point, x: Point, k0: f64) -> Result<Complex> {
    if !(k0 > 0.0) || !k0.is_finite() {
        return Err(Error::domain(format!("wavenumber must be positive, got {k0}")));
    }
    let r = z.distance(x);
    if !(r > 0.0) {
        return Err(Error::domain(format!("Green's function is singular at coincident points ({}, {})", z.x, z.y)));
    }
    Ok(green_from_distance(k0 * r))
}

/// `Φ` as a function of the scaled distance `k0 |z - x| > 0`.
pub(crate) fn green_from_distance(kr: f64) -> Complex {
    let (j0, y0) = j0_y0_unchecked(kr);
    Complex::new(0.25 * y0, -0.25 * j0)
}

pub(crate) fn j0_unchecked(x: f64) -> f64 {
    if x < SERIES_LIMIT {
        j0_series(x)
    } else {
        let (p, q) = hankel_pq(x);
        let chi = x - FRAC_PI_4;
        (FRAC_2_PI / x).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}

pub(crate) fn y0_unchecked(x: f64) -> f64 {
    j0_y0_unchecked(x).1
}

/// Both functions at once; shares the series or the asymptotic terms.
pub(crate) fn j0_y0_unchecked(x: f64) -> (f64, f64) {
    if x < SERIES_LIMIT {
        let (j0, harmonic_sum) = j0_and_harmonic_series(x);
        let y0 = FRAC_2_PI * (((0.5 * x).ln() + EULER_GAMMA) * j0 + harmonic_sum);
        (j0, y0)
    } else {
        let (p, q) = hankel_pq(x);
        let chi = x - FRAC_PI_4;
        let (s, c) = chi.sin_cos();
        let amp = (FRAC_2_PI / x).sqrt();
        (amp * (p * c - q * s), amp * (p * s + q * c))
    }
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Returns `(J0(x), Σ_{k≥1} (-1)^{k+1} H_k (x²/4)^k / (k!)²)`.
fn j0_and_harmonic_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut j0 = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        // (-1)^{k+1} (x²/4)^k/(k!)² = -term
        tail -= harmonic * term;
        if term.abs() * harmonic < 1e-18 {
            break;
        }
    }
    (j0, tail)
}

/// Hankel asymptotic factors `P0(x)`, `Q0(x)`, truncated at the smallest term.
fn hankel_pq(x: f64) -> (f64, f64) {
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut k = 0u32;
    loop {
        let kn = k + 1;
        let odd = (2 * kn - 1) as f64;
        let next = term * (-(odd * odd)) / (kn as f64 * eight_x);
        if next.abs() >= term.abs() || next.abs() < 1e-18 {
            break;
        }
        // t_k carries the factor ∏(0 - (2j-1)²); P and Q alternate in k/2.
        match kn % 4 {
            1 => q += next,
            2 => p -= next,
            3 => q -= next,
            _ => p += next,
        }
        term = next;
        k = kn;
        if k > 200 {
            break;
        }
    }
    (p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen values from the arbitrary-precision series oracle in
    // tests/common/oracle.rs (agree with mpmath to all printed digits).
    const J0_AT_1: f64 = 0.765_197_686_557_966_6;
    const Y0_AT_1: f64 = 0.088_256_964_215_676_96;
    const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;
    const Y0_FIRST_ZERO: f64 = 0.893_576_966_279_167_5;

    #[test]
    fn j0_reference_points() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        assert!((bessel_j0(1.0).unwrap() - J0_AT_1).abs() < 1e-12);
        assert!(bessel_j0(2.404_825_557_7).unwrap().abs() <= 1e-7);
        assert!(bessel_j0(J0_FIRST_ZERO).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn y0_reference_points() {
        assert!((bessel_y0(1.0).unwrap() - Y0_AT_1).abs() < 1e-12);
        assert!(bessel_y0(0.893_576_966_3).unwrap().abs() <= 1e-6);
        assert!(bessel_y0(Y0_FIRST_ZERO).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_j0(-1e-3), Err(Error::Domain(_))));
        assert!(matches!(bessel_j0(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_j0(f64::INFINITY), Err(Error::Domain(_))));
        assert!(matches!(bessel_y0(0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_y0(-2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn continuity_across_regime_switch() {
        let below = SERIES_LIMIT * (1.0 - 1e-12);
        let (ja, ya) = j0_y0_unchecked(below);
        let (jb, yb) = j0_y0_unchecked(SERIES_LIMIT);
        assert!((ja - jb).abs() < 1e-8);
        assert!((ya - yb).abs() < 1e-8);
    }

    #[test]
    fn green_is_y0_minus_i_j0_over_four() {
        let k0 = 2.0;
        let z = Point::new(0.0, 0.0);
        let x = Point::new(1.202_412_778_85, 0.0);
        let g = green2d(z, x, k0).unwrap();
        // k0 r is the first zero of J0, so the imaginary part vanishes.
        assert!(g.im.abs() < 1e-7 / 4.0);
        let y = bessel_y0(k0 * 1.202_412_778_85).unwrap();
        assert!((g.re - y / 4.0).abs() < 1e-15);
    }

    #[test]
    fn green_rejects_coincident_points() {
        let p = Point::new(0.3, -0.2);
        assert!(matches!(green2d(p, p, 10.0), Err(Error::Domain(_))));
        assert!(green2d(p, Point::new(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn green_symmetric() {
        let a = Point::new(0.1, 2.0);
        let b = Point::new(-1.3, 0.25);
        assert_eq!(green2d(a, b, 15.7).unwrap(), green2d(b, a, 15.7).unwrap());
    }
}
