mod common;

use std::f64::consts::PI;

use common::oracle;
use dsmap_core::{bessel_j0, bessel_y0, green2d, Complex, Error, Point};

fn samples(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
}

#[test]
fn j0_matches_series_oracle_up_to_200() {
    let mut worst = 0.0f64;
    for x in samples(0.0, 200.0, 1601) {
        worst = worst.max((bessel_j0(x).unwrap() - oracle::j0(x)).abs());
    }
    assert!(worst <= 1e-7, "worst |ΔJ0| = {worst:e}");
}

#[test]
fn y0_matches_series_oracle_up_to_200() {
    let mut worst = 0.0f64;
    for x in samples(0.01, 200.0, 1601) {
        worst = worst.max((bessel_y0(x).unwrap() - oracle::y0(x)).abs());
    }
    assert!(worst <= 1e-7, "worst |ΔY0| = {worst:e}");
}

#[test]
fn frozen_values_and_zeros() {
    assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
    assert!((bessel_j0(1.0).unwrap() - 0.765_197_686_6).abs() < 1e-10);
    assert!((bessel_y0(1.0).unwrap() - 0.088_256_964_2).abs() < 1e-10);
    let j_zero = oracle::bisect(oracle::j0, 2.0, 3.0);
    let y_zero = oracle::bisect(oracle::y0, 0.5, 1.5);
    assert!((j_zero - 2.404_825_557_7).abs() < 1e-10);
    assert!((y_zero - 0.893_576_966_3).abs() < 1e-10);
    assert!(bessel_j0(2.404_825_557_7).unwrap().abs() <= 1e-7);
    assert!(bessel_y0(0.893_576_966_3).unwrap().abs() <= 1e-6);
}

#[test]
fn domain_errors() {
    for x in [-1.0, f64::NAN, f64::INFINITY] {
        assert!(matches!(bessel_j0(x), Err(Error::Domain(_))));
    }
    for x in [0.0, -0.5, f64::NAN] {
        assert!(matches!(bessel_y0(x), Err(Error::Domain(_))));
    }
    let p = Point::new(0.2, 0.1);
    assert!(matches!(green2d(p, p, 10.0), Err(Error::Domain(_))));
}

#[test]
fn wronskian() {
    for x in samples(0.5, 50.0, 400) {
        let h = 1e-5 * x.max(1.0);
        let dj = (bessel_j0(x + h).unwrap() - bessel_j0(x - h).unwrap()) / (2.0 * h);
        let dy = (bessel_y0(x + h).unwrap() - bessel_y0(x - h).unwrap()) / (2.0 * h);
        let w = bessel_j0(x).unwrap() * dy - dj * bessel_y0(x).unwrap();
        let expect = 2.0 / (PI * x);
        assert!(((w - expect) / expect).abs() <= 1e-6, "x = {x}: {w} vs {expect}");
    }
}

#[test]
fn green_function_at_a_j0_zero() {
    let x = Point::new(2.404_825_557_7, 0.0);
    let g = green2d(Point::ORIGIN, x, 1.0).unwrap();
    assert!(g.im.abs() <= 1e-7 / 4.0);
    let expect = Complex::new(oracle::y0(x.x) / 4.0, -oracle::j0(x.x) / 4.0);
    assert!((g - expect).norm() < 1e-8);
}
