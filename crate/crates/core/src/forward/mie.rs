//! TM plane-wave scattering by a homogeneous dielectric circular cylinder.
//!
//! Exterior field: `u^s = e^{i k0 d·c} Σ_n b_n H_n⁽¹⁾(k0 ρ) e^{i n θ}` with
//! `θ` measured from `d`. Continuity of `u` and `∂u/∂ρ` at `ρ = a` gives
//!
//! ```text
//! b_n = i^n [k1 J_n'(k1 a) J_n(k0 a) − k0 J_n'(k0 a) J_n(k1 a)]
//!           / [k0 H_n'(k0 a) J_n(k1 a) − k1 J_n'(k1 a) H_n(k0 a)]
//! ```
//!
//! and `b_{-n} H_{-n} = b_n H_n`, so only `n ≥ 0` is stored.

use crate::error::{Error, Result};
use crate::scene::Point;
use crate::Complex;

/// Safety margin added to `⌈k0 a⌉` when choosing the series truncation.
pub const DEFAULT_EXTRA_TERMS: usize = 15;

fn jn(n: i32, x: f64) -> f64 {
    libm::jn(n, x)
}

fn yn(n: i32, x: f64) -> f64 {
    libm::yn(n, x)
}

fn jn_prime(n: i32, x: f64) -> f64 {
    if n == 0 {
        -jn(1, x)
    } else {
        0.5 * (jn(n - 1, x) - jn(n + 1, x))
    }
}

fn hankel(n: i32, x: f64) -> Complex {
    Complex::new(jn(n, x), yn(n, x))
}

fn hankel_prime(n: i32, x: f64) -> Complex {
    if n == 0 {
        -hankel(1, x)
    } else {
        0.5 * (hankel(n - 1, x) - hankel(n + 1, x))
    }
}

/// Precomputed scattering coefficients of one cylinder.
#[derive(Debug, Clone)]
pub struct MieCylinder {
    radius: f64,
    center: Point,
    k0: f64,
    coefficients: Vec<Complex>,
}

impl MieCylinder {
    /// Coefficients `b_0 ..= b_truncation`.
    pub fn new(radius: f64, eps_r: f64, center: Point, k0: f64, truncation: usize) -> Result<Self> {
        if !(radius > 0.0) || !(eps_r > 0.0) || !(k0 > 0.0) {
            return Err(Error::domain("cylinder radius, permittivity and k0 must be positive"));
        }
        if truncation < 1 {
            return Err(Error::domain("series truncation must be at least 1"));
        }
        let k1 = k0 * eps_r.sqrt();
        let (x0, x1) = (k0 * radius, k1 * radius);
        let mut coefficients = Vec::with_capacity(truncation + 1);
        let mut i_pow = Complex::new(1.0, 0.0);
        for n in 0..=truncation as i32 {
            let (j0a, j1a) = (jn(n, x0), jn(n, x1));
            let (dj0a, dj1a) = (jn_prime(n, x0), jn_prime(n, x1));
            let num = k1 * dj1a * j0a - k0 * dj0a * j1a;
            let den = k0 * hankel_prime(n, x0) * j1a - k1 * dj1a * hankel(n, x0);
            let b = i_pow * num / den;
            if !b.re.is_finite() || !b.im.is_finite() {
                return Err(Error::Numerical(format!("Mie coefficient b_{n} is not finite")));
            }
            coefficients.push(b);
            i_pow *= Complex::new(0.0, 1.0);
        }
        Ok(MieCylinder { radius, center, k0, coefficients })
    }

    pub fn coefficients(&self) -> &[Complex] {
        &self.coefficients
    }

    /// Scattered field at `x` for incidence direction `d`.
    pub fn scattered_field(&self, x: Point, d: Point) -> Result<Complex> {
        let rel = x - self.center;
        let rho = rel.norm();
        if rho <= self.radius {
            return Err(Error::domain(format!("observation point ({}, {}) lies inside the cylinder", x.x, x.y)));
        }
        let theta = rel.angle() - d.angle();
        let kr = self.k0 * rho;
        let mut sum = self.coefficients[0] * hankel(0, kr);
        for (n, b) in self.coefficients.iter().enumerate().skip(1) {
            sum += 2.0 * b * hankel(n as i32, kr) * (n as f64 * theta).cos();
        }
        let out = Complex::from_polar(1.0, self.k0 * d.dot(self.center)) * sum;
        if !out.re.is_finite() || !out.im.is_finite() {
            return Err(Error::Numerical("Mie series produced a non-finite value".into()));
        }
        Ok(out)
    }
}

/// One-shot evaluation of the cylinder series.
pub fn mie_cylinder_scattered_field(
    radius: f64,
    eps_r: f64,
    center: Point,
    k0: f64,
    x: Point,
    d: Point,
    truncation: usize,
) -> Result<Complex> {
    MieCylinder::new(radius, eps_r, center, k0, truncation)?.scattered_field(x, d)
}
