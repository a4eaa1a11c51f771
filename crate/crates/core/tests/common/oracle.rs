//! Arbitrary-precision ascending-series reference values for J0, J1 and Y0.
//!
//! Sums are carried out in fixed point with 120 decimal digits, so the
//! alternating series stays exact well past x = 50 where the individual
//! terms reach 1e21.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

const DIGITS: u32 = 120;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn scale() -> BigInt {
    BigInt::from(10u32).pow(DIGITS)
}

/// `x · 10^DIGITS` rounded toward zero, exact for the f64 input.
fn to_fixed(x: f64) -> BigInt {
    assert!(x.is_finite() && x >= 0.0);
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let m = BigInt::from(mant) * scale();
    if e >= 0 {
        m << e as usize
    } else {
        m >> (-e) as usize
    }
}

fn to_f64(v: &BigInt) -> f64 {
    let shift = BigInt::from(10u32).pow(DIGITS - 30);
    (v / shift).to_f64().unwrap() / 1e30
}

/// Returns `(J0, Σ_{k≥1} (−1)^{k+1} H_k (x²/4)^k/(k!)²)` in fixed point.
fn series(x: f64) -> (BigInt, BigInt) {
    let s = scale();
    let xf = to_fixed(x);
    let q = &xf * &xf / (&s * 4u32);
    let mut term = s.clone();
    let mut j0 = s.clone();
    let mut harmonic = BigInt::zero();
    let mut tail = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        k += 1;
        term = term * &q / &s / BigInt::from(k * k);
        harmonic += &s / BigInt::from(k);
        let weighted = &term * &harmonic / &s;
        if k % 2 == 1 {
            j0 -= &term;
            tail += &weighted;
        } else {
            j0 += &term;
            tail -= &weighted;
        }
        if term.is_zero() || (k as f64 > x && term.abs() < BigInt::one()) {
            break;
        }
    }
    (j0, tail)
}

pub fn j0(x: f64) -> f64 {
    to_f64(&series(x).0)
}

/// `J1(x) = Σ (−1)^k (x/2)^{2k+1} / (k! (k+1)!)`.
pub fn j1(x: f64) -> f64 {
    let s = scale();
    let half = to_fixed(x) / 2u32;
    let q = &half * &half / &s;
    let mut term = half;
    let mut sum = term.clone();
    let mut k: u64 = 0;
    loop {
        k += 1;
        term = term * &q / &s / BigInt::from(k * (k + 1));
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        if term.is_zero() || (k as f64 > x && term.abs() < BigInt::one()) {
            break;
        }
    }
    to_f64(&sum)
}

/// `Y0 = (2/π) [(ln(x/2) + γ) J0(x) + Σ_{k≥1} (−1)^{k+1} H_k (x²/4)^k/(k!)²]`.
pub fn y0(x: f64) -> f64 {
    assert!(x > 0.0);
    let (j, tail) = series(x);
    let j = to_f64(&j);
    let tail = to_f64(&tail);
    std::f64::consts::FRAC_2_PI * (((0.5 * x).ln() + EULER_GAMMA) * j + tail)
}

/// Root of `f` in `[lo, hi]` by bisection to f64 resolution.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "bracket does not change sign");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
