use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::MsrMatrix;
use crate::error::{Error, Result};
use crate::Complex;

/// Adds circularly-symmetric complex white Gaussian noise at `snr_db`.
///
/// Signal power is the mean `|K[n,l]|²` over measured entries; each measured
/// entry receives noise of variance `P / 10^(snr_db/10)`, split evenly between
/// real and imaginary parts. Entries are visited row-major, so a fixed seed
/// gives bit-identical output. `snr_db = +∞` disables noise.
pub fn add_awgn(msr: &MsrMatrix, snr_db: f64, seed: u64) -> Result<MsrMatrix> {
    let measured = msr.unmasked_count();
    if measured == 0 {
        return Err(Error::domain("cannot add noise to a fully masked MSR matrix"));
    }
    if snr_db.is_nan() {
        return Err(Error::domain("SNR must be a number"));
    }
    if snr_db == f64::INFINITY {
        return Ok(msr.clone());
    }
    let power = msr.values().iter().zip(msr.mask()).filter(|(_, &m)| m).map(|(v, _)| v.norm_sqr()).sum::<f64>()
        / measured as f64;
    let sigma = (power / 10f64.powf(snr_db / 10.0) / 2.0).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = msr.values().clone();
    for (v, &m) in values.iter_mut().zip(msr.mask()) {
        if m {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *v += Complex::new(sigma * re, sigma * im);
        }
    }
    Ok(msr.with_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::Provenance;
    use crate::scene::{make_circle_array, make_direction_set};
    use ndarray::Array2;

    fn ramp(n: usize, l: usize) -> MsrMatrix {
        let values = Array2::from_shape_fn((n, l), |(i, j)| Complex::new(1.0 + i as f64, (j as f64).sin()));
        MsrMatrix::full(
            values,
            make_circle_array(3.0, n, 0.0).unwrap(),
            make_direction_set(l, 0.0).unwrap(),
            Provenance::External,
        )
        .unwrap()
    }

    #[test]
    fn infinite_snr_is_identity() {
        let k = ramp(4, 3);
        assert_eq!(add_awgn(&k, f64::INFINITY, 1).unwrap(), k);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let k = ramp(6, 5);
        let a = add_awgn(&k, 20.0, 42).unwrap();
        let b = add_awgn(&k, 20.0, 42).unwrap();
        let c = add_awgn(&k, 20.0, 43).unwrap();
        assert!(a
            .values()
            .iter()
            .zip(b.values())
            .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
        assert_ne!(a, c);
    }

    #[test]
    fn empirical_snr_close_to_target() {
        let k = ramp(40, 40);
        let noisy = add_awgn(&k, 20.0, 7).unwrap();
        let signal: f64 = k.values().iter().map(|v| v.norm_sqr()).sum();
        let noise: f64 = noisy.values().iter().zip(k.values()).map(|(a, b)| (a - b).norm_sqr()).sum();
        let snr = 10.0 * (signal / noise).log10();
        assert!((snr - 20.0).abs() <= 0.5, "{snr}");
    }

    #[test]
    fn masked_entries_stay_zero() {
        let k = ramp(3, 3);
        let mut mask = Array2::from_elem((3, 3), true);
        mask[[0, 1]] = false;
        let k =
            MsrMatrix::new(k.values().clone(), mask, k.sensors().clone(), k.incidents().clone(), Provenance::External)
                .unwrap();
        let noisy = add_awgn(&k, 10.0, 3).unwrap();
        assert_eq!(noisy.values()[[0, 1]], Complex::new(0.0, 0.0));
    }

    #[test]
    fn fully_masked_is_an_error() {
        let k = ramp(2, 2);
        let k = MsrMatrix::new(
            k.values().clone(),
            Array2::from_elem((2, 2), false),
            k.sensors().clone(),
            k.incidents().clone(),
            Provenance::External,
        )
        .unwrap();
        assert!(matches!(add_awgn(&k, 20.0, 0), Err(Error::Domain(_))));
    }
}
