mod common;

use ndarray::Array2;
use proptest::prelude::*;

use dsmap_core::forward::csv::{read_msr_csv, write_msr_csv};
use dsmap_core::{
    add_awgn, assemble_msr, bessel_j0, dsm_multi, dsma, exact_map, green2d, jaccard, kirchhoff, make_grid,
    parse_fresnel, threshold_map, write_fresnel, Algorithm, Complex, FresnelRecord, FresnelSchema, ImagingGrid,
    IndicatorMap, Inhomogeneity, MsrMatrix, Point, Provenance, Scene,
};

fn small_grid() -> ImagingGrid {
    make_grid(Point::ORIGIN, 1.2, 0.1).unwrap()
}

fn point(range: f64) -> impl Strategy<Value = Point> {
    (-range..range, -range..range).prop_map(|(x, y)| Point::new(x, y))
}

fn map_strategy() -> impl Strategy<Value = IndicatorMap> {
    proptest::collection::vec(0.0f64..=1.0, 36).prop_map(|v| {
        let grid = make_grid(Point::ORIGIN, 6.0, 1.0).unwrap();
        IndicatorMap::new(grid, Array2::from_shape_vec((6, 6), v).unwrap(), Algorithm::Dsma).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn green_is_symmetric(z in point(5.0), x in point(5.0), k0 in 0.1f64..100.0) {
        prop_assume!(z.distance(x) > 1e-6);
        prop_assert_eq!(green2d(z, x, k0).unwrap(), green2d(x, z, k0).unwrap());
    }

    #[test]
    fn j0_is_bounded_and_decays(x in 0.0f64..200.0) {
        let j = bessel_j0(x).unwrap();
        prop_assert!(j.abs() <= 1.0);
        if x >= 5.0 {
            prop_assert!(j.abs() <= (2.0 / (std::f64::consts::PI * x)).sqrt() + 1e-3);
        }
    }

    #[test]
    fn threshold_is_idempotent(m in map_strategy(), kappa in 0.0f64..=1.0) {
        let once = threshold_map(&m, kappa).unwrap();
        prop_assert_eq!(threshold_map(&once, kappa).unwrap(), once);
    }

    #[test]
    fn jaccard_is_a_percentage_and_scale_free(m in map_strategy(), e in map_strategy(), kappa in 0.0f64..=1.0, s in 0.01f64..100.0) {
        let mut exact = e.clone();
        exact.values.mapv_inplace(|v| if v > 0.5 { 1.0 } else { 0.0 });
        let j = jaccard(&m, &exact, kappa).unwrap();
        prop_assert!((0.0..=100.0).contains(&j));
        let mut scaled = exact.clone();
        scaled.values.mapv_inplace(|v| v * s);
        prop_assert_eq!(jaccard(&m, &scaled, kappa).unwrap(), j);
    }

    #[test]
    fn fresnel_write_parse_round_trip(rows in proptest::collection::vec(
        (1usize..40, 1usize..50, -1e3f64..1e3, -1e3f64..1e3, -1e3f64..1e3, -1e3f64..1e3), 1..20)) {
        let records: Vec<FresnelRecord> = rows
            .iter()
            .map(|&(t, r, a, b, c, d)| FresnelRecord {
                transmitter: t,
                receiver: r,
                frequency_ghz: 2.0,
                total: Complex::new(a, b),
                incident: Complex::new(c, d),
            })
            .collect();
        let text = write_fresnel(&records);
        let back = parse_fresnel(&text, &FresnelSchema::default(), 2.0).unwrap();
        prop_assert_eq!(&back.records, &records);
        prop_assert_eq!(write_fresnel(&back.records), text);
    }

    #[test]
    fn msr_csv_round_trip(values in proptest::collection::vec((-1e6f64..1e6, -1e6f64..1e6, any::<bool>()), 12)) {
        let v = Array2::from_shape_fn((4, 3), |(i, j)| Complex::new(values[i * 3 + j].0, values[i * 3 + j].1));
        let m = Array2::from_shape_fn((4, 3), |(i, j)| values[i * 3 + j].2);
        let k = MsrMatrix::new(v, m, common::sensors_n(4), common::directions(3), Provenance::External).unwrap();
        prop_assert_eq!(read_msr_csv(&write_msr_csv(&k)).unwrap(), k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn normalized_maps_live_in_unit_interval(r in point(0.5), l in 1usize..6, re in -5.0f64..5.0, im in -5.0f64..5.0) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let bg = common::background();
        let s = Scene::new(bg, vec![Inhomogeneity::disk(r, 0.03, 4.0, &bg).unwrap()]).unwrap();
        let k = assemble_msr(&s, &common::sensors(), &common::directions(l)).unwrap();
        let grid = small_grid();
        let maps = [
            dsm_multi(&k, &grid, bg.k0).unwrap(),
            dsma(&k, &grid, bg.k0).unwrap(),
            kirchhoff(&k, &grid, bg.k0, true).unwrap(),
        ];
        let scaled = k.scaled(Complex::new(re, im));
        let again = [
            dsm_multi(&scaled, &grid, bg.k0).unwrap(),
            dsma(&scaled, &grid, bg.k0).unwrap(),
            kirchhoff(&scaled, &grid, bg.k0, true).unwrap(),
        ];
        for (m, n) in maps.iter().zip(&again) {
            prop_assert!(m.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
            prop_assert_eq!(m.max(), 1.0);
            prop_assert!(m.max_abs_diff(n).unwrap() < 1e-12);
        }
        prop_assert!(dsma(&k, &grid, bg.k0).unwrap().max_abs_diff(&maps[2]).unwrap() < 1e-9);
        let exact = exact_map(&s, &grid).unwrap();
        prop_assert!(exact.values.iter().all(|&v| v == 0.0 || v == 1.0));
    }

    #[test]
    fn noise_is_seed_deterministic(seed in any::<u64>(), snr in 0.0f64..40.0) {
        let k = assemble_msr(&common::example1(), &common::sensors(), &common::directions(4)).unwrap();
        let a = add_awgn(&k, snr, seed).unwrap();
        let b = add_awgn(&k, snr, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
