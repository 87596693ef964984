use mellin_kit::config::RunConfig;
use mellin_kit::function::PowerSum;
use mellin_kit::io::fmt_num;
use mellin_kit::transform::xc_norm;
use mellin_kit::{
    estimate_bandwidth, exp_reconstruct, lin_c, mellin_derivative, mellin_forward, stirling_coeffs,
    BandlimitedModel, Complex64, ExpSampleSet, GeometricGrid, SampledSignal, SpectrumShape,
};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn signal_values(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex(), n)
}

fn grid() -> GeometricGrid {
    GeometricGrid::new(-6.0, 6.0, 97).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn forward_is_linear(f in signal_values(97), g in signal_values(97), a in complex(), b in complex(), c in -1.0..1.0f64) {
        let shape = SpectrumShape::new(5.0, 41).unwrap();
        let sf = SampledSignal::from_weighted(grid(), c, f.clone()).unwrap();
        let sg = SampledSignal::from_weighted(grid(), c, g.clone()).unwrap();
        let combo: Vec<_> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
        let sc = SampledSignal::from_weighted(grid(), c, combo).unwrap();
        let (mf, mg, mc) = (
            mellin_forward(&sf, shape).unwrap(),
            mellin_forward(&sg, shape).unwrap(),
            mellin_forward(&sc, shape).unwrap(),
        );
        for k in 0..shape.m {
            let want = a * mf.values()[k] + b * mg.values()[k];
            prop_assert!((mc.values()[k] - want).norm() <= 1e-12 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn forward_is_bounded_by_the_xc_norm(f in signal_values(97), c in -2.0..2.0f64, t_max in 0.5..20.0f64) {
        let signal = SampledSignal::from_weighted(grid(), c, f).unwrap();
        let bound = xc_norm(&signal);
        let spectrum = mellin_forward(&signal, SpectrumShape::new(t_max, 33).unwrap()).unwrap();
        for v in spectrum.values() {
            prop_assert!(v.norm() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn stirling_rows_follow_the_recurrence(c in -3.0..3.0f64, r in 0usize..12) {
        let row = stirling_coeffs(r, c);
        let next = stirling_coeffs(r + 1, c);
        prop_assert_eq!(next.len(), r + 2);
        prop_assert_eq!(next[r + 1], 1.0);
        for k in 0..=r + 1 {
            let lower = if k > 0 { row[k - 1] } else { 0.0 };
            let same = if k <= r { (k as f64 + c) * row[k] } else { 0.0 };
            let want = lower + same;
            prop_assert!((next[k] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn powers_are_eigenfunctions(a in -2.0..2.0f64, c in -2.0..2.0f64, r in 0usize..7, x in 0.1..5.0f64) {
        let got = mellin_derivative(&PowerSum::monomial(a), c, r, x).unwrap();
        let want = (a + c).powi(r as i32) * x.powf(a);
        let scale = (a.abs() + 1.0 + c.abs()).powi(r as i32) * x.powf(a);
        prop_assert!((got.re - want).abs() <= 1e-11 * scale && got.im == 0.0);
    }

    #[test]
    fn kernel_vanishes_at_nonzero_integers(c in -2.0..2.0f64, m in -60i32..60) {
        let v = lin_c(c, (m as f64).exp()).unwrap();
        if m == 0 {
            prop_assert_eq!(v, 1.0);
        } else {
            prop_assert!(v.abs() <= 1e-14);
        }
    }

    #[test]
    fn series_interpolates_the_samples(samples in signal_values(17), c in -1.0..1.0f64, sigma in 0.25..4.0f64, j in -8i64..=8) {
        let set = ExpSampleSet::new(c, sigma, 8, samples).unwrap();
        prop_assert_eq!(exp_reconstruct(&set, set.node(j)).unwrap(), set.sample(j).unwrap());
    }

    #[test]
    fn config_round_trips(c in -3.0..3.0f64, band in 0.1..10.0f64, sigma in 0.1..10.0f64, k_max in 1usize..4096, strict: bool) {
        let config = RunConfig { c, band, sigma, k_max, strict, points: vec![c, band], ..RunConfig::default() };
        prop_assert_eq!(RunConfig::from_json(&config.to_json()).unwrap(), config);
    }

    #[test]
    fn numbers_round_trip_through_text(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bandwidth_estimate_ignores_shifts(band in 0.5..8.0f64, shift in -5.0..5.0f64, c in -1.0..1.0f64) {
        let model = BandlimitedModel::flat(c, band).unwrap();
        let base = estimate_bandwidth(&model, 20).unwrap().t_hat;
        let moved = estimate_bandwidth(&model.modulated(shift), 20).unwrap().t_hat;
        prop_assert!((moved - base).abs() <= 1e-10 * base);
        prop_assert!((base - band).abs() <= 0.05 * band);
    }
}
