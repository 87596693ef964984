use std::f64::consts::{E, PI};

use mellin_kit::bandlimited::sinc;
use mellin_kit::corpus;
use mellin_kit::function::{FnFunction, Zero};
use mellin_kit::paley_wiener::log_uniform_probes;
use mellin_kit::{
    boundary_decay_probe, exp_sample, lin_c, lin_c_log, log_substitute, mellin_inverse,
    mellin_translate, plancherel_gap, synthesize, theta_norm, x2c_norm, BandlimitedModel,
    Complex64, EvaluableFunction, GeometricGrid, MellinError, SampledSignal, Spectrum,
    SpectrumShape,
};

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

#[test]
fn log_substitution_of_exp() {
    let h = log_substitute(FnFunction(|x: f64| real((-x).exp())), 0.0);
    assert!((h.at(1.0).unwrap().re - (-E).exp()).abs() < 1e-16);
    assert!((h.at(1.0).unwrap().re - 0.065_988_035_845_312_54).abs() < 1e-16);
}

#[test]
fn norms_of_reference_signals() {
    let grid = corpus::reference_grid(PI);
    let lin = SampledSignal::from_weighted(
        grid,
        0.0,
        grid.log_points().map(|u| real(lin_c_log(0.0, u))).collect(),
    )
    .unwrap();
    assert!((x2c_norm(&lin) - 1.0).abs() < 1e-3, "{}", x2c_norm(&lin));

    let grid = GeometricGrid::new(-40.0, 5.0, 20001).unwrap();
    let exp = SampledSignal::sample(grid, 0.5, &FnFunction(|x: f64| real((-x).exp()))).unwrap();
    assert!((x2c_norm(&exp) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
}

#[test]
fn inverse_of_indicator_is_lin() {
    for c in [0.0, 0.5, -1.0] {
        let spectrum =
            Spectrum::from_fn(c, SpectrumShape::new(PI, 4097).unwrap(), |_| real(1.0)).unwrap();
        let grid = GeometricGrid::new(-5.0, 5.0, 201).unwrap();
        let signal = mellin_inverse(&spectrum, grid).unwrap();
        for (j, v) in signal.values().iter().enumerate() {
            let want = lin_c(c, grid.x(j)).unwrap();
            assert!(
                (v - want).norm() < 1e-5 * (1.0 + want.abs()),
                "c {c} x {}",
                grid.x(j)
            );
        }
    }
}

#[test]
fn first_theta_norm_of_lin() {
    let lin = corpus::lin(0.0).unwrap();
    assert!((theta_norm(&lin, 1) - PI / 3f64.sqrt()).abs() < 1e-10);
    assert!((theta_norm(&lin, 0) - 1.0).abs() < 1e-12);
}

#[test]
fn flat_band_synthesis() {
    for (c, band) in [(0.0, 1.0), (0.5, 2.0), (-1.0, 4.5)] {
        let model = BandlimitedModel::flat(c, band).unwrap();
        let want = band.sin() / PI * (-c).exp();
        assert!((synthesize(&model, E).unwrap() - want).norm() < 1e-12);
    }
    // x = 1 with T = pi is the kernel's peak
    assert!((synthesize(&corpus::lin(0.7).unwrap(), 1.0).unwrap() - 1.0).norm() < 1e-12);
}

#[test]
fn samples_of_lin_are_a_delta() {
    let set = exp_sample(
        &FnFunction(|x: f64| real(lin_c(0.3, x).unwrap())),
        0.3,
        1.0,
        20,
    )
    .unwrap();
    for k in -20..=20 {
        let want = if k == 0 { 1.0 } else { 0.0 };
        assert!((set.sample(k).unwrap() - want).norm() < 1e-14, "k {k}");
    }
}

#[test]
fn translate_moves_the_support() {
    let chi = FnFunction(|x: f64| real(if (1.0..=E).contains(&x) { 1.0 } else { 0.0 }));
    let c = 0.5;
    let moved = mellin_translate(chi, 2.0, c).unwrap();
    let scale = 2f64.powf(c);
    assert_eq!(moved.eval(0.6).unwrap(), real(scale));
    assert_eq!(moved.eval(E / 2.0 - 1e-9).unwrap(), real(scale));
    assert_eq!(moved.eval(0.45).unwrap(), real(0.0));
    assert_eq!(moved.eval(1.5).unwrap(), real(0.0));
    assert!(matches!(
        mellin_translate(Zero, 0.0, c),
        Err(MellinError::OutOfRange { .. })
    ));
}

#[test]
fn lin_probe_stays_under_its_envelope() {
    let model = corpus::lin(0.0).unwrap();
    let probes = log_uniform_probes(20.0, 81);
    let values = boundary_decay_probe(&model, 0, &probes).unwrap();
    for (x, v) in probes.iter().zip(values) {
        let u = x.ln();
        assert!((v - sinc(u).abs()).abs() < 1e-9, "x {x}");
        if u.abs() > 1e-9 {
            assert!(v <= 1.0 / (PI * u.abs()) + 1e-9);
        }
    }
}

#[test]
fn plancherel_needs_a_nonzero_signal() {
    let grid = GeometricGrid::new(-4.0, 4.0, 65).unwrap();
    let zero = SampledSignal::sample(grid, 0.0, &Zero).unwrap();
    let shape = SpectrumShape::new(2.0, 17).unwrap();
    assert_eq!(plancherel_gap(&zero, shape), Err(MellinError::ZeroNorm));
}
