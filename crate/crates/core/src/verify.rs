//! The invariant suite behind `mellin-kit verify`: every property the
//! library promises, checked over the built-in corpus at the reference
//! resolutions. Each check yields one [`CheckRow`].

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bandlimited::{
    exp_reconstruct, exp_reconstruct_with_estimate, exp_sample_model, kernel_apply, lin_c,
    synthesize, BandlimitedModel, KernelQuadrature,
};
use crate::calculus::{
    derivative_spectrum_gap, mellin_derivative, mellin_translate, stirling_coeffs, theta_norm,
};
use crate::config::RunConfig;
use crate::corpus::{self, CorpusModel};
use crate::error::Result;
use crate::function::{AnalyticFunction, EvaluableFunction, FnFunction, PowerSum};
use crate::grid::{GeometricGrid, SpectrumShape};
use crate::io;
use crate::paley_wiener::{
    bernstein_ratio, boundary_decay_probe, estimate_bandwidth, log_uniform_probes,
};
use crate::signal::{SampledSignal, Spectrum};
use crate::transform::{
    mellin_forward, mellin_inverse, plancherel_gap, relative_l2_error, x2c_norm, xc_norm,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckRow {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    fn failed(name: &str, err: impl std::fmt::Display) -> Self {
        Self::new(name, false, format!("error: {err}"))
    }
}

/// Thresholds of the suite.
pub mod limits {
    pub const ROUND_TRIP: f64 = 1e-6;
    pub const PLANCHEREL: f64 = 1e-6;
    pub const REFINEMENT_FACTOR: f64 = 1.5;
    /// Round-trip errors below this count as converged for the refinement check.
    pub const REFINEMENT_FLOOR: f64 = 1e-12;
    pub const DERIVATIVE_GAP: f64 = 1e-5;
    pub const ITERATED_THETA: f64 = 1e-10;
    pub const THETA_NORM_AGREEMENT: f64 = 1e-8;
    pub const KERNEL_DELTA: f64 = 1e-14;
    pub const BAND_CONSISTENCY: f64 = 1e-6;
    pub const BERNSTEIN_SLACK: f64 = 1e-8;
    pub const SHARPNESS: f64 = 0.98;
    pub const BANDWIDTH: f64 = 0.05;
    pub const LIN_SEQUENCE: f64 = 1e-6;
    pub const SCALE_COVARIANCE: f64 = 1e-10;
    pub const DECAY: f64 = 1e-2;
    /// `|log x|` from which probes count as "outer".
    pub const DECAY_REACH: f64 = 14.0;
    pub const KERNEL_VS_SYNTH: f64 = 1e-4;
    /// Off-node reconstruction error of the sampling model at `K = 512`,
    /// relative to the peak of `|f|`.
    pub const SAMPLING_K512: f64 = 2e-3;
    pub const NOISE_FACTOR: f64 = 1.5;
    /// Roundoff allowance added to reported error bounds.
    pub const ROUNDOFF: f64 = 1e-12;
}

/// Off-node evaluation points `log x` for the sampling checks.
pub const TEST_POINTS: [f64; 5] = [0.3, -1.7, 2.45, -4.1, 6.35];

/// Model with band `0.8 pi` (sampled at `sigma = 1`) whose density jumps at
/// the edge, so the truncation error of the sampling series is visible.
pub fn sampling_model() -> Result<BandlimitedModel> {
    corpus::gaussian_edge(0.5, 0.8 * PI)
}

struct Sampled {
    entry: CorpusModel,
    grid: GeometricGrid,
    shape: SpectrumShape,
    signal: SampledSignal,
    spectrum: Spectrum,
}

fn prepare(entry: CorpusModel) -> Result<Sampled> {
    let band = entry.model.band();
    let grid = corpus::reference_grid(band);
    let shape = corpus::reference_shape(band);
    let signal = SampledSignal::sample(grid, entry.model.c(), &entry.model)?;
    let spectrum = mellin_forward(&signal, shape)?;
    Ok(Sampled {
        entry,
        grid,
        shape,
        signal,
        spectrum,
    })
}

/// Worst value over the corpus, with the model it came from.
fn worst<'a>(items: impl IntoIterator<Item = (&'a str, f64)>) -> (String, f64) {
    items
        .into_iter()
        .fold((String::new(), f64::NEG_INFINITY), |acc, (n, v)| {
            if v > acc.1 || v.is_nan() {
                (n.to_string(), v)
            } else {
                acc
            }
        })
}

fn bounded(name: &str, values: Result<Vec<(String, f64)>>, limit: f64) -> CheckRow {
    match values {
        Ok(values) => {
            let (model, value) = worst(values.iter().map(|(n, v)| (n.as_str(), *v)));
            CheckRow::new(
                name,
                value <= limit,
                format!("max {value:.3e} ({model}) <= {limit:e}"),
            )
        }
        Err(e) => CheckRow::failed(name, e),
    }
}

/// Runs every check, calling `on_row` as each one finishes.
type CorpusCheck = Box<dyn Fn(&[Sampled]) -> CheckRow>;

pub fn run_suite(mut on_row: impl FnMut(&CheckRow)) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let mut push = |row: CheckRow, rows: &mut Vec<CheckRow>| {
        on_row(&row);
        rows.push(row);
    };
    let corpus = match corpus::builtin()
        .and_then(|c| c.into_iter().map(prepare).collect::<Result<Vec<_>>>())
    {
        Ok(c) => c,
        Err(e) => {
            push(CheckRow::failed("corpus.build", e), &mut rows);
            return rows;
        }
    };
    let checks: Vec<CorpusCheck> = vec![
        // transform
        Box::new(|_| gamma_half()),
        Box::new(linearity),
        Box::new(forward_bound),
        Box::new(round_trip),
        Box::new(plancherel),
        Box::new(refinement),
        // calculus
        Box::new(|_| stirling_rows()),
        Box::new(|_| iterated_theta()),
        Box::new(|_| eigenfunctions()),
        Box::new(|_| limit_quotient()),
        Box::new(theta_norm_agreement),
        Box::new(derivative_gaps),
        Box::new(|_| analytic_derivative_gap()),
        // bandlimited
        Box::new(|_| kernel_delta()),
        Box::new(|_| kernel_transform()),
        Box::new(band_consistency),
        Box::new(|_| interpolation()),
        Box::new(|_| sampling_convergence()),
        Box::new(|_| oversampling()),
        Box::new(kernel_vs_synthesis),
        Box::new(kernel_vs_sampling),
        // paley_wiener
        Box::new(bernstein),
        Box::new(|_| sharpness()),
        Box::new(bandwidth),
        Box::new(|_| lin_sequences()),
        Box::new(|_| two_band_edge()),
        Box::new(scale_covariance),
        Box::new(root_monotonicity),
        Box::new(boundary_decay),
        // cli
        Box::new(|_| config_round_trip()),
        Box::new(determinism),
    ];
    for check in checks {
        push(check(&corpus), &mut rows);
    }
    rows
}

/// Fixed-width pass/fail table.
pub fn render_table(rows: &[CheckRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for row in rows {
        let status = if row.passed { "pass" } else { "FAIL" };
        let _ = writeln!(out, "{status}  {:width$}  {}", row.name, row.detail);
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", rows.len());
    out
}

// ---- transform ----

fn gamma_half() -> CheckRow {
    const NAME: &str = "transform.gamma-half";
    const GAMMA_HALF: f64 = 1.772_453_850_905_516;
    let run = || -> Result<f64> {
        let f = FnFunction(|x: f64| Complex64::new((-x).exp(), 0.0));
        let signal = SampledSignal::sample(corpus::reference_grid(PI), 0.5, &f)?;
        let spectrum = mellin_forward(&signal, corpus::reference_shape(PI))?;
        let at_zero = spectrum.values()[spectrum.shape().center()];
        Ok((at_zero - GAMMA_HALF).norm() / GAMMA_HALF)
    };
    match run() {
        Ok(err) => CheckRow::new(
            NAME,
            err <= 1e-8,
            format!("relative error {err:.3e} <= 1e-8"),
        ),
        Err(e) => CheckRow::failed(NAME, e),
    }
}

fn linearity(corpus: &[Sampled]) -> CheckRow {
    const NAME: &str = "transform.linearity";
    let run = || -> Result<f64> {
        // two models on a common grid and line
        let (f, g) = (&corpus[1], &corpus[3]);
        let c = f.entry.model.c();
        let g_signal = SampledSignal::sample(f.grid, c, &g.entry.model)?;
        let (a, b) = (Complex64::new(0.7, -1.3), Complex64::new(-2.1, 0.4));
        let combined: Vec<Complex64> = f
            .signal
            .weighted()
            .iter()
            .zip(g_signal.weighted())
            .map(|(x, y)| a * x + b * y)
            .collect();
        let lhs = mellin_forward(&SampledSignal::from_weighted(f.grid, c, combined)?, f.shape)?;
        let g_spec = mellin_forward(&g_signal, f.shape)?;
        let scale = lhs.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(lhs
            .values()
            .iter()
            .zip(f.spectrum.values().iter().zip(g_spec.values()))
            .map(|(l, (x, y))| (l - (a * x + b * y)).norm() / scale)
            .fold(0.0, f64::max))
    };
    match run() {
        Ok(err) => CheckRow::new(
            NAME,
            err <= 1e-13,
            format!("max deviation {err:.3e} of peak <= 1e-13"),
        ),
        Err(e) => CheckRow::failed(NAME, e),
    }
}

fn forward_bound(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .map(|s| {
            let bound = xc_norm(&s.signal);
            let peak = s
                .spectrum
                .values()
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            (s.entry.name.clone(), peak / bound)
        })
        .collect();
    let row = bounded("transform.xc-bound", Ok(values), 1.0 + 1e-12);
    CheckRow {
        detail: row.detail.replace("max", "max |M f| / ||f||_Xc"),
        ..row
    }
}

fn round_trip(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .map(|s| {
            let back = mellin_inverse(&s.spectrum, s.grid)?;
            Ok((s.entry.name.clone(), relative_l2_error(&back, &s.signal)?))
        })
        .collect();
    bounded("transform.round-trip", values, limits::ROUND_TRIP)
}

fn plancherel(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .map(|s| Ok((s.entry.name.clone(), plancherel_gap(&s.signal, s.shape)?)))
        .collect();
    bounded("transform.plancherel", values, limits::PLANCHEREL)
}

/// Round-trip error on a grid with half the step and twice the extent
/// (spectrum refined alike, so the FFT path still applies).
fn refinement(corpus: &[Sampled]) -> CheckRow {
    const NAME: &str = "transform.refinement";
    let run = || -> Result<Vec<(String, f64)>> {
        corpus
            .iter()
            .map(|s| {
                let coarse = relative_l2_error(&mellin_inverse(&s.spectrum, s.grid)?, &s.signal)?;
                let du = s.grid.du() / 2.0;
                let n = 4 * (s.grid.len() - 1) + 1;
                let fine_grid = GeometricGrid::with_step(-du * ((n - 1) / 2) as f64, du, n)?;
                let fine_shape = SpectrumShape::new(s.shape.t_max, 2 * s.shape.m - 1)?;
                let signal = SampledSignal::sample(fine_grid, s.entry.model.c(), &s.entry.model)?;
                let back = mellin_inverse(&mellin_forward(&signal, fine_shape)?, fine_grid)?;
                let fine = relative_l2_error(&back, &signal)?;
                Ok((
                    s.entry.name.clone(),
                    fine / coarse.max(limits::REFINEMENT_FLOOR),
                ))
            })
            .collect()
    };
    let row = bounded(NAME, run(), limits::REFINEMENT_FACTOR);
    CheckRow {
        detail: format!("{} (error ratio fine/coarse)", row.detail),
        ..row
    }
}

// ---- calculus ----

fn stirling_rows() -> CheckRow {
    const NAME: &str = "calculus.stirling-rows";
    let mut ok = true;
    for c in [-1.5, -1.0, 0.0, 0.5, 1.0, 2.25] {
        ok &= stirling_coeffs(2, c) == vec![c * c, 2.0 * c + 1.0, 1.0];
        let r3 = stirling_coeffs(3, c);
        let expected = [c * c * c, 3.0 * c * c + 3.0 * c + 1.0, 3.0 * c + 3.0, 1.0];
        ok &= r3.iter().zip(expected).all(|(a, b)| a == &b);
        let mut power = 1.0;
        for r in 0..=30 {
            let row = stirling_coeffs(r, c);
            ok &= row.len() == r + 1 && row[r] == 1.0 && row[0] == power;
            power *= c;
        }
    }
    CheckRow::new(
        NAME,
        ok,
        "displayed rows r = 2, 3 exact; S(r,0) = c^r, S(r,r) = 1 for r <= 30".into(),
    )
}

/// `Theta_c^r` of random power sums against the eigenvalue formula.
fn iterated_theta() -> CheckRow {
    const NAME: &str = "calculus.iterated-theta";
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let c = rng.gen_range(-1.0..1.0);
        let x: f64 = rng.gen_range(0.2..5.0);
        let terms: Vec<(Complex64, f64)> = (0..rng.gen_range(1..=4))
            .map(|_| {
                (
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    rng.gen_range(-2.0..2.0),
                )
            })
            .collect();
        let f = PowerSum::new(terms.clone());
        for r in 0..=8 {
            let expected: Complex64 = terms
                .iter()
                .map(|&(b, a)| b * (a + c).powi(r as i32) * x.powf(a))
                .sum();
            // cancellation in the Stirling sum scales with the individual terms
            let scale: f64 = terms
                .iter()
                .map(|&(b, a)| (b * x.powf(a)).norm() * term_scale(a, c, r))
                .sum();
            match mellin_derivative(&f, c, r, x) {
                Ok(v) => worst = worst.max((v - expected).norm() / scale.max(f64::MIN_POSITIVE)),
                Err(e) => return CheckRow::failed(NAME, e),
            }
        }
    }
    CheckRow::new(
        NAME,
        worst <= limits::ITERATED_THETA,
        format!("100 random power sums, r <= 8: max relative error {worst:.3e} <= 1e-10"),
    )
}

/// `sum_k |S_c(r, k) a (a-1) ... (a-k+1)|`, the size of the terms summed
/// for `Theta_c^r x^a`.
fn term_scale(a: f64, c: f64, r: usize) -> f64 {
    stirling_coeffs(r, c)
        .iter()
        .enumerate()
        .map(|(k, s)| (s * (0..k).map(|i| a - i as f64).product::<f64>()).abs())
        .sum()
}

fn eigenfunctions() -> CheckRow {
    const NAME: &str = "calculus.eigenfunctions";
    let mut worst = 0.0f64;
    for a in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let f = PowerSum::monomial(a);
        for c in [-1.0, 0.0, 0.5, 1.0] {
            for r in 0..=6 {
                for x in [0.3f64, 1.0, 2.7] {
                    let expected = (a + c).powi(r as i32) * x.powf(a);
                    match mellin_derivative(&f, c, r, x) {
                        Ok(v) => {
                            let scale = term_scale(a, c, r).max(1.0) * x.powf(a);
                            worst = worst.max((v.re - expected).abs().max(v.im.abs()) / scale)
                        }
                        Err(e) => return CheckRow::failed(NAME, e),
                    }
                }
            }
        }
    }
    CheckRow::new(
        NAME,
        worst <= 1e-14,
        format!(
            "Theta_c^r x^a = (a+c)^r x^a, a in -2..2, r <= 6: max error {worst:.3e} of term scale"
        ),
    )
}

/// `(tau_h^c f - f) / (h - 1) -> Theta_c f` with first-order convergence.
fn limit_quotient() -> CheckRow {
    const NAME: &str = "calculus.limit-quotient";
    let (c, x) = (1.0, 1.3f64);
    let f = FnFunction(|x: f64| Complex64::new((-x).exp(), 0.0));
    let theta = (1.0 - x) * (-x).exp();
    let mut errors = Vec::new();
    for k in 3..=6 {
        let h = 1.0 + 10f64.powi(-k);
        let value =
            mellin_translate(&f, h, c).and_then(|t| Ok((t.eval(x)? - f.eval(x)?) / (h - 1.0)));
        match value {
            Ok(v) => errors.push((v - theta).norm()),
            Err(e) => return CheckRow::failed(NAME, e),
        }
    }
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let ok = ratios.iter().all(|r| (5.0..=20.0).contains(r));
    CheckRow::new(
        NAME,
        ok,
        format!(
            "errors {} for h - 1 = 1e-3..1e-6; successive ratios {}",
            errors
                .iter()
                .map(|e| format!("{e:.2e}"))
                .collect::<Vec<_>>()
                .join(" "),
            ratios
                .iter()
                .map(|r| format!("{r:.2}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    )
}

fn theta_norm_agreement(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .map(|s| {
            let spectral = theta_norm(&s.entry.model, 0);
            let sampled = x2c_norm(&s.signal);
            Ok((s.entry.name.clone(), (spectral - sampled).abs() / sampled))
        })
        .collect();
    bounded(
        "calculus.theta-norm-vs-x2c",
        values,
        limits::THETA_NORM_AGREEMENT,
    )
}

fn derivative_gaps(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .flat_map(|s| {
            (1..=3).map(move |r| {
                let gap =
                    derivative_spectrum_gap(&s.entry.model, s.entry.model.c(), r, s.grid, s.shape)?;
                Ok((format!("{} r={r}", s.entry.name), gap))
            })
        })
        .collect();
    bounded(
        "calculus.derivative-spectrum",
        values,
        limits::DERIVATIVE_GAP,
    )
}

/// `f = e^{-x}` with analytic derivatives, `c = 1`, `r = 1`.
fn analytic_derivative_gap() -> CheckRow {
    let f = AnalyticFunction(|x: f64, k: usize| {
        Complex64::new(
            if k.is_multiple_of(2) { 1.0 } else { -1.0 } * (-x).exp(),
            0.0,
        )
    });
    let gap = derivative_spectrum_gap(
        &f,
        1.0,
        1,
        corpus::reference_grid(PI),
        corpus::reference_shape(PI),
    );
    bounded(
        "calculus.derivative-spectrum-exp",
        gap.map(|g| vec![("e^-x".to_string(), g)]),
        limits::DERIVATIVE_GAP,
    )
}

// ---- bandlimited ----

fn kernel_delta() -> CheckRow {
    const NAME: &str = "bandlimited.kernel-delta";
    let mut worst = 0.0f64;
    let mut at_one = true;
    for c in [-1.0, 0.0, 0.5, 1.0] {
        at_one &= lin_c(c, 1.0) == Ok(1.0);
        for m in (-100i32..=100).filter(|&m| m != 0) {
            match lin_c(c, (m as f64).exp()) {
                Ok(v) => worst = worst.max(v.abs()),
                Err(e) => return CheckRow::failed(NAME, e),
            }
        }
    }
    CheckRow::new(
        NAME,
        at_one && worst <= limits::KERNEL_DELTA,
        format!("lin_c(1) = 1 exactly: {at_one}; max |lin_c(e^m)|, 0 < |m| <= 100: {worst:.3e}"),
    )
}

/// Transform of `lin_c` against the indicator of `[-pi, pi]` on `[-2pi, 2pi]`,
/// as an `L^2` distance relative to the indicator's norm `sqrt(2 pi)`.
///
/// `lin_c` decays like `1/|log x|`, so cutting the grid at `|log x| = U`
/// leaves an `L^2` error of about `0.80 / sqrt(U)` in Gibbs ringing of
/// width `1/U` at `t = +-pi`. The grid is long and coarse (no aliasing
/// below `2 pi` for `du < 2/3`), zero-padded so `dt < 1/U` resolves the ringing.
pub fn kernel_transform_error(c: f64) -> Result<(f64, f64)> {
    let reach = 262_144.0;
    let du = 0.5;
    let n = (2.0 * reach / du) as usize + 1;
    let grid = GeometricGrid::with_step(-reach, du, n)?;
    let n_fft = 1usize << 22;
    let dt = 2.0 * PI / (du * n_fft as f64);
    let m = n_fft - 1;
    let shape = SpectrumShape::new(dt * (m / 2) as f64, m)?;
    let signal = SampledSignal::sample(grid, c, &crate::bandlimited::LinKernel::new(c))?;
    let spectrum = mellin_forward(&signal, shape)?;
    let mut sq = 0.0;
    for (k, (t, v)) in spectrum.iter().enumerate() {
        let target = if t.abs() < PI { 1.0 } else { 0.0 };
        sq += shape.trapezoid_weight(k) * dt * (v - target).norm_sqr();
    }
    Ok((sq.sqrt(), (sq / (2.0 * PI)).sqrt()))
}

fn kernel_transform() -> CheckRow {
    const NAME: &str = "bandlimited.kernel-transform";
    match kernel_transform_error(0.5) {
        Ok((abs, rel)) => CheckRow::new(
            NAME,
            rel <= 1e-3,
            format!("|log x| <= 262144: relative L2 distance to indicator {rel:.3e} <= 1e-3 (absolute {abs:.3e})"),
        ),
        Err(e) => CheckRow::failed(NAME, e),
    }
}

fn band_consistency(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .map(|s| {
            let peak = s
                .spectrum
                .values()
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            let deviation = s
                .spectrum
                .iter()
                .map(|(t, v)| (v - s.entry.model.density(t)).norm())
                .fold(0.0, f64::max);
            Ok((s.entry.name.clone(), deviation / peak))
        })
        .collect();
    let row = bounded(
        "bandlimited.band-consistency",
        values,
        limits::BAND_CONSISTENCY,
    );
    CheckRow {
        detail: format!("{} (|M f - F| / peak, zero outside the band)", row.detail),
        ..row
    }
}

fn interpolation() -> CheckRow {
    const NAME: &str = "bandlimited.node-interpolation";
    let run = || -> Result<usize> {
        let mut mismatches = 0;
        for entry in corpus::builtin()?.into_iter().take(3) {
            let sigma = entry.model.band() / PI;
            let set = exp_sample_model(&entry.model, sigma, 64)?;
            for k in -64i64..=64 {
                if exp_reconstruct(&set, set.node(k))? != set.sample(k).expect("in range") {
                    mismatches += 1;
                }
            }
        }
        Ok(mismatches)
    };
    match run() {
        Ok(n) => CheckRow::new(
            NAME,
            n == 0,
            format!("{n} nodes differ from the stored sample"),
        ),
        Err(e) => CheckRow::failed(NAME, e),
    }
}

/// Max off-node error over [`TEST_POINTS`], relative to the peak of `|f|`.
pub fn sampling_error(model: &BandlimitedModel, sigma: f64, k_max: usize) -> Result<f64> {
    let set = exp_sample_model(model, sigma, k_max)?;
    let peak = synthesize(model, 1.0)?.norm();
    let mut worst = 0.0f64;
    for u in TEST_POINTS {
        let x = u.exp();
        worst = worst.max((exp_reconstruct(&set, x)? - synthesize(model, x)?).norm());
    }
    Ok(worst / peak)
}

fn sampling_convergence() -> CheckRow {
    const NAME: &str = "bandlimited.sampling-convergence";
    let run = || -> Result<Vec<f64>> {
        let model = sampling_model()?;
        [64, 128, 256, 512]
            .iter()
            .map(|&k| sampling_error(&model, 1.0, k))
            .collect()
    };
    match run() {
        Ok(errors) => {
            let monotone = errors
                .windows(2)
                .all(|w| w[1] <= limits::NOISE_FACTOR * w[0]);
            let last = errors[errors.len() - 1];
            CheckRow::new(
                NAME,
                monotone && last <= limits::SAMPLING_K512,
                format!(
                    "K = 64..512: {}; K = 512 below {:.0e}",
                    errors
                        .iter()
                        .map(|e| format!("{e:.2e}"))
                        .collect::<Vec<_>>()
                        .join(" "),
                    limits::SAMPLING_K512
                ),
            )
        }
        Err(e) => CheckRow::failed(NAME, e),
    }
}

/// Reconstruction at `sigma' = 1.25 T/pi` is no worse than at `sigma = T/pi`.
fn oversampling() -> CheckRow {
    const NAME: &str = "bandlimited.oversampling";
    let run = || -> Result<Vec<(String, f64, f64)>> {
        let mut models = vec![CorpusModel {
            name: "edge-jump".into(),
            model: sampling_model()?,
        }];
        models.extend(corpus::builtin()?);
        models
            .into_iter()
            .map(|e| {
                let critical = e.model.band() / PI;
                let a = sampling_error(&e.model, critical, 32)?;
                let b = sampling_error(&e.model, 1.25 * critical, 32)?;
                Ok((e.name, a, b))
            })
            .collect()
    };
    match run() {
        Ok(rows) => {
            let bad: Vec<&str> = rows
                .iter()
                .filter(|(_, a, b)| *b > a.max(limits::ROUNDOFF))
                .map(|(n, _, _)| n.as_str())
                .collect();
            let (n, a, b) = &rows[0];
            CheckRow::new(
                NAME,
                bad.is_empty(),
                format!(
                    "K = 32; {n}: {a:.2e} at critical, {b:.2e} oversampled; violations: {bad:?}"
                ),
            )
        }
        Err(e) => CheckRow::failed(NAME, e),
    }
}

/// Sampling rate used for kernel checks: the band sits at `0.8 pi sigma`.
fn kernel_sigma(model: &BandlimitedModel) -> f64 {
    model.band() / (0.8 * PI)
}

fn kernel_vs_synthesis(corpus: &[Sampled]) -> CheckRow {
    let quad = KernelQuadrature::default();
    let values = corpus
        .iter()
        .map(|s| {
            let m = &s.entry.model;
            let x = 0.3f64.exp();
            let k = kernel_apply(m, m.c(), kernel_sigma(m), x, quad)?;
            let f = synthesize(m, x)?;
            Ok((s.entry.name.clone(), (k.value - f).norm() / f.norm()))
        })
        .collect();
    bounded(
        "bandlimited.kernel-vs-synthesis",
        values,
        limits::KERNEL_VS_SYNTH,
    )
}

fn kernel_vs_sampling(corpus: &[Sampled]) -> CheckRow {
    let quad = KernelQuadrature::default();
    let values = corpus
        .iter()
        .map(|s| {
            let m = &s.entry.model;
            let sigma = kernel_sigma(m);
            // samples are stored unweighted; |k / sigma| stays where x^{-c} is finite
            let set = exp_sample_model(m, sigma, 256)?;
            let mut worst = 0.0f64;
            for u in TEST_POINTS {
                let x = u.exp();
                let k = kernel_apply(m, m.c(), sigma, x, quad)?;
                let r = exp_reconstruct_with_estimate(&set, x)?;
                let allowed =
                    k.tail_bound + r.tail_estimate + limits::ROUNDOFF * k.value.norm().max(1.0);
                worst = worst.max((k.value - r.value).norm() / allowed);
            }
            Ok((s.entry.name.clone(), worst))
        })
        .collect();
    let row = bounded("bandlimited.kernel-vs-sampling", values, 1.0);
    CheckRow {
        detail: format!("{} (difference / summed error bounds)", row.detail),
        ..row
    }
}

// ---- paley_wiener ----

fn bernstein(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .map(|s| {
            let worst = (0..=30)
                .map(|r| bernstein_ratio(&s.entry.model, r))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok((s.entry.name.clone(), worst))
        })
        .collect();
    bounded(
        "paley-wiener.bernstein",
        values,
        1.0 + limits::BERNSTEIN_SLACK,
    )
}

fn sharpness() -> CheckRow {
    const NAME: &str = "paley-wiener.sharpness";
    let band = 1.0;
    match corpus::edge_concentrated(0.0, band, 1e-3 * band).and_then(|m| bernstein_ratio(&m, 20)) {
        Ok(ratio) => CheckRow::new(
            NAME,
            ratio >= limits::SHARPNESS,
            format!("F on [T - 1e-3 T, T], r = 20: ratio {ratio:.6} >= 0.98"),
        ),
        Err(e) => CheckRow::failed(NAME, e),
    }
}

fn bandwidth(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .map(|s| {
            let est = estimate_bandwidth(&s.entry.model, 30)?;
            let band = s.entry.model.band();
            Ok((s.entry.name.clone(), (est.t_hat - band).abs() / band))
        })
        .collect();
    bounded("paley-wiener.bandwidth", values, limits::BANDWIDTH)
}

fn lin_sequences() -> CheckRow {
    const NAME: &str = "paley-wiener.lin-sequences";
    let run = || -> Result<f64> {
        let est = estimate_bandwidth(&corpus::lin(0.0)?, 30)?;
        Ok(est
            .per_order
            .iter()
            .map(|o| {
                let r = o.r as f64;
                let root = PI * (2.0 * r + 1.0).powf(-1.0 / (2.0 * r));
                let ratio = PI * ((2.0 * r + 1.0) / (2.0 * r + 3.0)).sqrt();
                ((o.root - root).abs() / root).max((o.ratio - ratio).abs() / ratio)
            })
            .fold(0.0, f64::max))
    };
    match run() {
        Ok(err) => CheckRow::new(
            NAME,
            err <= limits::LIN_SEQUENCE,
            format!("lin_0 closed forms: max relative error {err:.3e}"),
        ),
        Err(e) => CheckRow::failed(NAME, e),
    }
}

fn two_band_edge() -> CheckRow {
    const NAME: &str = "paley-wiener.support-edge";
    match corpus::two_bands(0.0).and_then(|m| estimate_bandwidth(&m, 30)) {
        Ok(est) => {
            let err = (est.t_hat - 2.0).abs() / 2.0;
            CheckRow::new(
                NAME,
                err <= limits::BANDWIDTH,
                format!("F on [-2,-1] U [1,2]: T_hat {:.5}", est.t_hat),
            )
        }
        Err(e) => CheckRow::failed(NAME, e),
    }
}

fn scale_covariance(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .map(|s| {
            let m = &s.entry.model;
            let shifted = m.modulated(2.3);
            let a = estimate_bandwidth(m, 30)?;
            let b = estimate_bandwidth(&shifted, 30)?;
            let worst = a
                .per_order
                .iter()
                .zip(&b.per_order)
                .map(|(x, y)| {
                    ((x.root - y.root).abs() / x.root).max((x.ratio - y.ratio).abs() / x.ratio)
                })
                .fold(0.0, f64::max);
            Ok((s.entry.name.clone(), worst))
        })
        .collect();
    bounded(
        "paley-wiener.scale-covariance",
        values,
        limits::SCALE_COVARIANCE,
    )
}

/// The root sequence of a unit-norm model never decreases.
fn root_monotonicity(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .map(|s| {
            let est = estimate_bandwidth(&s.entry.model, 30)?;
            let drop = est
                .per_order
                .windows(2)
                .map(|w| (w[0].root - w[1].root) / w[0].root)
                .fold(f64::NEG_INFINITY, f64::max);
            Ok((s.entry.name.clone(), drop))
        })
        .collect();
    let row = bounded("paley-wiener.root-monotone", values, 1e-12);
    CheckRow {
        detail: format!("{} (largest relative drop)", row.detail),
        ..row
    }
}

/// Probes on `|log x| <= 20`.
pub fn decay_probes() -> Vec<f64> {
    log_uniform_probes(20.0, 161)
}

/// `max_{|log x| >= 14} |probe| / max |probe|` for `k = 0, 1, 2`.
pub fn decay_ratios(model: &BandlimitedModel) -> Result<[f64; 3]> {
    let probes = decay_probes();
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let values = boundary_decay_probe(model, k, &probes)?;
        let peak = values.iter().copied().fold(0.0, f64::max);
        let outer = probes
            .iter()
            .zip(&values)
            .filter(|(x, _)| x.ln().abs() >= limits::DECAY_REACH - 1e-9)
            .map(|(_, v)| *v)
            .fold(0.0, f64::max);
        *slot = outer / peak;
    }
    Ok(out)
}

fn boundary_decay(corpus: &[Sampled]) -> CheckRow {
    let values = corpus
        .iter()
        .flat_map(|s| match decay_ratios(&s.entry.model) {
            Ok(r) => (0..3)
                .map(|k| Ok((format!("{} k={k}", s.entry.name), r[k])))
                .collect::<Vec<_>>(),
            Err(e) => vec![Err(e)],
        })
        .collect();
    bounded("paley-wiener.boundary-decay", values, limits::DECAY)
}

// ---- cli ----

fn config_round_trip() -> CheckRow {
    const NAME: &str = "cli.config-round-trip";
    let config = RunConfig {
        command: "transform".into(),
        c: -1.0 / 3.0,
        sigma: 1.1,
        ..RunConfig::default()
    };
    let ok = RunConfig::from_json(&config.to_json())
        .map(|c| c == config)
        .unwrap_or(false)
        && RunConfig::from_json("{}")
            .map(|c| c == RunConfig::default())
            .unwrap_or(false);
    CheckRow::new(
        NAME,
        ok,
        "defaults fill absent fields; JSON round trip is lossless".into(),
    )
}

/// Independent recomputations serialize to identical bytes, and every
/// written number parses back to the same `f64`.
fn determinism(corpus: &[Sampled]) -> CheckRow {
    const NAME: &str = "cli.determinism";
    let s = &corpus[0];
    let run = || -> Result<bool> {
        let again = mellin_forward(
            &SampledSignal::sample(s.grid, s.entry.model.c(), &s.entry.model)?,
            s.shape,
        )?;
        let same = io::spectrum_csv(&again) == io::spectrum_csv(&s.spectrum);
        let exact = [
            PI,
            -1.0 / 3.0,
            1e-300,
            6.02e23,
            f64::MIN_POSITIVE,
            0.1 + 0.2,
        ]
        .iter()
        .all(|&v| io::fmt_num(v).parse::<f64>() == Ok(v));
        Ok(same && exact)
    };
    match run() {
        Ok(ok) => CheckRow::new(
            NAME,
            ok,
            "byte-identical outputs; numbers round-trip at 17 digits".into(),
        ),
        Err(e) => CheckRow::failed(NAME, e),
    }
}
