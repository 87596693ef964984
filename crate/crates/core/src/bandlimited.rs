//! Mellin-bandlimited signals: the `lin_c` kernel, exact synthesis from a
//! spectral density, exponential sampling and reconstruction, and the
//! reproducing-kernel integral.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::calculus::SpectralSource;
use crate::diagnostics::Diagnostic;
use crate::error::{MellinError, Result};
use crate::function::EvaluableFunction;
use crate::grid::GeometricGrid;
use crate::quadrature::composite_nodes;

/// `sin(pi u)` with exact zeros at the integers.
pub fn sin_pi(u: f64) -> f64 {
    let n = u.round();
    let s = (PI * (u - n)).sin();
    if n.rem_euclid(2.0) == 1.0 {
        -s
    } else {
        s
    }
}

/// Below this `|u|` the sinc uses its Taylor expansion.
pub const SINC_SERIES_CUTOFF: f64 = 1e-6;

/// `sin(pi u) / (pi u)`, equal to 1 at 0.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < SINC_SERIES_CUTOFF {
        let z = (PI * u).powi(2);
        1.0 - z / 6.0 + z * z / 120.0
    } else {
        sin_pi(u) / (PI * u)
    }
}

/// `lin_c(e^u) = e^{-cu} sinc(u)`.
pub fn lin_c_log(c: f64, u: f64) -> f64 {
    if c == 0.0 {
        sinc(u)
    } else {
        (-c * u).exp() * sinc(u)
    }
}

/// `lin_c(x) = x^{-c} sinc(log x)`, with `lin_c(1) = 1`.
pub fn lin_c(c: f64, x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(MellinError::NonPositivePoint(x));
    }
    Ok(lin_c_log(c, x.ln()))
}

/// `x -> lin_c(x^sigma)`; the generator of the sampling series. Its transform
/// on the line `c` is the indicator of `[-pi sigma, pi sigma]` scaled by `1/sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinKernel {
    pub c: f64,
    pub sigma: f64,
}

impl LinKernel {
    pub fn new(c: f64) -> Self {
        Self { c, sigma: 1.0 }
    }

    /// `lin_{c/sigma}(x^sigma) = x^{-c} sinc(sigma log x)`.
    pub fn dilated(c: f64, sigma: f64) -> Self {
        Self { c, sigma }
    }
}

impl EvaluableFunction for LinKernel {
    fn eval(&self, x: f64) -> Result<Complex64> {
        Ok(Complex64::new(
            lin_c(self.c / self.sigma, x.powf(self.sigma))?,
            0.0,
        ))
    }

    fn eval_log(&self, u: f64, c: f64) -> Result<Complex64> {
        Ok(Complex64::new(
            ((c - self.c) * u).exp() * sinc(self.sigma * u),
            0.0,
        ))
    }
}

/// Spectral density `F(t)` on `[-T, T]`.
#[derive(Clone)]
pub enum SpectralDensity {
    Callable(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
    /// Piecewise-linear through `(knots[i], values[i])`, zero outside the knots.
    Sampled {
        knots: Vec<f64>,
        values: Vec<Complex64>,
    },
}

impl fmt::Debug for SpectralDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralDensity::Callable(_) => f.write_str("Callable(..)"),
            SpectralDensity::Sampled { knots, .. } => write!(f, "Sampled({} knots)", knots.len()),
        }
    }
}

impl SpectralDensity {
    pub fn callable(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        SpectralDensity::Callable(Arc::new(f))
    }

    fn eval(&self, t: f64) -> Complex64 {
        match self {
            SpectralDensity::Callable(f) => f(t),
            SpectralDensity::Sampled { knots, values } => {
                let last = knots.len() - 1;
                if t < knots[0] || t > knots[last] {
                    return Complex64::new(0.0, 0.0);
                }
                let i = knots.partition_point(|&k| k <= t).clamp(1, last);
                let (a, b) = (knots[i - 1], knots[i]);
                let w = (t - a) / (b - a);
                values[i - 1] * (1.0 - w) + values[i] * w
            }
        }
    }
}

/// Panel phase budget (radians of `t u` per Gauss panel) before calibration.
const PANEL_PHASE: f64 = 12.0;
const SYNTH_TOLERANCE: f64 = 1e-12;
const LEVELS: usize = 48;

/// Quadrature rule for `(1/2pi) int F(t) m(t) e^{-itu} dt`, valid for `|u| <= 2^level`.
#[derive(Debug)]
struct SynthesisRule {
    nodes: Vec<f64>,
    /// `w_i F(t_i) / (2 pi)`
    weights: Vec<Complex64>,
}

impl SynthesisRule {
    fn build(density: &SpectralDensity, breaks: &[f64], width: f64) -> Self {
        let rule = composite_nodes(breaks, width);
        let nodes = rule.iter().map(|&(t, _)| t).collect();
        let weights = rule
            .iter()
            .map(|&(t, w)| density.eval(t) * (w / (2.0 * PI)))
            .collect();
        Self { nodes, weights }
    }

    fn apply(&self, u: f64, multiplier: &dyn Fn(f64) -> Complex64) -> (Complex64, f64) {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let term = w * multiplier(t);
            scale += term.norm();
            let (s, c) = (t * u).sin_cos();
            sum += term * Complex64::new(c, -s);
        }
        (sum, scale)
    }

    /// [`apply`](Self::apply) at every point of a uniform grid. The phasors
    /// `e^{-itu}` are advanced by multiplication and re-seeded exactly every
    /// [`PHASOR_BLOCK`] points.
    fn apply_grid(
        &self,
        grid: &GeometricGrid,
        multiplier: &dyn Fn(f64) -> Complex64,
    ) -> Vec<Complex64> {
        let du = grid.du();
        let terms: Vec<(f64, Complex64, Complex64)> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| (t, w * multiplier(t), cis(-t * du)))
            .collect();
        let n = grid.len();
        (0..n.div_ceil(PHASOR_BLOCK))
            .into_par_iter()
            .flat_map_iter(|b| {
                let start = b * PHASOR_BLOCK;
                let end = (start + PHASOR_BLOCK).min(n);
                let u0 = grid.u(start);
                let mut acc = vec![Complex64::new(0.0, 0.0); end - start];
                for &(t, a, step) in &terms {
                    let mut z = a * cis(-t * u0);
                    for slot in acc.iter_mut() {
                        *slot += z;
                        z *= step;
                    }
                }
                acc
            })
            .collect()
    }
}

const PHASOR_BLOCK: usize = 64;

#[inline]
fn cis(phase: f64) -> Complex64 {
    let (s, c) = phase.sin_cos();
    Complex64::new(c, s)
}

/// An exactly known Mellin-bandlimited function
/// `f(x) = (x^{-c} / 2pi) int_{-T}^{T} F(t) x^{-it} dt`.
#[derive(Debug, Clone)]
pub struct BandlimitedModel {
    c: f64,
    band: f64,
    density: SpectralDensity,
    breaks: Vec<f64>,
    rules: Arc<[OnceLock<Arc<SynthesisRule>>; LEVELS]>,
}

impl BandlimitedModel {
    pub fn new(c: f64, band: f64, density: SpectralDensity) -> Result<Self> {
        Self::with_breakpoints(c, band, density, &[])
    }

    /// `breakpoints` are interior points where a callable density is not smooth.
    pub fn with_breakpoints(
        c: f64,
        band: f64,
        density: SpectralDensity,
        breakpoints: &[f64],
    ) -> Result<Self> {
        if !c.is_finite() {
            return Err(MellinError::OutOfRange {
                name: "c",
                value: c,
            });
        }
        if !(band.is_finite() && band > 0.0) {
            return Err(MellinError::OutOfRange {
                name: "T",
                value: band,
            });
        }
        let mut breaks = vec![-band, band];
        if let SpectralDensity::Sampled { knots, values } = &density {
            if knots.len() < 2 || knots.len() != values.len() {
                return Err(MellinError::LengthMismatch {
                    expected: knots.len(),
                    got: values.len(),
                });
            }
            if knots.windows(2).any(|w| w[1] <= w[0]) {
                return Err(MellinError::InvalidSpectrum(
                    "density knots must increase".into(),
                ));
            }
            if knots[0] < -band || knots[knots.len() - 1] > band {
                return Err(MellinError::InvalidSpectrum(format!(
                    "density knots must lie inside [-{band}, {band}]"
                )));
            }
            if let Some(index) = values
                .iter()
                .position(|v| !(v.re.is_finite() && v.im.is_finite()))
            {
                return Err(MellinError::NonFinite { index });
            }
            breaks.extend_from_slice(knots);
        }
        breaks.extend(breakpoints.iter().copied().filter(|t| t.abs() < band));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let model = Self {
            c,
            band,
            density,
            breaks,
            rules: Arc::new(std::array::from_fn(|_| OnceLock::new())),
        };
        // probes the density for non-finite values
        let rule = model.rule(0);
        if let Some(index) = rule
            .weights
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(MellinError::NonFinite { index });
        }
        Ok(model)
    }

    /// `F = 1` on `[-T, T]`: `lin_c`-type kernel of band `T`.
    pub fn flat(c: f64, band: f64) -> Result<Self> {
        Self::new(
            c,
            band,
            SpectralDensity::callable(|_| Complex64::new(1.0, 0.0)),
        )
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn band(&self) -> f64 {
        self.band
    }

    pub fn density(&self, t: f64) -> Complex64 {
        if t.abs() > self.band {
            Complex64::new(0.0, 0.0)
        } else {
            self.density.eval(t)
        }
    }

    /// Same function with `F` multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        let density = match &self.density {
            SpectralDensity::Callable(f) => {
                let f = Arc::clone(f);
                SpectralDensity::callable(move |t| f(t) * factor)
            }
            SpectralDensity::Sampled { knots, values } => SpectralDensity::Sampled {
                knots: knots.clone(),
                values: values.iter().map(|v| v * factor).collect(),
            },
        };
        Self {
            c: self.c,
            band: self.band,
            density,
            breaks: self.breaks.clone(),
            rules: Arc::new(std::array::from_fn(|_| OnceLock::new())),
        }
    }

    /// Same model with `F(t)` replaced by `F(t) e^{iat}`, i.e. shifted by `a`
    /// in `log x`.
    pub fn modulated(&self, a: f64) -> Self {
        let this = self.clone();
        let density =
            SpectralDensity::callable(move |t| this.density(t) * Complex64::from_polar(1.0, a * t));
        Self {
            c: self.c,
            band: self.band,
            density,
            breaks: self.breaks.clone(),
            rules: Arc::new(std::array::from_fn(|_| OnceLock::new())),
        }
    }

    /// `||f||_{X^2_c} = ((1/2pi) int |F|^2)^{1/2}`.
    pub fn norm(&self) -> f64 {
        crate::calculus::theta_norm(self, 0)
    }

    /// Rescaled to unit `X^2_c` norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(MellinError::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    fn rule(&self, level: usize) -> Arc<SynthesisRule> {
        let level = level.min(LEVELS - 1);
        Arc::clone(self.rules[level].get_or_init(|| Arc::new(self.calibrate(level))))
    }

    /// Panels for `|u| <= 2^level`, refined until doubling the panel count
    /// moves the value by less than `1e-12` (relative to the integrand's
    /// `L^1` scale) at the hardest abscissae of the level.
    fn calibrate(&self, level: usize) -> SynthesisRule {
        let reach = (level as f64).exp2();
        let span = 2.0 * self.band;
        let mut width = (PANEL_PHASE / reach).min(span / 4.0);
        let probes = [reach, -reach, 0.71 * reach, 0.0];
        let unit = |_t: f64| Complex64::new(1.0, 0.0);
        for _ in 0..8 {
            let coarse = SynthesisRule::build(&self.density, &self.breaks, width);
            let fine = SynthesisRule::build(&self.density, &self.breaks, width / 2.0);
            let converged = probes.iter().all(|&u| {
                let (a, _) = coarse.apply(u, &unit);
                let (b, scale) = fine.apply(u, &unit);
                (a - b).norm() <= SYNTH_TOLERANCE * b.norm().max(scale)
            });
            if converged {
                return coarse;
            }
            width /= 2.0;
        }
        SynthesisRule::build(&self.density, &self.breaks, width)
    }

    fn level_for(u: f64) -> usize {
        let a = u.abs();
        if a <= 1.0 {
            0
        } else {
            a.log2().ceil() as usize
        }
    }

    /// `(1/2pi) int F(t) m(t) e^{-itu} dt`.
    pub fn spectral_integral(&self, u: f64, multiplier: &dyn Fn(f64) -> Complex64) -> Complex64 {
        self.rule(Self::level_for(u)).apply(u, multiplier).0
    }

    /// [`spectral_integral`](Self::spectral_integral) at every grid point.
    pub fn spectral_integral_on(
        &self,
        grid: &GeometricGrid,
        multiplier: &dyn Fn(f64) -> Complex64,
    ) -> Vec<Complex64> {
        let reach = grid.u_min().abs().max(grid.u_max().abs());
        self.rule(Self::level_for(reach))
            .apply_grid(grid, multiplier)
    }

    /// `g(e^u) = e^{cu} f(e^u) = (1/2pi) int F(t) e^{-itu} dt`.
    pub fn weighted_value(&self, u: f64) -> Complex64 {
        self.spectral_integral(u, &|_| Complex64::new(1.0, 0.0))
    }

    /// `x^c Theta_c^k f(x) = (1/2pi) int (-it)^k F(t) e^{-it log x} dt`.
    pub fn weighted_mellin_derivative(&self, u: f64, k: usize) -> Complex64 {
        self.spectral_integral(u, &|t| Complex64::new(0.0, -t).powu(k as u32))
    }

    fn falling(&self, t: f64, k: usize) -> Complex64 {
        let s = Complex64::new(-self.c, -t);
        (0..k).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (s - i as f64))
    }
}

impl EvaluableFunction for BandlimitedModel {
    fn eval(&self, x: f64) -> Result<Complex64> {
        synthesize(self, x)
    }

    fn has_derivatives(&self) -> bool {
        true
    }

    fn derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        Ok(self.scaled_derivative(x, k)? / x.powi(k as i32))
    }

    fn scaled_derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        if !(x.is_finite() && x > 0.0) {
            return Err(MellinError::NonPositivePoint(x));
        }
        let u = x.ln();
        self.weighted_scaled_derivative(u, 0.0, k)
    }

    fn eval_log(&self, u: f64, c: f64) -> Result<Complex64> {
        crate::function::check_finite(self.weighted_value(u) * ((c - self.c) * u).exp(), u.exp())
    }

    fn weighted_scaled_derivative(&self, u: f64, c: f64, k: usize) -> Result<Complex64> {
        if k == 0 {
            return self.eval_log(u, c);
        }
        let value = self.spectral_integral(u, &|t| self.falling(t, k)) * ((c - self.c) * u).exp();
        crate::function::check_finite(value, u.exp())
    }

    fn weighted_scaled_derivative_on(
        &self,
        grid: &GeometricGrid,
        c: f64,
        k: usize,
    ) -> Result<Vec<Complex64>> {
        let values = if k == 0 {
            self.spectral_integral_on(grid, &|_| Complex64::new(1.0, 0.0))
        } else {
            self.spectral_integral_on(grid, &|t| self.falling(t, k))
        };
        values
            .into_iter()
            .enumerate()
            .map(|(j, v)| {
                crate::function::check_finite(v * ((c - self.c) * grid.u(j)).exp(), grid.x(j))
            })
            .collect()
    }
}

impl SpectralSource for BandlimitedModel {
    fn c(&self) -> f64 {
        self.c
    }

    fn moment_nodes(&self, r: usize) -> Vec<(f64, f64, f64)> {
        let width = 2.0 * self.band / (16 + r) as f64;
        composite_nodes(&self.breaks, width)
            .into_iter()
            .map(|(t, w)| (t, w, self.density(t).norm_sqr()))
            .collect()
    }
}

/// `f(x)` of the model by Gauss-Legendre quadrature of the finite integral.
pub fn synthesize(model: &BandlimitedModel, x: f64) -> Result<Complex64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(MellinError::NonPositivePoint(x));
    }
    let u = x.ln();
    crate::function::check_finite(model.weighted_value(u) * (-model.c * u).exp(), x)
}

/// Samples `f(e^{k/sigma})`, `k = -K..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSampleSet {
    c: f64,
    sigma: f64,
    k_max: usize,
    samples: Vec<Complex64>,
    diagnostics: Vec<Diagnostic>,
}

impl ExpSampleSet {
    pub fn new(c: f64, sigma: f64, k_max: usize, samples: Vec<Complex64>) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(MellinError::OutOfRange {
                name: "sigma",
                value: sigma,
            });
        }
        if k_max == 0 {
            return Err(MellinError::OutOfRange {
                name: "K",
                value: 0.0,
            });
        }
        if samples.len() != 2 * k_max + 1 {
            return Err(MellinError::LengthMismatch {
                expected: 2 * k_max + 1,
                got: samples.len(),
            });
        }
        if let Some(index) = samples
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(MellinError::NonFinite { index });
        }
        Ok(Self {
            c,
            sigma,
            k_max,
            samples,
            diagnostics: Vec::new(),
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Ordered `k = -K..=K`.
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn sample(&self, k: i64) -> Option<Complex64> {
        let idx = k + self.k_max as i64;
        (0..self.samples.len() as i64)
            .contains(&idx)
            .then(|| self.samples[idx as usize])
    }

    pub fn node(&self, k: i64) -> f64 {
        (k as f64 / self.sigma).exp()
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }
}

/// Samples an arbitrary function at `e^{k/sigma}`.
pub fn exp_sample<F: EvaluableFunction + ?Sized>(
    f: &F,
    c: f64,
    sigma: f64,
    k_max: usize,
) -> Result<ExpSampleSet> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(MellinError::OutOfRange {
            name: "sigma",
            value: sigma,
        });
    }
    let k = k_max as i64;
    let samples = (-k..=k)
        .map(|k| {
            f.eval_log(k as f64 / sigma, 0.0)
                .and_then(|v| crate::function::check_finite(v, (k as f64 / sigma).exp()))
                .map_err(|e| MellinError::Sample {
                    k,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    ExpSampleSet::new(c, sigma, k_max, samples)
}

/// Samples a model, flagging sub-Nyquist configurations (`T > pi sigma`).
pub fn exp_sample_model(
    model: &BandlimitedModel,
    sigma: f64,
    k_max: usize,
) -> Result<ExpSampleSet> {
    let mut set = exp_sample(model, model.c(), sigma, k_max)?;
    let nyquist = PI * sigma;
    if model.band() > nyquist * (1.0 + 1e-12) {
        set.diagnostics.push(Diagnostic::AliasingExpected {
            band: model.band(),
            nyquist,
        });
    }
    Ok(set)
}

/// Value of the truncated sampling series with an estimate of the dropped tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    pub value: Complex64,
    pub tail_estimate: f64,
    pub k_max: usize,
}

/// `sum_{k=-K}^{K} f(e^{k/sigma}) lin_{c/sigma}(e^{-k} x^sigma)`.
pub fn exp_reconstruct(samples: &ExpSampleSet, x: f64) -> Result<Complex64> {
    Ok(exp_reconstruct_with_estimate(samples, x)?.value)
}

/// Snap to a node when `sigma log x` is within this relative distance of an integer.
const NODE_SNAP: f64 = 1e-12;

pub fn exp_reconstruct_with_estimate(samples: &ExpSampleSet, x: f64) -> Result<Reconstruction> {
    if !(x.is_finite() && x > 0.0) {
        return Err(MellinError::NonPositivePoint(x));
    }
    let (c, sigma) = (samples.c, samples.sigma);
    let u = x.ln();
    let mut s = sigma * u;
    let nearest = s.round();
    if (s - nearest).abs() <= NODE_SNAP * s.abs().max(1.0) {
        s = nearest;
    }
    // f_k lin_{c/sigma}(e^{s - k}) = f_k e^{c (k - s)/sigma} sinc(s - k)
    let term = |k: i64| -> Complex64 {
        let f_k = samples.samples[(k + samples.k_max as i64) as usize];
        let arg = s - k as f64;
        f_k * ((c / sigma) * (-arg)).exp() * sinc(arg)
    };
    let k_max = samples.k_max as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (1..=k_max).rev() {
        acc += term(k) + term(-k);
    }
    acc += term(0);
    let tail_estimate = series_tail_estimate(samples, s) * (-c * u).exp();
    Ok(Reconstruction {
        value: acc,
        tail_estimate,
        k_max: samples.k_max,
    })
}

/// Bound on `sum_{|k| > K} |g_k| / (pi |s - k|)` assuming the weighted
/// samples `g_k = e^{ck/sigma} f_k` keep the `A sigma / |k|` envelope seen
/// over the outer eighth of the stored range.
fn series_tail_estimate(samples: &ExpSampleSet, s: f64) -> f64 {
    let k_max = samples.k_max as i64;
    let (c, sigma) = (samples.c, samples.sigma);
    if s.abs() >= k_max as f64 {
        return f64::INFINITY;
    }
    let outer = (k_max / 8).max(1);
    let envelope = |sign: i64| -> f64 {
        ((k_max - outer + 1)..=k_max)
            .map(|k| {
                let k = sign * k;
                let g = samples.sample(k).unwrap_or_default() * (c * k as f64 / sigma).exp();
                g.norm() * (k.abs() as f64)
            })
            .fold(0.0, f64::max)
    };
    let kf = k_max as f64;
    // int_K^inf dk / (k (k - a))
    let tail_sum = |a: f64| -> f64 {
        if a.abs() < 1e-9 * kf {
            1.0 / kf
        } else {
            (kf / (kf - a)).ln() / a
        }
    };
    (envelope(1) * tail_sum(s) + envelope(-1) * tail_sum(-s)) / PI
}

/// Window and step of the log-domain trapezoid for [`kernel_apply`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuadrature {
    /// Half-width of the window `[log x - W, log x + W]`.
    pub half_width: f64,
    /// Step in `v = log y`, scaled by `1/sigma`.
    pub step_per_sigma: f64,
}

impl Default for KernelQuadrature {
    fn default() -> Self {
        Self {
            half_width: 64.0,
            step_per_sigma: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelResult {
    pub value: Complex64,
    pub tail_bound: f64,
    pub diagnostics: Vec<Diagnostic>,
}

const KERNEL_END_RATIO: f64 = 1e-9;

/// `sigma int_0^inf f(y) lin_{c/sigma}((x/y)^sigma) dy/y`, trapezoid rule in
/// `v = log y` over `[log x - W, log x + W]`.
pub fn kernel_apply<F: EvaluableFunction + ?Sized>(
    f: &F,
    c: f64,
    sigma: f64,
    x: f64,
    quad: KernelQuadrature,
) -> Result<KernelResult> {
    if !(x.is_finite() && x > 0.0) {
        return Err(MellinError::NonPositivePoint(x));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(MellinError::OutOfRange {
            name: "sigma",
            value: sigma,
        });
    }
    if !(quad.half_width > 0.0 && quad.step_per_sigma > 0.0) {
        return Err(MellinError::OutOfRange {
            name: "quadrature",
            value: quad.half_width.min(quad.step_per_sigma),
        });
    }
    let u = x.ln();
    let intervals = (2.0 * quad.half_width * sigma / quad.step_per_sigma)
        .ceil()
        .max(2.0) as usize;
    let dv = 2.0 * quad.half_width / intervals as f64;
    // sigma e^{cv} f(e^v) sinc(sigma (u - v)); the e^{-cu} factor is applied last
    let integrand = (0..=intervals)
        .map(|i| {
            let v = u - quad.half_width + i as f64 * dv;
            Ok(f.eval_log(v, c)? * (sigma * sinc(sigma * (u - v))))
        })
        .collect::<Result<Vec<Complex64>>>()?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, v) in integrand.iter().enumerate() {
        let w = if i == 0 || i == intervals { 0.5 } else { 1.0 };
        sum += v * w;
    }
    let scale = (-c * u).exp();
    let peak = integrand.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let outer = (intervals / 20).max(2);
    let lower = integrand[..outer]
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let upper = integrand[intervals + 1 - outer..]
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let mut diagnostics = Vec::new();
    let end_ratio = if peak > 0.0 {
        lower.max(upper) / peak
    } else {
        0.0
    };
    if end_ratio > KERNEL_END_RATIO {
        diagnostics.push(Diagnostic::KernelWindow { end_ratio });
    }
    Ok(KernelResult {
        value: sum * dv * scale,
        tail_bound: (lower + upper) * quad.half_width * scale,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn sin_pi_exact_at_integers() {
        for n in -1000..=1000 {
            assert_eq!(sin_pi(n as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(1.5) + 1.0).abs() < 1e-16);
        assert!((sin_pi(-0.25) + 0.5f64.sqrt()).abs() < 2e-16);
    }

    #[test]
    fn lin_values() {
        for &c in &[-2.0, 0.0, 0.5, 3.0] {
            assert_eq!(lin_c(c, 1.0).unwrap(), 1.0);
        }
        assert!(lin_c(0.0, std::f64::consts::E).unwrap().abs() < 1e-16);
        // e^{-1/2} * 2/pi
        assert!((lin_c(1.0, 0.5f64.exp()).unwrap() - 0.386_129_410_520_215_6).abs() < 1e-15);
        assert!(lin_c(0.0, 0.0).is_err());
        assert!(lin_c(0.0, -2.0).is_err());
    }

    #[test]
    fn sinc_series_is_continuous_across_cutoff() {
        let below = sinc(SINC_SERIES_CUTOFF * 0.999_999);
        let above = sinc(SINC_SERIES_CUTOFF * 1.000_001);
        assert!((below - above).abs() < 1e-15);
        assert!((sinc(1e-7) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn flat_model_is_lin() {
        let model = BandlimitedModel::flat(0.3, PI).unwrap();
        for &x in &[0.01, 0.5, 1.0, 1.7, 30.0, 1e4] {
            let got = synthesize(&model, x).unwrap();
            let want = lin_c(0.3, x).unwrap();
            assert!((got - c64(want)).norm() < 1e-13, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn flat_model_general_band() {
        let (c, band) = (0.7, 2.3);
        let model = BandlimitedModel::flat(c, band).unwrap();
        let e = std::f64::consts::E;
        let want = (-c).exp() * band.sin() / PI;
        assert!((synthesize(&model, e).unwrap() - c64(want)).norm() < 1e-14);
    }

    #[test]
    fn zero_density() {
        let model =
            BandlimitedModel::new(0.0, 1.0, SpectralDensity::callable(|_| c64(0.0))).unwrap();
        assert_eq!(synthesize(&model, 2.0).unwrap(), c64(0.0));
        assert_eq!(model.normalized().unwrap_err(), MellinError::ZeroNorm);
    }

    #[test]
    fn non_finite_density_rejected() {
        let bad = BandlimitedModel::new(0.0, 1.0, SpectralDensity::callable(|_| c64(f64::NAN)));
        assert!(matches!(bad, Err(MellinError::NonFinite { .. })));
        let bad = BandlimitedModel::new(
            0.0,
            1.0,
            SpectralDensity::Sampled {
                knots: vec![-2.0, 0.0],
                values: vec![c64(1.0); 2],
            },
        );
        assert!(bad.is_err());
    }

    #[test]
    fn sampled_density_interpolates_linearly() {
        let model = BandlimitedModel::new(
            0.0,
            2.0,
            SpectralDensity::Sampled {
                knots: vec![-2.0, 0.0, 2.0],
                values: vec![c64(0.0), c64(1.0), c64(0.0)],
            },
        )
        .unwrap();
        assert_eq!(model.density(1.0), c64(0.5));
        assert_eq!(model.density(-0.5), c64(0.75));
        // triangle: (1/2pi) * 2 * (1 - cos 2u) / u^2 at u = 1
        let got = model.weighted_value(1.0);
        let want = (1.0 - 2.0f64.cos()) / (PI * 1.0 * 2.0) * 2.0 / 2.0;
        assert!((got - c64(want)).norm() < 1e-14, "{got} vs {want}");
    }

    #[test]
    fn sampling_delta_and_interpolation() {
        let (c, sigma) = (0.4, 1.5);
        let generator = LinKernel::dilated(c, sigma);
        let set = exp_sample(&generator, c, sigma, 20).unwrap();
        for k in -20..=20i64 {
            let v = set.sample(k).unwrap();
            if k == 0 {
                assert!((v - c64(1.0)).norm() < 1e-15);
            } else {
                assert!(v.norm() < 1e-15, "k={k} {v}");
            }
        }
        for &x in &[0.2, 0.9, 1.3, 7.0] {
            let got = exp_reconstruct(&set, x).unwrap();
            let want = generator.eval(x).unwrap();
            assert!((got - want).norm() < 1e-13);
        }
    }

    #[test]
    fn reconstruction_at_nodes_is_exact() {
        let model = BandlimitedModel::flat(0.5, 0.8 * PI).unwrap();
        let set = exp_sample_model(&model, 1.0, 32).unwrap();
        assert!(set.diagnostics().is_empty());
        for j in -32..=32i64 {
            let got = exp_reconstruct(&set, set.node(j)).unwrap();
            assert_eq!(got, set.sample(j).unwrap(), "node {j}");
        }
    }

    #[test]
    fn aliasing_flagged() {
        let model = BandlimitedModel::flat(0.0, 4.0).unwrap();
        let set = exp_sample_model(&model, 1.0, 8).unwrap();
        assert!(matches!(
            set.diagnostics()[0],
            Diagnostic::AliasingExpected { .. }
        ));
    }

    #[test]
    fn zero_function_everywhere() {
        let zero = crate::function::Zero;
        let set = exp_sample(&zero, 0.0, 1.0, 4).unwrap();
        assert!(set.samples().iter().all(|v| *v == c64(0.0)));
        let k = kernel_apply(&zero, 0.0, 1.0, 2.0, KernelQuadrature::default()).unwrap();
        assert_eq!(k.value, c64(0.0));
    }

    #[test]
    fn kernel_reproduces_generator() {
        let (c, sigma) = (0.5, 1.0);
        let generator = LinKernel::dilated(c, sigma);
        let quad = KernelQuadrature {
            half_width: 4096.0,
            step_per_sigma: 0.25,
        };
        for &x in &[0.5, 1.0, 2.5] {
            let r = kernel_apply(&generator, c, sigma, x, quad).unwrap();
            let want = generator.eval(x).unwrap();
            assert!(
                (r.value - want).norm() < 1e-3,
                "x={x} {} vs {want}",
                r.value
            );
            assert!((r.value - want).norm() <= r.tail_bound);
        }
    }

    #[test]
    fn invalid_inputs() {
        let set = ExpSampleSet::new(0.0, 1.0, 2, vec![c64(0.0); 4]);
        assert!(set.is_err());
        assert!(ExpSampleSet::new(0.0, -1.0, 1, vec![c64(0.0); 3]).is_err());
        let zero = crate::function::Zero;
        assert!(exp_sample(&zero, 0.0, 0.0, 3).is_err());
    }

    #[test]
    fn grid_synthesis_matches_pointwise() {
        let model = crate::corpus::smooth_edge_with(0.5, 2.0, 0.5, 0.3).unwrap();
        let grid = GeometricGrid::with_step(-300.0, 0.37, 1622).unwrap();
        for k in 0..3 {
            let fast = model.weighted_scaled_derivative_on(&grid, 0.5, k).unwrap();
            let peak = fast.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for j in (0..grid.len()).step_by(7) {
                let slow = model.weighted_scaled_derivative(grid.u(j), 0.5, k).unwrap();
                assert!(
                    (fast[j] - slow).norm() <= 1e-12 * peak,
                    "k={k} j={j} {:e}",
                    (fast[j] - slow).norm() / peak
                );
            }
        }
    }

    #[test]
    fn modulation_shifts_in_log_x() {
        let model = crate::corpus::smooth_edge(0.0, PI).unwrap();
        let shifted = model.modulated(1.5);
        for u in [-2.0, 0.0, 0.7, 3.0] {
            let a = shifted.weighted_value(u);
            let b = model.weighted_value(u - 1.5);
            assert!((a - b).norm() < 1e-13, "u={u}");
        }
    }
}
