//! Mellin translation, the Mellin differential operator `Theta_c` and its
//! powers, and spectral norms of Mellin derivatives.
//!
//! `Theta_c f(x) = x f'(x) + c f(x)`. Powers expand over ordinary derivatives,
//! `Theta_c^r f = sum_k S_c(r, k) x^k f^(k)`, with coefficients generated by
//! `S_c(r + 1, k) = S_c(r, k - 1) + (k + c) S_c(r, k)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{MellinError, Result};
use crate::function::EvaluableFunction;
use crate::grid::{GeometricGrid, SpectrumShape};
use crate::signal::{SampledSignal, Spectrum};
use crate::transform::mellin_forward;

/// Triangular table of `S_c(r, k)`, `0 <= k <= r <= r_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct StirlingTable {
    c: f64,
    rows: Vec<Vec<f64>>,
}

impl StirlingTable {
    pub fn new(c: f64, r_max: usize) -> Self {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(r_max + 1);
        rows.push(vec![1.0]);
        for r in 0..r_max {
            let prev = &rows[r];
            let next: Vec<f64> = (0..=r + 1)
                .map(|k| {
                    let left = if k == 0 { 0.0 } else { prev[k - 1] };
                    let keep = prev.get(k).copied().unwrap_or(0.0);
                    left + (k as f64 + c) * keep
                })
                .collect();
            rows.push(next);
        }
        Self { c, rows }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn r_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S_c(r, 0..=r)`; `None` beyond `r_max`.
    pub fn row(&self, r: usize) -> Option<&[f64]> {
        self.rows.get(r).map(Vec::as_slice)
    }
}

/// `S_c(r, 0..=r)`.
pub fn stirling_coeffs(r: usize, c: f64) -> Vec<f64> {
    StirlingTable::new(c, r).rows.pop().unwrap_or_default()
}

/// `x -> h^c f(h x)`.
pub struct MellinTranslate<F> {
    inner: F,
    h: f64,
    c: f64,
}

pub fn mellin_translate<F: EvaluableFunction>(f: F, h: f64, c: f64) -> Result<MellinTranslate<F>> {
    if !(h.is_finite() && h > 0.0) {
        return Err(MellinError::OutOfRange {
            name: "h",
            value: h,
        });
    }
    Ok(MellinTranslate { inner: f, h, c })
}

impl<F: EvaluableFunction> EvaluableFunction for MellinTranslate<F> {
    fn eval(&self, x: f64) -> Result<Complex64> {
        Ok(self.inner.eval(self.h * x)? * self.h.powf(self.c))
    }

    fn has_derivatives(&self) -> bool {
        self.inner.has_derivatives()
    }

    fn derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        Ok(self.inner.derivative(self.h * x, k)? * self.h.powf(self.c + k as f64))
    }

    fn scaled_derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        Ok(self.inner.scaled_derivative(self.h * x, k)? * self.h.powf(self.c))
    }

    fn eval_log(&self, u: f64, c: f64) -> Result<Complex64> {
        let shift = self.h.ln();
        Ok(self.inner.eval_log(u + shift, c)? * ((self.c - c) * shift).exp())
    }

    fn weighted_scaled_derivative(&self, u: f64, c: f64, k: usize) -> Result<Complex64> {
        let shift = self.h.ln();
        Ok(self.inner.weighted_scaled_derivative(u + shift, c, k)? * ((self.c - c) * shift).exp())
    }
}

/// Step in `u = log x` for the finite-difference fallback.
pub const FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeOptions {
    /// Use finite differences when the function has no analytic derivatives.
    pub allow_fallback: bool,
    pub fd_step: f64,
}

impl Default for DerivativeOptions {
    fn default() -> Self {
        Self {
            allow_fallback: true,
            fd_step: FD_STEP,
        }
    }
}

/// Fornberg weights for the `order`-th derivative at 0 on the given nodes.
fn fornberg_weights(nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Signed Stirling numbers of the first kind, `s(k, 0..=k)`.
fn stirling_first_row(k: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for n in 0..k {
        let mut next = vec![0.0; n + 2];
        for (j, &v) in row.iter().enumerate() {
            next[j + 1] += v;
            next[j] -= n as f64 * v;
        }
        row = next;
    }
    row
}

/// `x^k f^(k)(x)` from fourth-order central differences in `u = log x`:
/// `x^k D^k = sum_j s(k, j) (d/du)^j`.
pub fn fd_scaled_derivative<F: EvaluableFunction + ?Sized>(
    f: &F,
    x: f64,
    k: usize,
    step: f64,
) -> Result<Complex64> {
    if k == 0 {
        return f.eval(x);
    }
    let u = x.ln();
    let half = k.div_ceil(2) + 1;
    let offsets: Vec<f64> = (-(half as i64)..=half as i64).map(|i| i as f64).collect();
    let samples = offsets
        .iter()
        .map(|&o| f.eval((u + o * step).exp()))
        .collect::<Result<Vec<_>>>()?;
    let mut total = Complex64::new(0.0, 0.0);
    for (j, s) in stirling_first_row(k).into_iter().enumerate() {
        if s == 0.0 {
            continue;
        }
        let d = if j == 0 {
            samples[half]
        } else {
            let w = fornberg_weights(&offsets, j);
            let raw: Complex64 = w.iter().zip(&samples).map(|(w, v)| v * *w).sum();
            raw / step.powi(j as i32)
        };
        total += d * s;
    }
    Ok(total)
}

fn scaled_derivative_or_fallback<F: EvaluableFunction + ?Sized>(
    f: &F,
    x: f64,
    k: usize,
    options: DerivativeOptions,
) -> Result<Complex64> {
    if k == 0 {
        f.eval(x)
    } else if f.has_derivatives() {
        f.scaled_derivative(x, k)
    } else if options.allow_fallback {
        fd_scaled_derivative(f, x, k, options.fd_step)
    } else {
        Err(MellinError::DerivativeUnavailable(k))
    }
}

/// `Theta_c^r f(x) = sum_k S_c(r, k) x^k f^(k)(x)`.
pub fn mellin_derivative<F: EvaluableFunction + ?Sized>(
    f: &F,
    c: f64,
    r: usize,
    x: f64,
) -> Result<Complex64> {
    mellin_derivative_with(f, c, r, x, DerivativeOptions::default())
}

pub fn mellin_derivative_with<F: EvaluableFunction + ?Sized>(
    f: &F,
    c: f64,
    r: usize,
    x: f64,
    options: DerivativeOptions,
) -> Result<Complex64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(MellinError::NonPositivePoint(x));
    }
    let row = stirling_coeffs(r, c);
    let mut total = Complex64::new(0.0, 0.0);
    for (k, s) in row.into_iter().enumerate() {
        total += scaled_derivative_or_fallback(f, x, k, options)? * s;
    }
    Ok(total)
}

/// `e^{cu} (Theta_c^r f)(e^u)`, using the log-domain derivative entry point
/// when analytic derivatives exist.
pub fn weighted_mellin_derivative<F: EvaluableFunction + ?Sized>(
    f: &F,
    table: &StirlingTable,
    r: usize,
    u: f64,
    options: DerivativeOptions,
) -> Result<Complex64> {
    let c = table.c();
    let row = table.row(r).ok_or(MellinError::OutOfRange {
        name: "r",
        value: r as f64,
    })?;
    if r == 0 {
        return f.eval_log(u, c);
    }
    if !f.has_derivatives() {
        let x = u.exp();
        return Ok(mellin_derivative_with(f, c, r, x, options)? * (c * u).exp());
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (k, s) in row.iter().enumerate() {
        total += f.weighted_scaled_derivative(u, c, k)? * *s;
    }
    Ok(total)
}

/// Anything whose squared spectral moments `(1/2pi) int t^{2r} |F(t)|^2 dt`
/// can be evaluated by a weighted node sum.
pub trait SpectralSource {
    fn c(&self) -> f64;

    /// `(t_i, w_i, |F(t_i)|^2)` adequate for moments of order `r`.
    fn moment_nodes(&self, r: usize) -> Vec<(f64, f64, f64)>;
}

impl SpectralSource for Spectrum {
    fn c(&self) -> f64 {
        Spectrum::c(self)
    }

    fn moment_nodes(&self, _r: usize) -> Vec<(f64, f64, f64)> {
        let shape = self.shape();
        let dt = shape.dt();
        self.values()
            .iter()
            .enumerate()
            .map(|(k, v)| (shape.t(k), dt * shape.trapezoid_weight(k), v.norm_sqr()))
            .collect()
    }
}

/// Orders above this must use the log-domain accumulation.
pub const DIRECT_MOMENT_MAX_ORDER: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentPath {
    #[default]
    LogDomain,
    Direct,
}

/// `ln ((1/2pi) int t^{2r} |F|^2 dt)`, accumulated as a log-sum-exp.
/// Returns `-inf` for a vanishing moment.
pub fn log_moment<S: SpectralSource + ?Sized>(source: &S, r: usize) -> f64 {
    let logs: Vec<f64> = source
        .moment_nodes(r)
        .into_iter()
        .filter(|&(t, w, p)| w > 0.0 && p > 0.0 && (r == 0 || t != 0.0))
        .map(|(t, w, p)| w.ln() + p.ln() + 2.0 * r as f64 * t.abs().ln())
        .collect();
    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = logs.iter().map(|l| (l - peak).exp()).sum();
    peak + sum.ln() - (2.0 * PI).ln()
}

/// `ln ||Theta_c^r f||_{X^2_c}`.
pub fn log_theta_norm<S: SpectralSource + ?Sized>(source: &S, r: usize) -> f64 {
    0.5 * log_moment(source, r)
}

/// `||Theta_c^r f||_{X^2_c}` from the spectrum, `((1/2pi) int t^{2r} |F|^2)^{1/2}`.
pub fn theta_norm<S: SpectralSource + ?Sized>(source: &S, r: usize) -> f64 {
    log_theta_norm(source, r).exp()
}

pub fn theta_norm_with<S: SpectralSource + ?Sized>(
    source: &S,
    r: usize,
    path: MomentPath,
) -> Result<f64> {
    match path {
        MomentPath::LogDomain => Ok(theta_norm(source, r)),
        MomentPath::Direct => {
            if r > DIRECT_MOMENT_MAX_ORDER {
                return Err(MellinError::MomentOverflow(r));
            }
            let sum: f64 = source
                .moment_nodes(r)
                .into_iter()
                .map(|(t, w, p)| w * p * t.powi(2 * r as i32))
                .sum();
            Ok((sum / (2.0 * PI)).sqrt())
        }
    }
}

/// Relative `L^2` gap between the transform of `Theta_c^r f` and
/// `(-it)^r` times the transform of `f`, both sampled on `grid`.
pub fn derivative_spectrum_gap<F: EvaluableFunction + ?Sized>(
    f: &F,
    c: f64,
    r: usize,
    grid: GeometricGrid,
    shape: SpectrumShape,
) -> Result<f64> {
    let signal = SampledSignal::sample(grid, c, f)?;
    let base = mellin_forward(&signal, shape)?;
    let expected: Vec<Complex64> = base
        .iter()
        .map(|(t, v)| v * Complex64::new(0.0, -t).powu(r as u32))
        .collect();
    let (derived, dt_weights) = if r == 0 {
        (base.values().to_vec(), shape)
    } else {
        let table = StirlingTable::new(c, r);
        let options = DerivativeOptions::default();
        let weighted = if f.has_derivatives() {
            let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
            for (k, s) in table.row(r).expect("row computed").iter().enumerate() {
                for (a, v) in acc
                    .iter_mut()
                    .zip(f.weighted_scaled_derivative_on(&grid, c, k)?)
                {
                    *a += v * *s;
                }
            }
            acc
        } else {
            (0..grid.len())
                .map(|j| weighted_mellin_derivative(f, &table, r, grid.u(j), options))
                .collect::<Result<Vec<_>>>()?
        };
        let theta = SampledSignal::from_weighted(grid, c, weighted)?;
        (mellin_forward(&theta, shape)?.values().to_vec(), shape)
    };
    let (mut num, mut den) = (0.0, 0.0);
    for (k, (a, b)) in derived.iter().zip(&expected).enumerate() {
        let w = dt_weights.trapezoid_weight(k);
        num += w * (a - b).norm_sqr();
        den += w * b.norm_sqr();
    }
    if den == 0.0 {
        return Err(MellinError::ZeroNorm);
    }
    Ok((num / den).sqrt())
}
