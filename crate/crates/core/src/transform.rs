//! Forward and inverse Mellin transforms by log-domain trapezoid sums.
//!
//! With `u = log x` and `h(u) = e^{cu} f(e^u)` the transform on the line
//! `c + it` is the Fourier integral `int h(u) e^{itu} du`, and the inverse is
//! `x^{-c} / (2 pi) int F(t) x^{-it} dt`. Both are evaluated as trapezoid
//! sums. The direct `O(n m)` sum is the reference; when the grids are
//! conjugate (`du * dt * N = 2 pi` for an integer `N`) the same sums are
//! computed exactly by folding modulo `N` and one length-`N` FFT.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{MellinError, Result};
use crate::grid::{GeometricGrid, SpectrumShape};
use crate::signal::{SampledSignal, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransformMethod {
    /// FFT when the grids are conjugate, direct sum otherwise.
    #[default]
    Auto,
    Direct,
    /// Fails with `InvalidSpectrum` if the grids are not conjugate.
    Fft,
}

const CONJUGATE_TOLERANCE: f64 = 1e-9;

/// `N` with `du * dt * N = 2 pi`, if it is an integer (to `1e-9` relative).
pub fn conjugate_length(grid: &GeometricGrid, shape: &SpectrumShape) -> Option<usize> {
    let n = 2.0 * PI / (grid.du() * shape.dt());
    let rounded = n.round();
    if rounded >= 2.0 && ((n - rounded) / rounded).abs() < CONJUGATE_TOLERANCE && rounded < 1e9 {
        Some(rounded as usize)
    } else {
        None
    }
}

fn resolve(
    method: TransformMethod,
    grid: &GeometricGrid,
    shape: &SpectrumShape,
) -> Result<Option<usize>> {
    match method {
        TransformMethod::Direct => Ok(None),
        TransformMethod::Auto => Ok(conjugate_length(grid, shape)),
        TransformMethod::Fft => conjugate_length(grid, shape).map(Some).ok_or_else(|| {
            MellinError::InvalidSpectrum(format!(
                "grids are not conjugate: du * dt * N = 2 pi needs N = {}",
                2.0 * PI / (grid.du() * shape.dt())
            ))
        }),
    }
}

#[inline]
fn cis(phase: f64) -> Complex64 {
    let (s, c) = phase.sin_cos();
    Complex64::new(c, s)
}

pub fn mellin_forward(signal: &SampledSignal, shape: SpectrumShape) -> Result<Spectrum> {
    mellin_forward_with(signal, shape, TransformMethod::Auto)
}

pub fn mellin_forward_with(
    signal: &SampledSignal,
    shape: SpectrumShape,
    method: TransformMethod,
) -> Result<Spectrum> {
    shape.validate()?;
    let grid = *signal.grid();
    let h = signal.weighted();
    let du = grid.du();
    let values = match resolve(method, &grid, &shape)? {
        None => (0..shape.m)
            .into_par_iter()
            .map(|k| {
                let t = shape.t(k);
                let sum: Complex64 = h
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * grid.trapezoid_weight(j) * cis(t * grid.u(j)))
                    .sum();
                sum * du
            })
            .collect(),
        Some(n_fft) => {
            let mut folded = vec![Complex64::new(0.0, 0.0); n_fft];
            for (j, v) in h.iter().enumerate() {
                folded[j % n_fft] += v * grid.trapezoid_weight(j);
            }
            // sum_r a_r e^{+2 pi i q r / N}
            FftPlanner::new()
                .plan_fft_inverse(n_fft)
                .process(&mut folded);
            let dt = shape.dt();
            let center = shape.center() as i64;
            (0..shape.m)
                .map(|k| {
                    let q = k as i64 - center;
                    let bin = q.rem_euclid(n_fft as i64) as usize;
                    folded[bin] * cis(q as f64 * dt * grid.u_min()) * du
                })
                .collect()
        }
    };
    let diagnostics = signal.truncation_diagnostic().into_iter().collect();
    Ok(Spectrum::new(signal.c(), shape, values)?.with_diagnostics(diagnostics))
}

pub fn mellin_inverse(spectrum: &Spectrum, grid: GeometricGrid) -> Result<SampledSignal> {
    mellin_inverse_with(spectrum, grid, TransformMethod::Auto)
}

pub fn mellin_inverse_with(
    spectrum: &Spectrum,
    grid: GeometricGrid,
    method: TransformMethod,
) -> Result<SampledSignal> {
    let shape = spectrum.shape();
    shape.validate()?;
    if spectrum.len() != shape.m {
        return Err(MellinError::LengthMismatch {
            expected: shape.m,
            got: spectrum.len(),
        });
    }
    let dt = shape.dt();
    let norm = dt / (2.0 * PI);
    let values = spectrum.values();
    let weighted: Vec<Complex64> = match resolve(method, &grid, &shape)? {
        None => (0..grid.len())
            .into_par_iter()
            .map(|j| {
                let u = grid.u(j);
                let sum: Complex64 = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * shape.trapezoid_weight(k) * cis(-shape.t(k) * u))
                    .sum();
                sum * norm
            })
            .collect(),
        Some(n_fft) => {
            let mut folded = vec![Complex64::new(0.0, 0.0); n_fft];
            let center = shape.center() as i64;
            for (k, v) in values.iter().enumerate() {
                let q = k as i64 - center;
                let bin = q.rem_euclid(n_fft as i64) as usize;
                folded[bin] += v * shape.trapezoid_weight(k) * cis(-(q as f64) * dt * grid.u_min());
            }
            // sum_r b_r e^{-2 pi i r j / N}
            FftPlanner::new()
                .plan_fft_forward(n_fft)
                .process(&mut folded);
            (0..grid.len()).map(|j| folded[j % n_fft] * norm).collect()
        }
    };
    SampledSignal::from_weighted(grid, spectrum.c(), weighted)
}

/// `(int |f(u)|^2 u^{2c-1} du)^{1/2}`, trapezoid rule in `u = log x`.
pub fn x2c_norm(signal: &SampledSignal) -> f64 {
    let grid = signal.grid();
    let sum: f64 = signal
        .weighted()
        .iter()
        .enumerate()
        .map(|(j, v)| grid.trapezoid_weight(j) * v.norm_sqr())
        .sum();
    (grid.du() * sum).sqrt()
}

/// Discrete `X_c` norm `du * sum |h(u_j)|`, the bound on every forward value.
pub fn xc_norm(signal: &SampledSignal) -> f64 {
    let grid = signal.grid();
    let sum: f64 = signal
        .weighted()
        .iter()
        .enumerate()
        .map(|(j, v)| grid.trapezoid_weight(j) * v.norm())
        .sum();
    grid.du() * sum
}

/// `| ||f|| - ||M f|| / sqrt(2 pi) | / ||f||`.
pub fn plancherel_gap(signal: &SampledSignal, shape: SpectrumShape) -> Result<f64> {
    let norm = x2c_norm(signal);
    if norm == 0.0 {
        return Err(MellinError::ZeroNorm);
    }
    let spectrum = mellin_forward(signal, shape)?;
    Ok((norm - spectrum.l2_norm() / (2.0 * PI).sqrt()).abs() / norm)
}

/// Relative discrete `L^2` distance between two signals on the same grid.
pub fn relative_l2_error(approx: &SampledSignal, reference: &SampledSignal) -> Result<f64> {
    if approx.grid() != reference.grid() {
        return Err(MellinError::InvalidGrid(
            "signals live on different grids".into(),
        ));
    }
    let grid = reference.grid();
    let (mut num, mut den) = (0.0, 0.0);
    for (j, (a, b)) in approx
        .weighted()
        .iter()
        .zip(reference.weighted())
        .enumerate()
    {
        let w = grid.trapezoid_weight(j);
        num += w * (a - b).norm_sqr();
        den += w * b.norm_sqr();
    }
    if den == 0.0 {
        return Err(MellinError::ZeroNorm);
    }
    Ok((num / den).sqrt())
}
