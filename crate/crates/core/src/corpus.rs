//! Built-in bandlimited models used by `verify`, the examples and the tests.
//!
//! The main family has the profile
//!
//! ```text
//! F(t) = cos^4(pi s / 2) exp(-2 s^2) + 1e-3 (b(s - 0.97) + b(s + 0.97)),   s = t / T,
//! ```
//!
//! where `b` is a Gaussian bump of width `0.004`. The smooth core keeps the
//! signals concentrated near `x = 1` (they are below `1e-2` of their peak
//! for `|log x| >= 14` even at `T = 1`, for `Theta^k`, `k <= 2`), and it
//! vanishes to fourth order at the band edge so the signals decay fast in
//! `log x`. The small bumps put spectral mass right next to the edge, which
//! is what lets the derivative-norm estimator find `T` within a few percent.
//! Every model is scaled to unit `X^2_c` norm.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bandlimited::{BandlimitedModel, SpectralDensity};
use crate::error::Result;
use crate::grid::{GeometricGrid, SpectrumShape};

#[derive(Debug, Clone)]
pub struct CorpusModel {
    pub name: String,
    pub model: BandlimitedModel,
}

const BUMP_AT: f64 = 0.97;
const BUMP_WIDTH: f64 = 0.004;
const BUMP_HEIGHT: f64 = 1e-3;

fn profile(s: f64) -> f64 {
    let bump = |d: f64| (-0.5 * (d / BUMP_WIDTH).powi(2)).exp();
    (0.5 * PI * s).cos().powi(4) * (-2.0 * s * s).exp()
        + BUMP_HEIGHT * (bump(s - BUMP_AT) + bump(s + BUMP_AT))
}

/// Panel breaks around the bumps, in units of `T`.
fn profile_breaks(band: f64) -> Vec<f64> {
    [-8.0, -2.5, 2.5, 8.0]
        .iter()
        .flat_map(|k| [BUMP_AT + k * BUMP_WIDTH, -BUMP_AT - k * BUMP_WIDTH])
        .map(|s| s * band)
        .collect()
}

/// The standard corpus profile on `[-T, T]`, shifted by `shift` in `log x`
/// and tilted by `1 + tilt t/T`.
pub fn smooth_edge_with(c: f64, band: f64, tilt: f64, shift: f64) -> Result<BandlimitedModel> {
    BandlimitedModel::with_breakpoints(
        c,
        band,
        SpectralDensity::callable(move |t| {
            let s = t / band;
            Complex64::from_polar((1.0 + tilt * s) * profile(s), shift * t)
        }),
        &profile_breaks(band),
    )?
    .normalized()
}

pub fn smooth_edge(c: f64, band: f64) -> Result<BandlimitedModel> {
    smooth_edge_with(c, band, 0.0, 0.0)
}

/// Gaussian profile `exp(-6 (t/T)^2)` cut off at `|t| = T`. The jump at the
/// edge makes the signal decay only like `1/|log x|`, so sampling series
/// converge slowly; useful for watching truncation error fall with `K`.
pub fn gaussian_edge(c: f64, band: f64) -> Result<BandlimitedModel> {
    BandlimitedModel::new(
        c,
        band,
        SpectralDensity::callable(move |t| Complex64::new((-6.0 * (t / band).powi(2)).exp(), 0.0)),
    )?
    .normalized()
}

/// The models every corpus-wide check runs over.
pub fn builtin() -> Result<Vec<CorpusModel>> {
    let entry = |name: &str, model| CorpusModel {
        name: name.to_string(),
        model,
    };
    Ok(vec![
        entry("smooth-T1-c0", smooth_edge(0.0, 1.0)?),
        entry("smooth-Tpi-c0.5", smooth_edge(0.5, PI)?),
        entry("smooth-T2pi-c-1", smooth_edge(-1.0, 2.0 * PI)?),
        entry("smooth-Tpi-c1", smooth_edge(1.0, PI)?),
        entry("smooth-T2pi-c0.5", smooth_edge(0.5, 2.0 * PI)?),
        entry("tilted-T1-c1", smooth_edge_with(1.0, 1.0, 0.5, 0.0)?),
        entry("shifted-Tpi-c-1", smooth_edge_with(-1.0, PI, 0.5, 0.7)?),
    ])
}

/// `F = 1` on `[T - eps, T]`: energy at the band edge, where the Bernstein
/// bound is nearly attained.
pub fn edge_concentrated(c: f64, band: f64, eps: f64) -> Result<BandlimitedModel> {
    BandlimitedModel::with_breakpoints(
        c,
        band,
        SpectralDensity::callable(move |t| {
            Complex64::new(if t >= band - eps { 1.0 } else { 0.0 }, 0.0)
        }),
        &[band - eps],
    )
}

/// `F = 1` on `[-2, -1] U [1, 2]`.
pub fn two_bands(c: f64) -> Result<BandlimitedModel> {
    BandlimitedModel::with_breakpoints(
        c,
        2.0,
        SpectralDensity::callable(|t| Complex64::new(if t.abs() >= 1.0 { 1.0 } else { 0.0 }, 0.0)),
        &[-1.0, 1.0],
    )
}

/// `lin_c` as a model: `F = 1` on `[-pi, pi]`.
pub fn lin(c: f64) -> Result<BandlimitedModel> {
    BandlimitedModel::flat(c, PI)
}

/// Model by name, for the command line. `band` is ignored by the fixed-band
/// models (`lin`, `two-bands`).
pub fn by_name(name: &str, c: f64, band: f64) -> Option<Result<BandlimitedModel>> {
    let model = match name {
        "lin" => lin(c),
        "flat" => BandlimitedModel::flat(c, band),
        "two-bands" => two_bands(c),
        "edge-jump" => gaussian_edge(c, band),
        "smooth" => smooth_edge(c, band),
        "tilted" => smooth_edge_with(c, band, 0.5, 0.0),
        "shifted" => smooth_edge_with(c, band, 0.5, 0.7),
        _ => return None,
    };
    Some(model)
}

pub const MODEL_NAMES: &[&str] = &[
    "lin",
    "flat",
    "two-bands",
    "edge-jump",
    "smooth",
    "tilted",
    "shifted",
];

/// Grid points of the reference log grid; `N = 8192` for the FFT path.
pub const REFERENCE_POINTS: usize = 8193;
/// Points of the reference spectrum grid.
pub const REFERENCE_SPECTRUM_POINTS: usize = 4097;

/// Reference log grid for a model of band `T`: step `pi / (8T)`, centred,
/// 8193 points (`|log x| <= 512 pi / T`).
///
/// Both resolutions scale with the band, so every check sees the same
/// discretization in the model's own units.
pub fn reference_grid(band: f64) -> GeometricGrid {
    let du = PI / (8.0 * band);
    GeometricGrid::with_step(
        -du * ((REFERENCE_POINTS - 1) / 2) as f64,
        du,
        REFERENCE_POINTS,
    )
    .expect("valid reference grid")
}

/// `[-4T, 4T]` with 4097 points; conjugate to [`reference_grid`].
pub fn reference_shape(band: f64) -> SpectrumShape {
    SpectrumShape::new(4.0 * band, REFERENCE_SPECTRUM_POINTS).expect("valid reference shape")
}
