//! Mellin-transform analysis on the positive half-line.
//!
//! Signals live on log-uniform grids and every integral is a trapezoid (or
//! Gauss-Legendre) sum after the substitution `u = log x`, under which the
//! Mellin transform on the line `c + it` becomes a Fourier transform of
//! `h(u) = e^{cu} f(e^u)`.

pub mod bandlimited;
pub mod calculus;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod diagnostics;
pub mod error;
pub mod function;
pub mod grid;
pub mod io;
pub mod paley_wiener;
pub mod quadrature;
pub mod signal;
pub mod transform;
pub mod verify;

pub use num_complex::Complex64;

pub use bandlimited::{
    exp_reconstruct, exp_reconstruct_with_estimate, exp_sample, exp_sample_model, kernel_apply,
    lin_c, lin_c_log, synthesize, BandlimitedModel, ExpSampleSet, KernelQuadrature, KernelResult,
    LinKernel, Reconstruction, SpectralDensity,
};
pub use calculus::{
    derivative_spectrum_gap, mellin_derivative, mellin_translate, stirling_coeffs, theta_norm,
    SpectralSource, StirlingTable,
};
pub use diagnostics::Diagnostic;
pub use error::{MellinError, Result};
pub use function::{log_substitute, EvaluableFunction};
pub use grid::{GeometricGrid, SpectrumShape};
pub use paley_wiener::{
    bernstein_ratio, boundary_decay_probe, estimate_bandwidth, BandwidthEstimate,
};
pub use signal::{SampledSignal, Spectrum};
pub use transform::{mellin_forward, mellin_inverse, plancherel_gap, x2c_norm};
