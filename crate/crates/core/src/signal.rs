use num_complex::Complex64;

use crate::diagnostics::Diagnostic;
use crate::error::{MellinError, Result};
use crate::function::EvaluableFunction;
use crate::grid::{GeometricGrid, SpectrumShape};

fn ensure_finite(values: &[Complex64]) -> Result<()> {
    match values
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        Some(index) => Err(MellinError::NonFinite { index }),
        None => Ok(()),
    }
}

/// Samples of `f` on a [`GeometricGrid`] for a fixed Mellin parameter `c`.
///
/// The weighted values `g(x_j) = x_j^c f(x_j)` are what is stored: they are
/// what every quadrature consumes and they stay in range on grids where `f`
/// itself would overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: GeometricGrid,
    c: f64,
    weighted: Vec<Complex64>,
}

impl SampledSignal {
    /// From plain values `f(x_j)`.
    pub fn from_values(grid: GeometricGrid, c: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(MellinError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        ensure_finite(&values)?;
        let weighted: Vec<Complex64> = values
            .into_iter()
            .enumerate()
            .map(|(j, v)| v * (c * grid.u(j)).exp())
            .collect();
        ensure_finite(&weighted)?;
        Ok(Self { grid, c, weighted })
    }

    /// From weighted values `x_j^c f(x_j)`.
    pub fn from_weighted(grid: GeometricGrid, c: f64, weighted: Vec<Complex64>) -> Result<Self> {
        if weighted.len() != grid.len() {
            return Err(MellinError::LengthMismatch {
                expected: grid.len(),
                got: weighted.len(),
            });
        }
        ensure_finite(&weighted)?;
        Ok(Self { grid, c, weighted })
    }

    /// Samples `f` through its log-domain entry point.
    pub fn sample<F: EvaluableFunction + ?Sized>(
        grid: GeometricGrid,
        c: f64,
        f: &F,
    ) -> Result<Self> {
        let weighted = f.weighted_scaled_derivative_on(&grid, c, 0)?;
        Self::from_weighted(grid, c, weighted)
    }

    pub fn grid(&self) -> &GeometricGrid {
        &self.grid
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn len(&self) -> usize {
        self.weighted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weighted.is_empty()
    }

    /// `x_j^c f(x_j)`, i.e. `h(u_j)` after the log substitution.
    pub fn weighted(&self) -> &[Complex64] {
        &self.weighted
    }

    /// `f(x_j)`. May overflow to infinity on extreme grids.
    pub fn values(&self) -> Vec<Complex64> {
        self.weighted
            .iter()
            .enumerate()
            .map(|(j, g)| g * (-self.c * self.grid.u(j)).exp())
            .collect()
    }

    /// Truncation diagnostic when `|h|` is not negligible at either end.
    pub fn truncation_diagnostic(&self) -> Option<Diagnostic> {
        let lower = self.weighted[0].norm();
        let upper = self.weighted[self.len() - 1].norm();
        let floor = crate::diagnostics::TRUNCATION_FLOOR;
        (lower >= floor || upper >= floor).then_some(Diagnostic::Truncation { lower, upper })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            c: self.c,
            weighted: self.weighted.iter().map(|v| v * factor).collect(),
        }
    }
}

/// Values of a Mellin transform on `t_k`, `k = 0..m`, along `s = c + it`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    c: f64,
    shape: SpectrumShape,
    values: Vec<Complex64>,
    diagnostics: Vec<Diagnostic>,
}

impl Spectrum {
    pub fn new(c: f64, shape: SpectrumShape, values: Vec<Complex64>) -> Result<Self> {
        shape.validate()?;
        if values.len() != shape.m {
            return Err(MellinError::LengthMismatch {
                expected: shape.m,
                got: values.len(),
            });
        }
        ensure_finite(&values)?;
        Ok(Self {
            c,
            shape,
            values,
            diagnostics: Vec::new(),
        })
    }

    /// Samples `density(t)` on the grid described by `shape`.
    pub fn from_fn(
        c: f64,
        shape: SpectrumShape,
        density: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        shape.validate()?;
        let values = (0..shape.m).map(|k| density(shape.t(k))).collect();
        Self::new(c, shape, values)
    }

    pub(crate) fn with_diagnostics(mut self, diagnostics: Vec<Diagnostic>) -> Self {
        self.diagnostics = diagnostics;
        self
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn shape(&self) -> SpectrumShape {
        self.shape
    }

    pub fn t_max(&self) -> f64 {
        self.shape.t_max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t(&self, k: usize) -> f64 {
        self.shape.t(k)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    /// `(t_k, F(t_k))` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| (self.shape.t(k), *v))
    }

    /// Unweighted `L^2` norm over the t-grid (trapezoid).
    pub fn l2_norm(&self) -> f64 {
        let dt = self.shape.dt();
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| self.shape.trapezoid_weight(k) * v.norm_sqr())
            .sum();
        (dt * sum).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_length_mismatch_and_nan() {
        let g = GeometricGrid::new(-1.0, 1.0, 4).unwrap();
        assert!(matches!(
            SampledSignal::from_values(g, 0.0, vec![Complex64::new(1.0, 0.0); 3]),
            Err(MellinError::LengthMismatch { .. })
        ));
        let mut v = vec![Complex64::new(1.0, 0.0); 4];
        v[2].im = f64::NAN;
        assert_eq!(
            SampledSignal::from_values(g, 0.0, v),
            Err(MellinError::NonFinite { index: 2 })
        );
    }

    #[test]
    fn weighting_round_trips() {
        let g = GeometricGrid::new(-3.0, 3.0, 7).unwrap();
        let values: Vec<_> = g.points().map(|x| Complex64::new((-x).exp(), x)).collect();
        let s = SampledSignal::from_values(g, 0.75, values.clone()).unwrap();
        for (a, b) in s.values().iter().zip(&values) {
            assert!((a - b).norm() <= 1e-14 * b.norm());
        }
        assert!(
            (s.weighted()[0].re - (-0.75 * 3.0f64).exp() * (-(-3.0f64).exp()).exp()).abs() < 1e-15
        );
    }

    #[test]
    fn truncation_flagged() {
        let g = GeometricGrid::new(-1.0, 1.0, 5).unwrap();
        let s = SampledSignal::from_weighted(g, 0.0, vec![Complex64::new(1.0, 0.0); 5]).unwrap();
        assert!(s.truncation_diagnostic().is_some());
        let mut w = vec![Complex64::new(1.0, 0.0); 5];
        w[0] = Complex64::new(0.0, 0.0);
        w[4] = Complex64::new(1e-13, 0.0);
        let s = SampledSignal::from_weighted(g, 0.0, w).unwrap();
        assert!(s.truncation_diagnostic().is_none());
    }
}
