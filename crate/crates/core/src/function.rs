//! Functions on the positive half-line.
//!
//! [`EvaluableFunction`] is the contract every consumer in the crate works
//! against: a value at `x > 0`, optionally ordinary derivatives, and a
//! log-domain entry point `h(u) = e^{cu} f(e^u)` that implementors may
//! override when the product `e^{cu} f(e^u)` is representable but its factors
//! are not (very wide grids).

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{MellinError, Result};
use crate::grid::GeometricGrid;

pub trait EvaluableFunction: Send + Sync {
    fn eval(&self, x: f64) -> Result<Complex64>;

    fn has_derivatives(&self) -> bool {
        false
    }

    /// `f^(k)(x)`. The default only knows `k = 0`.
    fn derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        if k == 0 {
            self.eval(x)
        } else {
            Err(MellinError::DerivativeUnavailable(k))
        }
    }

    /// `x^k f^(k)(x)`.
    fn scaled_derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        Ok(self.derivative(x, k)? * x.powi(k as i32))
    }

    /// `e^{cu} f(e^u)`.
    fn eval_log(&self, u: f64, c: f64) -> Result<Complex64> {
        Ok(self.eval(u.exp())? * (c * u).exp())
    }

    /// `e^{cu} x^k f^(k)(x)` at `x = e^u`.
    fn weighted_scaled_derivative(&self, u: f64, c: f64, k: usize) -> Result<Complex64> {
        Ok(self.scaled_derivative(u.exp(), k)? * (c * u).exp())
    }

    /// [`weighted_scaled_derivative`](Self::weighted_scaled_derivative) at
    /// every grid point; `k = 0` gives the weighted samples `e^{cu} f(e^u)`.
    /// Implementors with a cheaper whole-grid evaluation override this.
    fn weighted_scaled_derivative_on(
        &self,
        grid: &GeometricGrid,
        c: f64,
        k: usize,
    ) -> Result<Vec<Complex64>> {
        (0..grid.len())
            .map(|j| {
                let u = grid.u(j);
                if k == 0 {
                    self.eval_log(u, c)
                } else {
                    self.weighted_scaled_derivative(u, c, k)
                }
            })
            .collect()
    }
}

impl<T: EvaluableFunction + ?Sized> EvaluableFunction for &T {
    fn eval(&self, x: f64) -> Result<Complex64> {
        (**self).eval(x)
    }
    fn has_derivatives(&self) -> bool {
        (**self).has_derivatives()
    }
    fn derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        (**self).derivative(x, k)
    }
    fn scaled_derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        (**self).scaled_derivative(x, k)
    }
    fn eval_log(&self, u: f64, c: f64) -> Result<Complex64> {
        (**self).eval_log(u, c)
    }
    fn weighted_scaled_derivative(&self, u: f64, c: f64, k: usize) -> Result<Complex64> {
        (**self).weighted_scaled_derivative(u, c, k)
    }
    fn weighted_scaled_derivative_on(
        &self,
        grid: &GeometricGrid,
        c: f64,
        k: usize,
    ) -> Result<Vec<Complex64>> {
        (**self).weighted_scaled_derivative_on(grid, c, k)
    }
}

impl<T: EvaluableFunction + ?Sized> EvaluableFunction for Box<T> {
    fn eval(&self, x: f64) -> Result<Complex64> {
        (**self).eval(x)
    }
    fn has_derivatives(&self) -> bool {
        (**self).has_derivatives()
    }
    fn derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        (**self).derivative(x, k)
    }
    fn scaled_derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        (**self).scaled_derivative(x, k)
    }
    fn eval_log(&self, u: f64, c: f64) -> Result<Complex64> {
        (**self).eval_log(u, c)
    }
    fn weighted_scaled_derivative(&self, u: f64, c: f64, k: usize) -> Result<Complex64> {
        (**self).weighted_scaled_derivative(u, c, k)
    }
    fn weighted_scaled_derivative_on(
        &self,
        grid: &GeometricGrid,
        c: f64,
        k: usize,
    ) -> Result<Vec<Complex64>> {
        (**self).weighted_scaled_derivative_on(grid, c, k)
    }
}

impl<T: EvaluableFunction + ?Sized> EvaluableFunction for Arc<T> {
    fn eval(&self, x: f64) -> Result<Complex64> {
        (**self).eval(x)
    }
    fn has_derivatives(&self) -> bool {
        (**self).has_derivatives()
    }
    fn derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        (**self).derivative(x, k)
    }
    fn scaled_derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        (**self).scaled_derivative(x, k)
    }
    fn eval_log(&self, u: f64, c: f64) -> Result<Complex64> {
        (**self).eval_log(u, c)
    }
    fn weighted_scaled_derivative(&self, u: f64, c: f64, k: usize) -> Result<Complex64> {
        (**self).weighted_scaled_derivative(u, c, k)
    }
    fn weighted_scaled_derivative_on(
        &self,
        grid: &GeometricGrid,
        c: f64,
        k: usize,
    ) -> Result<Vec<Complex64>> {
        (**self).weighted_scaled_derivative_on(grid, c, k)
    }
}

/// Value-only function backed by a closure.
pub struct FnFunction<F>(pub F);

impl<F> EvaluableFunction for FnFunction<F>
where
    F: Fn(f64) -> Complex64 + Send + Sync,
{
    fn eval(&self, x: f64) -> Result<Complex64> {
        Ok((self.0)(x))
    }
}

/// Function with analytic derivatives: the closure receives `(x, k)` and
/// returns `f^(k)(x)`.
pub struct AnalyticFunction<F>(pub F);

impl<F> EvaluableFunction for AnalyticFunction<F>
where
    F: Fn(f64, usize) -> Complex64 + Send + Sync,
{
    fn eval(&self, x: f64) -> Result<Complex64> {
        Ok((self.0)(x, 0))
    }
    fn has_derivatives(&self) -> bool {
        true
    }
    fn derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        Ok((self.0)(x, k))
    }
}

/// The zero function.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zero;

impl EvaluableFunction for Zero {
    fn eval(&self, _x: f64) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }
    fn has_derivatives(&self) -> bool {
        true
    }
    fn derivative(&self, _x: f64, _k: usize) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }
    fn eval_log(&self, _u: f64, _c: f64) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }
    fn weighted_scaled_derivative(&self, _u: f64, _c: f64, _k: usize) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }
}

/// Finite sum `sum_i b_i x^{a_i}` with exact derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSum {
    terms: Vec<(Complex64, f64)>,
}

impl PowerSum {
    pub fn new(terms: Vec<(Complex64, f64)>) -> Self {
        Self { terms }
    }

    pub fn monomial(exponent: f64) -> Self {
        Self::new(vec![(Complex64::new(1.0, 0.0), exponent)])
    }

    pub fn terms(&self) -> &[(Complex64, f64)] {
        &self.terms
    }
}

/// `a (a - 1) ... (a - k + 1)`.
pub(crate) fn falling_factorial(a: f64, k: usize) -> f64 {
    (0..k).map(|i| a - i as f64).product()
}

impl EvaluableFunction for PowerSum {
    fn eval(&self, x: f64) -> Result<Complex64> {
        self.derivative(x, 0)
    }
    fn has_derivatives(&self) -> bool {
        true
    }
    fn derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        Ok(self
            .terms
            .iter()
            .map(|&(b, a)| b * falling_factorial(a, k) * x.powf(a - k as f64))
            .sum())
    }
    fn scaled_derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        Ok(self
            .terms
            .iter()
            .map(|&(b, a)| b * falling_factorial(a, k) * x.powf(a))
            .sum())
    }
    fn eval_log(&self, u: f64, c: f64) -> Result<Complex64> {
        self.weighted_scaled_derivative(u, c, 0)
    }
    fn weighted_scaled_derivative(&self, u: f64, c: f64, k: usize) -> Result<Complex64> {
        Ok(self
            .terms
            .iter()
            .map(|&(b, a)| b * falling_factorial(a, k) * ((a + c) * u).exp())
            .sum())
    }
}

/// `h(u) = e^{cu} f(e^u)`, a function on the whole real line.
pub struct LogSubstituted<F> {
    inner: F,
    c: f64,
}

impl<F: EvaluableFunction> LogSubstituted<F> {
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    /// `h(u)`.
    pub fn at(&self, u: f64) -> Result<Complex64> {
        self.inner.eval_log(u, self.c)
    }
}

impl<F: EvaluableFunction> EvaluableFunction for LogSubstituted<F> {
    /// Evaluates `h` at the real abscissa `u` (not restricted to `u > 0`).
    fn eval(&self, u: f64) -> Result<Complex64> {
        self.at(u)
    }
}

pub fn log_substitute<F: EvaluableFunction>(f: F, c: f64) -> LogSubstituted<F> {
    LogSubstituted { inner: f, c }
}

pub(crate) fn check_finite(value: Complex64, x: f64) -> Result<Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(MellinError::Evaluation {
            x,
            reason: format!("non-finite value {value}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_cancels_weight() {
        for &c in &[-1.0, 0.0, 0.5, 2.0] {
            let h = log_substitute(PowerSum::monomial(-c), c);
            for &u in &[-30.0, -1.0, 0.0, 0.7, 40.0] {
                let v = h.at(u).unwrap();
                assert!(
                    (v - Complex64::new(1.0, 0.0)).norm() < 1e-15,
                    "c={c} u={u} v={v}"
                );
            }
        }
    }

    #[test]
    fn zero_stays_zero() {
        let h = log_substitute(Zero, 3.0);
        assert_eq!(h.at(12.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn exponential_at_one() {
        let f = FnFunction(|x: f64| Complex64::new((-x).exp(), 0.0));
        let h = log_substitute(f, 0.0);
        // e^{-e}
        assert!((h.at(1.0).unwrap().re - 0.065_988_035_845_312_53).abs() < 1e-15);
    }

    #[test]
    fn value_only_functions_refuse_derivatives() {
        let f = FnFunction(|x: f64| Complex64::new(x, 0.0));
        assert!(!f.has_derivatives());
        assert_eq!(
            f.derivative(1.0, 1),
            Err(MellinError::DerivativeUnavailable(1))
        );
    }
}
