use std::fmt;

use serde::Serialize;

/// Non-fatal numerical warnings attached to results.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// The weighted signal is not negligible at a grid end.
    Truncation { lower: f64, upper: f64 },
    /// Kernel integrand still significant at the window ends.
    KernelWindow { end_ratio: f64 },
    /// Band edge exceeds the sampling Nyquist band `pi * sigma`.
    AliasingExpected { band: f64, nyquist: f64 },
    /// Ratio sequence still moving at the last order.
    Unstable { r: usize, relative_change: f64 },
}

pub(crate) const TRUNCATION_FLOOR: f64 = 1e-12;

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Truncation { lower, upper } => write!(
                f,
                "truncation: |h| = {lower:.3e} at lower end, {upper:.3e} at upper end (floor {TRUNCATION_FLOOR:e})"
            ),
            Diagnostic::KernelWindow { end_ratio } => {
                write!(f, "kernel window: end/peak integrand ratio {end_ratio:.3e}")
            }
            Diagnostic::AliasingExpected { band, nyquist } => {
                write!(f, "aliasing expected: band {band} exceeds pi*sigma = {nyquist}")
            }
            Diagnostic::Unstable { r, relative_change } => write!(
                f,
                "ratio estimate still changing by {:.2}% at r = {r}",
                100.0 * relative_change
            ),
        }
    }
}
