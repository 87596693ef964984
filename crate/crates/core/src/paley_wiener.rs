//! Bernstein inequality, band-edge estimation from the growth of
//! `||Theta_c^r f||`, and boundary-decay probes.

use serde::{Deserialize, Serialize};

use crate::bandlimited::BandlimitedModel;
use crate::calculus::{log_theta_norm, SpectralSource};
use crate::diagnostics::Diagnostic;
use crate::error::{MellinError, Result};

/// `||Theta_c^r f|| / (T^r ||f||)`, computed in the log domain.
pub fn bernstein_ratio(model: &BandlimitedModel, r: usize) -> Result<f64> {
    let base = log_theta_norm(model, 0);
    if base == f64::NEG_INFINITY {
        return Err(MellinError::ZeroNorm);
    }
    if r == 0 {
        return Ok(1.0);
    }
    Ok((log_theta_norm(model, r) - r as f64 * model.band().ln() - base).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    /// `||Theta^r f||^{1/r}`
    Root,
    /// `||Theta^{r+1} f|| / ||Theta^r f||`
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub r: usize,
    pub root: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthEstimate {
    pub method: EstimateMethod,
    pub t_hat: f64,
    pub per_order: Vec<OrderEstimate>,
    /// First order from which the ratio sequence moves by at most 1% per step.
    pub stabilized_at: Option<usize>,
    pub diagnostics: Vec<Diagnostic>,
}

impl BandwidthEstimate {
    pub fn root(&self, r: usize) -> Option<f64> {
        self.per_order.iter().find(|o| o.r == r).map(|o| o.root)
    }

    pub fn ratio(&self, r: usize) -> Option<f64> {
        self.per_order.iter().find(|o| o.r == r).map(|o| o.ratio)
    }
}

pub const DEFAULT_R_MAX: usize = 30;
const STABILITY: f64 = 0.01;

/// Root and ratio sequences for `r = 1..=r_max`; the estimate is the ratio
/// at `r_max - 1`.
pub fn estimate_bandwidth<S: SpectralSource + ?Sized>(
    source: &S,
    r_max: usize,
) -> Result<BandwidthEstimate> {
    if r_max < 4 {
        return Err(MellinError::OutOfRange {
            name: "r_max",
            value: r_max as f64,
        });
    }
    let logs: Vec<f64> = (0..=r_max + 1).map(|r| log_theta_norm(source, r)).collect();
    if logs[0] == f64::NEG_INFINITY {
        return Err(MellinError::ZeroFunction);
    }
    let per_order: Vec<OrderEstimate> = (1..=r_max)
        .map(|r| OrderEstimate {
            r,
            root: (logs[r] / r as f64).exp(),
            ratio: (logs[r + 1] - logs[r]).exp(),
        })
        .collect();
    let ratio_at = |r: usize| per_order[r - 1].ratio;
    let change = |r: usize| ((ratio_at(r + 1) - ratio_at(r)) / ratio_at(r)).abs();

    let mut stabilized_at = None;
    for r in (1..r_max - 1).rev() {
        if change(r) <= STABILITY {
            stabilized_at = Some(r);
        } else {
            break;
        }
    }
    let mut diagnostics = Vec::new();
    let last_change = change(r_max - 2);
    if last_change > STABILITY {
        diagnostics.push(Diagnostic::Unstable {
            r: r_max - 1,
            relative_change: last_change,
        });
    }
    Ok(BandwidthEstimate {
        method: EstimateMethod::Ratio,
        t_hat: ratio_at(r_max - 1),
        per_order,
        stabilized_at,
        diagnostics,
    })
}

/// Probe sets must reach at least this far on both sides (`1e-6 .. 1e6`).
pub const PROBE_SPAN: f64 = 1e6;

/// `|x^c Theta_c^k f(x)|` at each probe point, from the spectral representation.
pub fn boundary_decay_probe(
    model: &BandlimitedModel,
    k: usize,
    probes: &[f64],
) -> Result<Vec<f64>> {
    if let Some(&bad) = probes.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(MellinError::NonPositivePoint(bad));
    }
    if probes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MellinError::OutOfRange {
            name: "probe order",
            value: f64::NAN,
        });
    }
    let (lo, hi) = match (probes.first(), probes.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => {
            return Err(MellinError::OutOfRange {
                name: "probe count",
                value: 0.0,
            })
        }
    };
    if lo > 1.0 / PROBE_SPAN || hi < PROBE_SPAN {
        return Err(MellinError::OutOfRange {
            name: "probe span",
            value: lo.min(1.0 / hi),
        });
    }
    Ok(probes
        .iter()
        .map(|&x| model.weighted_mellin_derivative(x.ln(), k).norm())
        .collect())
}

/// Probe points `e^{u}` for `u` uniform on `[-reach, reach]`.
pub fn log_uniform_probes(reach: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    (0..count)
        .map(|i| (-reach + 2.0 * reach * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;

    use super::*;
    use crate::bandlimited::SpectralDensity;

    #[test]
    fn ratio_at_zero_order_is_one() {
        let model = BandlimitedModel::flat(0.0, PI).unwrap();
        assert_eq!(bernstein_ratio(&model, 0).unwrap(), 1.0);
        let r1 = bernstein_ratio(&model, 1).unwrap();
        assert!((r1 - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_model_rejected() {
        let zero = BandlimitedModel::new(
            0.0,
            1.0,
            SpectralDensity::callable(|_| Complex64::new(0.0, 0.0)),
        )
        .unwrap();
        assert_eq!(bernstein_ratio(&zero, 3), Err(MellinError::ZeroNorm));
        assert_eq!(
            estimate_bandwidth(&zero, 10).unwrap_err(),
            MellinError::ZeroFunction
        );
    }

    #[test]
    fn lin_sequences_closed_form() {
        let model = BandlimitedModel::flat(0.0, PI).unwrap();
        let est = estimate_bandwidth(&model, 30).unwrap();
        let r10 = est.per_order[9];
        assert!((r10.root - PI * 21f64.powf(-1.0 / 20.0)).abs() < 1e-10);
        assert!((r10.ratio - PI * (21.0f64 / 23.0).sqrt()).abs() < 1e-10);
        assert!((est.t_hat - PI).abs() / PI < 0.02);
        assert!(est.diagnostics.is_empty());
        assert!(est.stabilized_at.is_some());
    }

    #[test]
    fn estimator_needs_enough_orders() {
        let model = BandlimitedModel::flat(0.0, 1.0).unwrap();
        assert!(estimate_bandwidth(&model, 3).is_err());
    }

    #[test]
    fn probe_validation() {
        let model = BandlimitedModel::flat(0.0, PI).unwrap();
        assert!(boundary_decay_probe(&model, 0, &[1e-3, 1.0, 1e3]).is_err());
        assert!(boundary_decay_probe(&model, 0, &[1e-7, 1e7, 1.0]).is_err());
        assert!(boundary_decay_probe(&model, 0, &[-1.0, 1e7]).is_err());
        let probes = log_uniform_probes(20.0, 41);
        let values = boundary_decay_probe(&model, 0, &probes).unwrap();
        assert!((values[20] - 1.0).abs() < 1e-13);
        assert!(values[0] <= 1.0 / (20.0 * PI) + 1e-12);
    }
}
