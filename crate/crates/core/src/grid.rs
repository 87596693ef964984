use serde::{Deserialize, Serialize};

use crate::error::{MellinError, Result};

/// Log-uniform lattice `x_j = exp(u_min + j * du)` on the positive half-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricGrid {
    u_min: f64,
    u_max: f64,
    n: usize,
}

impl GeometricGrid {
    pub fn new(u_min: f64, u_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(MellinError::InvalidGrid(format!(
                "need at least 2 points, got {n}"
            )));
        }
        if !(u_min.is_finite() && u_max.is_finite()) || u_min >= u_max {
            return Err(MellinError::InvalidGrid(format!(
                "log bounds must be finite with u_min < u_max, got [{u_min}, {u_max}]"
            )));
        }
        Ok(Self { u_min, u_max, n })
    }

    /// Grid with a fixed log step, `n` chosen so that `u_max = u_min + (n - 1) * du`.
    pub fn with_step(u_min: f64, du: f64, n: usize) -> Result<Self> {
        if !(du.is_finite() && du > 0.0) {
            return Err(MellinError::InvalidGrid(format!(
                "step must be positive, got {du}"
            )));
        }
        Self::new(u_min, u_min + du * (n as f64 - 1.0), n)
    }

    pub fn u_min(&self) -> f64 {
        self.u_min
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn du(&self) -> f64 {
        (self.u_max - self.u_min) / (self.n - 1) as f64
    }

    #[inline]
    pub fn u(&self, j: usize) -> f64 {
        if j + 1 == self.n {
            self.u_max
        } else {
            self.u_min + j as f64 * self.du()
        }
    }

    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.u(j).exp()
    }

    pub fn log_points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.u(j))
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        self.log_points().map(f64::exp)
    }

    /// Trapezoid weight (without the `du` factor).
    #[inline]
    pub(crate) fn trapezoid_weight(&self, j: usize) -> f64 {
        if j == 0 || j + 1 == self.n {
            0.5
        } else {
            1.0
        }
    }
}

/// Shape of a symmetric frequency grid on the line `s = c + it`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumShape {
    pub t_max: f64,
    pub m: usize,
}

impl SpectrumShape {
    pub fn new(t_max: f64, m: usize) -> Result<Self> {
        let shape = Self { t_max, m };
        shape.validate()?;
        Ok(shape)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(MellinError::InvalidSpectrum(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if self.m < 3 || self.m.is_multiple_of(2) {
            return Err(MellinError::InvalidSpectrum(format!(
                "m must be odd and at least 3, got {}",
                self.m
            )));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.t_max / (self.m - 1) as f64
    }

    /// Index of `t = 0`.
    pub fn center(&self) -> usize {
        (self.m - 1) / 2
    }

    /// `t_k = (k - center) * dt`; exactly symmetric and exactly zero at the center.
    #[inline]
    pub fn t(&self, k: usize) -> f64 {
        let q = k as i64 - self.center() as i64;
        q as f64 * self.dt()
    }

    #[inline]
    pub(crate) fn trapezoid_weight(&self, k: usize) -> f64 {
        if k == 0 || k + 1 == self.m {
            0.5
        } else {
            1.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_grids() {
        assert!(GeometricGrid::new(0.0, 1.0, 1).is_err());
        assert!(GeometricGrid::new(1.0, 1.0, 4).is_err());
        assert!(GeometricGrid::new(2.0, 1.0, 4).is_err());
        assert!(GeometricGrid::new(f64::NAN, 1.0, 4).is_err());
    }

    #[test]
    fn log_spacing_is_uniform() {
        let g = GeometricGrid::new(-26.0, 26.0, 8192).unwrap();
        let du = g.du();
        let mut prev = g.x(0);
        for j in 1..g.len() {
            let x = g.x(j);
            assert!(x > prev);
            prev = x;
            let step = g.u(j) - g.u(j - 1);
            assert!((step - du).abs() <= 8.0 * f64::EPSILON * g.u_min().abs().max(g.u_max().abs()));
        }
        assert_eq!(g.u(g.len() - 1), 26.0);
    }

    #[test]
    fn spectrum_grid_is_symmetric() {
        let s = SpectrumShape::new(4.0 * std::f64::consts::PI, 4097).unwrap();
        assert_eq!(s.t(s.center()), 0.0);
        for k in 0..s.m {
            assert_eq!(s.t(k), -s.t(s.m - 1 - k));
        }
        assert!((s.t(s.m - 1) - s.t_max).abs() < 1e-12);
        assert!(SpectrumShape::new(1.0, 4096).is_err());
        assert!(SpectrumShape::new(0.0, 5).is_err());
    }
}
