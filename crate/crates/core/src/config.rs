//! Run configuration shared by every command. Absent values take the
//! defaults below; a config round-trips through JSON unchanged.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bandlimited::KernelQuadrature;
use crate::grid::{GeometricGrid, SpectrumShape};
use crate::paley_wiener::DEFAULT_R_MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Transform evaluation path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Direct,
    Fft,
}

impl From<Method> for crate::transform::TransformMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Auto => Self::Auto,
            Method::Direct => Self::Direct,
            Method::Fft => Self::Fft,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub u_min: f64,
    pub u_max: f64,
    pub n: usize,
}

impl Default for GridConfig {
    /// Step `1/8` on `[-512, 512]`, conjugate to the default spectrum shape.
    fn default() -> Self {
        Self {
            u_min: -512.0,
            u_max: 512.0,
            n: 8193,
        }
    }
}

impl GridConfig {
    pub fn grid(&self) -> crate::Result<GeometricGrid> {
        GeometricGrid::new(self.u_min, self.u_max, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectrumConfig {
    pub t_max: f64,
    pub m: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            t_max: 4.0 * PI,
            m: 4097,
        }
    }
}

impl SpectrumConfig {
    pub fn shape(&self) -> crate::Result<SpectrumShape> {
        SpectrumShape::new(self.t_max, self.m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub command: String,
    pub input: Option<PathBuf>,
    pub meta: Option<PathBuf>,
    pub output: Option<PathBuf>,
    /// Sidecar written next to signal outputs.
    pub meta_output: Option<PathBuf>,
    /// Built-in model name (see [`crate::corpus::by_name`]).
    pub model: Option<String>,
    /// Spectral density CSV.
    pub density: Option<PathBuf>,
    /// Evaluation points `x` for pointwise commands.
    pub points: Vec<f64>,
    pub method: Method,
    pub c: f64,
    /// Band edge `T`.
    pub band: f64,
    pub sigma: f64,
    /// Truncation radius `K` of the sampling series.
    pub k_max: usize,
    pub r_max: usize,
    pub grid: GridConfig,
    pub spectrum: SpectrumConfig,
    pub kernel_half_width: f64,
    pub kernel_step: f64,
    pub format: Format,
    pub verbosity: u8,
    pub strict: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let quad = KernelQuadrature::default();
        Self {
            command: String::new(),
            input: None,
            meta: None,
            output: None,
            meta_output: None,
            model: None,
            density: None,
            points: Vec::new(),
            method: Method::Auto,
            c: 0.0,
            band: PI,
            sigma: 1.0,
            k_max: 512,
            r_max: DEFAULT_R_MAX,
            grid: GridConfig::default(),
            spectrum: SpectrumConfig::default(),
            kernel_half_width: quad.half_width,
            kernel_step: quad.step_per_sigma,
            format: Format::Csv,
            verbosity: 0,
            strict: false,
        }
    }
}

impl RunConfig {
    pub fn kernel_quadrature(&self) -> KernelQuadrature {
        KernelQuadrature {
            half_width: self.kernel_half_width,
            step_per_sigma: self.kernel_step,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
