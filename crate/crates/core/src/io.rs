//! File formats: signal and spectrum CSV, the grid sidecar, exponential
//! sample sets and bandwidth estimates as JSON.
//!
//! Every number is written with 17 significant digits so that files
//! round-trip bit-for-bit and repeated runs are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bandlimited::{ExpSampleSet, SpectralDensity};
use crate::error::MellinError;
use crate::grid::{GeometricGrid, SpectrumShape};
use crate::paley_wiener::{BandwidthEstimate, EstimateMethod, OrderEstimate};
use crate::signal::{SampledSignal, Spectrum};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}, field `{field}`: {message}")]
    Field {
        path: PathBuf,
        line: u64,
        field: String,
        message: String,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Invalid {
        path: PathBuf,
        #[source]
        source: MellinError,
    },
}

pub type IoResult<T> = std::result::Result<T, IoError>;

/// `{:.16e}`: 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn read(path: &Path) -> IoResult<String> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.into(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> IoResult<()> {
    fs::write(path, contents).map_err(|source| IoError::Io {
        path: path.into(),
        source,
    })
}

fn invalid(path: &Path) -> impl Fn(MellinError) -> IoError + '_ {
    move |source| IoError::Invalid {
        path: path.into(),
        source,
    }
}

/// Rows of a three-column complex table with the given first-column name.
fn read_table(path: &Path, first: &str) -> IoResult<Vec<(f64, Complex64)>> {
    let text = read(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let expected = [first, "re", "im"];
    let headers = reader.headers().map_err(|e| IoError::Format {
        path: path.into(),
        message: e.to_string(),
    })?;
    if headers.iter().ne(expected.iter().copied()) {
        return Err(IoError::Field {
            path: path.into(),
            line: 1,
            field: "header".into(),
            message: format!(
                "expected `{}`, found `{}`",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            IoError::Field {
                path: path.into(),
                line,
                field: "row".into(),
                message: e.to_string(),
            }
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut nums = [0.0; 3];
        for (i, name) in expected.iter().enumerate() {
            let raw = record.get(i).unwrap_or("");
            nums[i] = raw.parse::<f64>().map_err(|_| IoError::Field {
                path: path.into(),
                line,
                field: name.to_string(),
                message: format!("`{raw}` is not a number"),
            })?;
            if !nums[i].is_finite() {
                return Err(IoError::Field {
                    path: path.into(),
                    line,
                    field: name.to_string(),
                    message: "value is not finite".into(),
                });
            }
        }
        rows.push((nums[0], Complex64::new(nums[1], nums[2])));
    }
    if rows.is_empty() {
        return Err(IoError::Format {
            path: path.into(),
            message: "no data rows".into(),
        });
    }
    Ok(rows)
}

fn write_table(first: &str, rows: impl Iterator<Item = (f64, Complex64)>) -> String {
    let mut out = format!("{first},re,im\n");
    for (a, v) in rows {
        let _ = writeln!(out, "{},{},{}", fmt_num(a), fmt_num(v.re), fmt_num(v.im));
    }
    out
}

/// Grid sidecar `{"c", "u_min", "u_max", "n"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalMeta {
    pub c: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub n: usize,
}

impl SignalMeta {
    pub fn of(signal: &SampledSignal) -> Self {
        let g = signal.grid();
        Self {
            c: signal.c(),
            u_min: g.u_min(),
            u_max: g.u_max(),
            n: g.len(),
        }
    }

    pub fn grid(&self) -> Result<GeometricGrid, MellinError> {
        GeometricGrid::new(self.u_min, self.u_max, self.n)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> IoResult<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| IoError::Format {
        path: path.into(),
        message: format!("line {}, column {}: {e}", e.line(), e.column()),
    })
}

pub fn read_meta(path: &Path) -> IoResult<SignalMeta> {
    read_json(path)
}

/// Pretty JSON with numbers at 17 significant digits.
fn json_with_fixed_numbers(value: &serde_json::Value) -> String {
    fn go(v: &serde_json::Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent + 1);
        match v {
            serde_json::Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
                (Some(i), _, _) => out.push_str(&i.to_string()),
                (_, Some(u), _) => out.push_str(&u.to_string()),
                (_, _, Some(f)) => out.push_str(&fmt_num(f)),
                _ => out.push_str(&n.to_string()),
            },
            serde_json::Value::Array(items) => {
                if items.iter().all(|i| i.is_number()) {
                    out.push('[');
                    for (k, item) in items.iter().enumerate() {
                        if k > 0 {
                            out.push_str(", ");
                        }
                        go(item, indent, out);
                    }
                    out.push(']');
                    return;
                }
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    out.push_str(&pad);
                    go(item, indent + 1, out);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
            serde_json::Value::Object(map) => {
                out.push_str("{\n");
                for (k, (key, item)) in map.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str(&serde_json::Value::String(key.clone()).to_string());
                    out.push_str(": ");
                    go(item, indent + 1, out);
                    out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
            other => out.push_str(&other.to_string()),
        }
    }
    let mut out = String::new();
    go(value, 0, &mut out);
    out.push('\n');
    out
}

/// Floats that happen to be whole are still written as floats.
fn float(v: f64) -> serde_json::Value {
    serde_json::Value::Number(serde_json::Number::from_f64(v).unwrap_or_else(|| 0.into()))
}

pub fn meta_json(meta: &SignalMeta) -> String {
    let mut map = serde_json::Map::new();
    map.insert("c".into(), float(meta.c));
    map.insert("u_min".into(), float(meta.u_min));
    map.insert("u_max".into(), float(meta.u_max));
    map.insert("n".into(), meta.n.into());
    json_with_fixed_numbers(&serde_json::Value::Object(map))
}

/// Relative tolerance when matching CSV abscissae against the sidecar grid.
const ABSCISSA_TOLERANCE: f64 = 1e-12;

/// Signal CSV `x,re,im` plus its sidecar. Values in the file are `f(x)`.
pub fn read_signal(csv_path: &Path, meta_path: &Path) -> IoResult<SampledSignal> {
    let meta = read_meta(meta_path)?;
    let grid = meta.grid().map_err(invalid(meta_path))?;
    let rows = read_table(csv_path, "x")?;
    if rows.len() != grid.len() {
        return Err(IoError::Invalid {
            path: csv_path.into(),
            source: MellinError::LengthMismatch {
                expected: grid.len(),
                got: rows.len(),
            },
        });
    }
    for (j, (x, _)) in rows.iter().enumerate() {
        let want = grid.x(j);
        if (x - want).abs().is_nan() || (x - want).abs() > ABSCISSA_TOLERANCE * want {
            return Err(IoError::Field {
                path: csv_path.into(),
                line: j as u64 + 2,
                field: "x".into(),
                message: format!("{x} does not match grid point {want}"),
            });
        }
    }
    SampledSignal::from_values(grid, meta.c, rows.into_iter().map(|(_, v)| v).collect())
        .map_err(invalid(csv_path))
}

pub fn signal_csv(signal: &SampledSignal) -> String {
    let grid = *signal.grid();
    let values = signal.values();
    write_table("x", (0..grid.len()).map(|j| (grid.x(j), values[j])))
}

pub fn write_signal(signal: &SampledSignal, csv_path: &Path, meta_path: &Path) -> IoResult<()> {
    write_file(csv_path, &signal_csv(signal))?;
    write_file(meta_path, &meta_json(&SignalMeta::of(signal)))
}

/// Spectrum CSV `t,re,im`; the `t` column must be the symmetric uniform grid
/// of an odd number of points.
pub fn read_spectrum(path: &Path, c: f64) -> IoResult<Spectrum> {
    let rows = read_table(path, "t")?;
    let m = rows.len();
    let t_max = rows[m - 1].0;
    let shape = SpectrumShape::new(t_max, m).map_err(invalid(path))?;
    for (k, (t, _)) in rows.iter().enumerate() {
        let want = shape.t(k);
        if (t - want).abs().is_nan() || (t - want).abs() > ABSCISSA_TOLERANCE * t_max {
            return Err(IoError::Field {
                path: path.into(),
                line: k as u64 + 2,
                field: "t".into(),
                message: format!("{t} is off the symmetric grid (expected {want})"),
            });
        }
    }
    Spectrum::new(c, shape, rows.into_iter().map(|(_, v)| v).collect()).map_err(invalid(path))
}

pub fn spectrum_csv(spectrum: &Spectrum) -> String {
    write_table("t", spectrum.iter())
}

/// Density CSV `t,re,im`, increasing `t` inside `[-T, T]`, as a
/// piecewise-linear density.
pub fn read_density(path: &Path) -> IoResult<SpectralDensity> {
    let rows = read_table(path, "t")?;
    if rows.len() < 2 {
        return Err(IoError::Format {
            path: path.into(),
            message: "a density needs at least two knots".into(),
        });
    }
    if let Some(k) = rows.windows(2).position(|w| w[1].0 <= w[0].0) {
        return Err(IoError::Field {
            path: path.into(),
            line: k as u64 + 3,
            field: "t".into(),
            message: "knots must increase".into(),
        });
    }
    let (knots, values) = rows.into_iter().unzip();
    Ok(SpectralDensity::Sampled { knots, values })
}

/// `(x, value)` rows for pointwise outputs (`synth`, `reconstruct`, ...).
pub fn points_csv(rows: impl Iterator<Item = (f64, Complex64)>) -> String {
    write_table("x", rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SampleSetFile {
    c: f64,
    sigma: f64,
    #[serde(rename = "K")]
    k: usize,
    samples: Vec<[f64; 2]>,
}

pub fn sample_set_json(set: &ExpSampleSet) -> String {
    let mut map = serde_json::Map::new();
    map.insert("c".into(), float(set.c()));
    map.insert("sigma".into(), float(set.sigma()));
    map.insert("K".into(), set.k_max().into());
    map.insert(
        "samples".into(),
        serde_json::Value::Array(
            set.samples()
                .iter()
                .map(|v| serde_json::Value::Array(vec![float(v.re), float(v.im)]))
                .collect(),
        ),
    );
    json_with_fixed_numbers(&serde_json::Value::Object(map))
}

pub fn read_sample_set(path: &Path) -> IoResult<ExpSampleSet> {
    let file: SampleSetFile = read_json(path)?;
    let samples = file
        .samples
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    ExpSampleSet::new(file.c, file.sigma, file.k, samples).map_err(invalid(path))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct EstimateFile {
    method: EstimateMethod,
    #[serde(rename = "T_hat")]
    t_hat: f64,
    per_order: Vec<OrderEstimate>,
}

pub fn bandwidth_json(est: &BandwidthEstimate) -> String {
    let mut map = serde_json::Map::new();
    map.insert(
        "method".into(),
        serde_json::to_value(est.method).expect("method serializes"),
    );
    map.insert("T_hat".into(), float(est.t_hat));
    map.insert(
        "per_order".into(),
        serde_json::Value::Array(
            est.per_order
                .iter()
                .map(|o| {
                    let mut row = serde_json::Map::new();
                    row.insert("r".into(), o.r.into());
                    row.insert("root".into(), float(o.root));
                    row.insert("ratio".into(), float(o.ratio));
                    serde_json::Value::Object(row)
                })
                .collect(),
        ),
    );
    json_with_fixed_numbers(&serde_json::Value::Object(map))
}

/// Reads back the `method`, `T_hat` and `per_order` fields.
pub fn read_bandwidth(path: &Path) -> IoResult<(EstimateMethod, f64, Vec<OrderEstimate>)> {
    let file: EstimateFile = read_json(path)?;
    Ok((file.method, file.t_hat, file.per_order))
}
