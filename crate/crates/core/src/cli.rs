//! Command-line front end. [`run`] parses `argv`, executes one command and
//! returns the process exit code:
//!
//! * `0` success,
//! * `2` invalid arguments or malformed input files,
//! * `3` a numerical diagnostic was raised and `--strict` is set (or a
//!   `verify` row failed).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bandlimited::{
    exp_reconstruct_with_estimate, exp_sample_model, kernel_apply, BandlimitedModel,
};
use crate::config::{Method, RunConfig};
use crate::corpus;
use crate::diagnostics::Diagnostic;
use crate::error::MellinError;
use crate::io::{self, IoError};
use crate::paley_wiener::estimate_bandwidth;
use crate::signal::SampledSignal;
use crate::transform::{mellin_forward_with, mellin_inverse_with};
use crate::verify;

/// Environment variable capping the worker threads of the inner loops.
pub const THREADS_ENV: &str = "MELLIN_KIT_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DIAGNOSTIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mellin-kit",
    version,
    about = "Mellin-transform analysis on the positive half-line"
)]
struct Cli {
    /// Turn numerical warnings into exit code 3.
    #[arg(long, global = true)]
    strict: bool,

    /// Print diagnostics and progress to stderr (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    /// JSON run configuration supplying defaults for every flag.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Forward transform of a sampled signal to a spectrum CSV.
    Transform(TransformArgs),
    /// Inverse transform of a spectrum CSV onto a log grid.
    Inverse(InverseArgs),
    /// Synthesize a bandlimited model on a log grid.
    Synth(SynthArgs),
    /// Exponential samples f(e^{k/sigma}), k = -K..K, of a model.
    Sample(SampleArgs),
    /// Evaluate the exponential sampling series.
    Reconstruct(ReconstructArgs),
    /// Evaluate the reproducing-kernel integral of a model.
    KernelApply(KernelArgs),
    /// Band-edge estimate from the growth of ||Theta^r f||.
    EstimateBw(EstimateArgs),
    /// Run the invariant suite over the built-in corpus.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Direct,
    Fft,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Direct => Method::Direct,
            MethodArg::Fft => Method::Fft,
        }
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    u_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    u_max: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Spectral density CSV (`t,re,im`), piecewise linear between rows.
    #[arg(long, value_name = "CSV", conflicts_with = "model")]
    density: Option<PathBuf>,
    /// Built-in model: `lin`, `flat`, `two-bands`, `edge-jump`, `smooth`, `tilted` or `shifted`.
    #[arg(long)]
    model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Band edge T.
    #[arg(long = "T", alias = "band")]
    band: Option<f64>,
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[arg(long = "in", value_name = "CSV")]
    input: Option<PathBuf>,
    #[arg(long, value_name = "JSON")]
    meta: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    tmax: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InverseArgs {
    #[arg(long = "in", value_name = "CSV")]
    input: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid sidecar; defaults to the output path with a `.json` extension.
    #[arg(long, value_name = "JSON")]
    meta_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_name = "JSON")]
    meta_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long = "K")]
    k_max: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    /// Sample set JSON.
    #[arg(long, value_name = "JSON")]
    samples: Option<PathBuf>,
    /// Evaluation points (comma separated).
    #[arg(long, value_delimiter = ',')]
    x: Vec<f64>,
    /// Evaluate on the grid of this sidecar instead of `--x`.
    #[arg(long, value_name = "JSON")]
    meta: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KernelArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    x: Vec<f64>,
    /// Half-width of the log-domain window.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<f64>,
    /// Step in log y, in units of 1/sigma.
    #[arg(long, allow_hyphen_values = true)]
    step: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Spectrum CSV; alternatively give a model.
    #[arg(long = "in", value_name = "CSV")]
    input: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    rmax: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Numeric(#[from] MellinError),
    #[error("{0}")]
    Usage(String),
}

fn missing(flag: &str) -> CliError {
    CliError::Usage(format!("missing required argument --{flag}"))
}

/// Runs the command line `argv` (including the program name), writing
/// reports to `stdout` / `stderr`.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(message) => {
            let _ = writeln!(stderr, "error: {message}");
            return EXIT_INVALID;
        }
    };
    // buffered so the command can run inside the (Send-only) pool
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let outcome = match pool {
        Some(pool) => pool.install(|| execute(cli, &mut out, &mut err)),
        None => execute(cli, &mut out, &mut err),
    };
    let _ = stdout.write_all(&out);
    let _ = stderr.write_all(&err);
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID
        }
    }
}

/// [`run_with`] on the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        argv,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| e.to_string())
}

fn base_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| IoError::Io {
                path: path.clone(),
                source,
            })?;
            RunConfig::from_json(&text).map_err(|e| IoError::Format {
                path: path.clone(),
                message: format!("line {}, column {}: {e}", e.line(), e.column()),
            })?
        }
        None => RunConfig::default(),
    };
    config.strict |= cli.strict;
    config.verbosity = config.verbosity.max(cli.verbose);
    Ok(config)
}

fn merge_grid(config: &mut RunConfig, grid: &GridArgs) {
    if let Some(v) = grid.u_min {
        config.grid.u_min = v;
    }
    if let Some(v) = grid.u_max {
        config.grid.u_max = v;
    }
    if let Some(v) = grid.n {
        config.grid.n = v;
    }
}

fn merge_model(config: &mut RunConfig, model: &ModelArgs) {
    if model.density.is_some() {
        config.density = model.density.clone();
        config.model = None;
    }
    if model.model.is_some() {
        config.model = model.model.clone();
        config.density = None;
    }
    if let Some(c) = model.c {
        config.c = c;
    }
    if let Some(t) = model.band {
        config.band = t;
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// Folds the parsed arguments into a [`RunConfig`].
fn configure(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = base_config(cli)?;
    match &cli.command {
        Command::Transform(a) => {
            config.command = "transform".into();
            set(&mut config.input, a.input.clone().map(Some));
            set(&mut config.meta, a.meta.clone().map(Some));
            set(&mut config.spectrum.t_max, a.tmax);
            set(&mut config.spectrum.m, a.m);
            set(&mut config.method, a.method.map(Into::into));
            set(&mut config.output, a.out.clone().map(Some));
        }
        Command::Inverse(a) => {
            config.command = "inverse".into();
            set(&mut config.input, a.input.clone().map(Some));
            set(&mut config.c, a.c);
            merge_grid(&mut config, &a.grid);
            set(&mut config.method, a.method.map(Into::into));
            set(&mut config.output, a.out.clone().map(Some));
            set(&mut config.meta_output, a.meta_out.clone().map(Some));
        }
        Command::Synth(a) => {
            config.command = "synth".into();
            merge_model(&mut config, &a.model);
            merge_grid(&mut config, &a.grid);
            set(&mut config.output, a.out.clone().map(Some));
            set(&mut config.meta_output, a.meta_out.clone().map(Some));
        }
        Command::Sample(a) => {
            config.command = "sample".into();
            merge_model(&mut config, &a.model);
            set(&mut config.sigma, a.sigma);
            set(&mut config.k_max, a.k_max);
            set(&mut config.output, a.out.clone().map(Some));
        }
        Command::Reconstruct(a) => {
            config.command = "reconstruct".into();
            set(&mut config.input, a.samples.clone().map(Some));
            set(&mut config.meta, a.meta.clone().map(Some));
            if !a.x.is_empty() {
                config.points = a.x.clone();
            }
            set(&mut config.output, a.out.clone().map(Some));
        }
        Command::KernelApply(a) => {
            config.command = "kernel-apply".into();
            merge_model(&mut config, &a.model);
            set(&mut config.sigma, a.sigma);
            if !a.x.is_empty() {
                config.points = a.x.clone();
            }
            set(&mut config.kernel_half_width, a.window);
            set(&mut config.kernel_step, a.step);
            set(&mut config.output, a.out.clone().map(Some));
        }
        Command::EstimateBw(a) => {
            config.command = "estimate-bw".into();
            set(&mut config.input, a.input.clone().map(Some));
            merge_model(&mut config, &a.model);
            set(&mut config.r_max, a.rmax);
            set(&mut config.output, a.out.clone().map(Some));
        }
        Command::Verify(_) => config.command = "verify".into(),
    }
    Ok(config)
}

fn load_model(config: &RunConfig) -> Result<BandlimitedModel, CliError> {
    if let Some(path) = &config.density {
        let density = io::read_density(path)?;
        return BandlimitedModel::new(config.c, config.band, density).map_err(|source| {
            IoError::Invalid {
                path: path.clone(),
                source,
            }
            .into()
        });
    }
    match &config.model {
        Some(name) => corpus::by_name(name, config.c, config.band)
            .ok_or_else(|| CliError::Usage(format!("unknown model `{name}`")))?
            .map_err(Into::into),
        None => Err(CliError::Usage(
            "give a model with --density or --model".into(),
        )),
    }
}

fn required<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    value.as_deref().ok_or_else(|| missing(flag))
}

fn sidecar_for(config: &RunConfig, out: &Path) -> PathBuf {
    config
        .meta_output
        .clone()
        .unwrap_or_else(|| out.with_extension("json"))
}

fn report(diagnostics: &[Diagnostic], config: &RunConfig, stderr: &mut dyn Write) -> i32 {
    for d in diagnostics {
        let _ = writeln!(stderr, "warning: {d}");
    }
    if config.strict && !diagnostics.is_empty() {
        EXIT_DIAGNOSTIC
    } else {
        EXIT_OK
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let config = configure(&cli)?;
    if config.verbosity > 1 {
        let _ = writeln!(stderr, "{}", config.to_json());
    }
    execute_config(&config, stdout, stderr)
}

/// Executes a fully resolved configuration.
pub fn execute_config_with(
    config: &RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    match execute_config(config, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn execute_config(
    config: &RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    match config.command.as_str() {
        "transform" => {
            let input = required(&config.input, "in")?;
            let meta = required(&config.meta, "meta")?;
            let out = required(&config.output, "out")?;
            let signal = io::read_signal(input, meta)?;
            let shape = config.spectrum.shape()?;
            let spectrum = mellin_forward_with(&signal, shape, config.method.into())?;
            io::write_file(out, &io::spectrum_csv(&spectrum))?;
            Ok(report(spectrum.diagnostics(), config, stderr))
        }
        "inverse" => {
            let input = required(&config.input, "in")?;
            let out = required(&config.output, "out")?;
            let spectrum = io::read_spectrum(input, config.c)?;
            let signal = mellin_inverse_with(&spectrum, config.grid.grid()?, config.method.into())?;
            io::write_signal(&signal, out, &sidecar_for(config, out))?;
            let diagnostics: Vec<_> = signal.truncation_diagnostic().into_iter().collect();
            Ok(report(&diagnostics, config, stderr))
        }
        "synth" => {
            let out = required(&config.output, "out")?;
            let model = load_model(config)?;
            let signal = SampledSignal::sample(config.grid.grid()?, model.c(), &model)?;
            io::write_signal(&signal, out, &sidecar_for(config, out))?;
            let diagnostics: Vec<_> = signal.truncation_diagnostic().into_iter().collect();
            Ok(report(&diagnostics, config, stderr))
        }
        "sample" => {
            let out = required(&config.output, "out")?;
            let model = load_model(config)?;
            let set = exp_sample_model(&model, config.sigma, config.k_max)?;
            io::write_file(out, &io::sample_set_json(&set))?;
            Ok(report(set.diagnostics(), config, stderr))
        }
        "reconstruct" => {
            let input = required(&config.input, "samples")?;
            let out = required(&config.output, "out")?;
            let set = io::read_sample_set(input)?;
            let points: Vec<f64> = match &config.meta {
                Some(meta) => io::read_meta(meta)?
                    .grid()
                    .map_err(|source| IoError::Invalid {
                        path: meta.clone(),
                        source,
                    })?
                    .points()
                    .collect(),
                None if !config.points.is_empty() => config.points.clone(),
                None => {
                    return Err(CliError::Usage(
                        "give evaluation points with --x or --meta".into(),
                    ))
                }
            };
            let mut rows = Vec::with_capacity(points.len());
            let mut worst_tail: f64 = 0.0;
            for &x in &points {
                let r = exp_reconstruct_with_estimate(&set, x)?;
                worst_tail = worst_tail.max(r.tail_estimate);
                rows.push((x, r.value));
            }
            io::write_file(out, &io::points_csv(rows.into_iter()))?;
            if config.verbosity > 0 {
                let _ = writeln!(
                    stderr,
                    "K = {}, largest tail estimate {worst_tail:.3e}",
                    set.k_max()
                );
            }
            Ok(report(set.diagnostics(), config, stderr))
        }
        "kernel-apply" => {
            let out = required(&config.output, "out")?;
            if config.points.is_empty() {
                return Err(missing("x"));
            }
            let model = load_model(config)?;
            let mut rows = Vec::new();
            let mut diagnostics = Vec::new();
            for &x in &config.points {
                let r = kernel_apply(
                    &model,
                    model.c(),
                    config.sigma,
                    x,
                    config.kernel_quadrature(),
                )?;
                if config.verbosity > 0 {
                    let _ = writeln!(stderr, "x = {x}: tail bound {:.3e}", r.tail_bound);
                }
                diagnostics.extend(r.diagnostics);
                rows.push((x, r.value));
            }
            io::write_file(out, &io::points_csv(rows.into_iter()))?;
            Ok(report(&diagnostics, config, stderr))
        }
        "estimate-bw" => {
            let out = required(&config.output, "out")?;
            let est = match &config.input {
                Some(path) => {
                    estimate_bandwidth(&io::read_spectrum(path, config.c)?, config.r_max)?
                }
                None => estimate_bandwidth(&load_model(config)?, config.r_max)?,
            };
            io::write_file(out, &io::bandwidth_json(&est))?;
            if config.verbosity > 0 {
                let _ = writeln!(
                    stderr,
                    "T_hat = {} (stable from r = {:?})",
                    est.t_hat, est.stabilized_at
                );
            }
            Ok(report(&est.diagnostics, config, stderr))
        }
        "verify" => {
            let rows = verify::run_suite(|row| {
                if config.verbosity > 0 {
                    let _ = writeln!(
                        stderr,
                        "{} {}",
                        if row.passed { "pass" } else { "FAIL" },
                        row.name
                    );
                }
            });
            let _ = write!(stdout, "{}", verify::render_table(&rows));
            Ok(if rows.iter().all(|r| r.passed) {
                EXIT_OK
            } else {
                EXIT_DIAGNOSTIC
            })
        }
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}
