use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use mellin_kit::cli::{run_with, EXIT_DIAGNOSTIC, EXIT_INVALID, EXIT_OK};
use mellin_kit::io;
use mellin_kit::Complex64;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Outcome {
    let argv = std::iter::once("mellin-kit").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(dir: &TempDir, name: &str, extra: &[&str]) -> (PathBuf, PathBuf) {
    let csv = path(dir, &format!("{name}.csv"));
    let meta = path(dir, &format!("{name}.json"));
    let mut args = vec!["synth", "--out", s(&csv)];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    (csv, meta)
}

#[test]
fn unknown_command_is_a_usage_error() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.stderr.contains("Usage"), "{}", o.stderr);
    assert_eq!(run(&[]).code, EXIT_INVALID);
}

#[test]
fn help_exits_cleanly() {
    let o = run(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    for cmd in [
        "transform",
        "inverse",
        "synth",
        "sample",
        "reconstruct",
        "kernel-apply",
        "estimate-bw",
        "verify",
    ] {
        assert!(o.stdout.contains(cmd), "missing {cmd}");
    }
}

#[test]
fn synth_writes_signal_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let (csv, meta) = synth(
        &dir,
        "sig",
        &[
            "--model", "smooth", "--c", "0.5", "--T", "2", "--u-min", "-40", "--u-max", "40",
            "--n", "641",
        ],
    );
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,re,im"));
    assert_eq!(text.lines().count(), 642);
    let meta_text = fs::read_to_string(&meta).unwrap();
    let json: serde_json::Value = serde_json::from_str(&meta_text).unwrap();
    assert_eq!(json["c"], 0.5);
    assert_eq!(json["u_min"], -40.0);
    assert_eq!(json["u_max"], 40.0);
    assert_eq!(json["n"], 641);
    // x = 1 sits in the middle of the grid
    let mid = text.lines().nth(321).unwrap();
    let fields: Vec<f64> = mid.split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields[0], 1.0);
    let model = mellin_kit::corpus::smooth_edge(0.5, 2.0).unwrap();
    let want = mellin_kit::synthesize(&model, 1.0).unwrap();
    assert!((Complex64::new(fields[1], fields[2]) - want).norm() < 1e-14);
}

#[test]
fn transform_of_synthesized_lin_is_the_indicator() {
    let dir = TempDir::new().unwrap();
    let (csv, meta) = synth(&dir, "lin", &["--model", "lin", "--c", "0.25"]);
    let spec = path(&dir, "spec.csv");
    let o = run(&[
        "transform",
        "--in",
        s(&csv),
        "--meta",
        s(&meta),
        "--tmax",
        "12.566",
        "--m",
        "4097",
        "--out",
        s(&spec),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let spectrum = io::read_spectrum(&spec, 0.25).unwrap();
    assert_eq!(spectrum.len(), 4097);
    for (t, v) in spectrum.iter() {
        if t.abs() < 2.5 {
            assert!((v - 1.0).norm() < 0.02, "t={t} {v}");
        } else if t.abs() > 4.0 {
            assert!(v.norm() < 0.02, "t={t} {v}");
        }
    }
}

#[test]
fn estimate_bw_on_lin_spectrum() {
    let dir = TempDir::new().unwrap();
    // lin_0 spectrum: 1 on [-pi, pi], 0 outside
    let spec = path(&dir, "spec.csv");
    let shape = mellin_kit::SpectrumShape::new(4.0 * PI, 4097).unwrap();
    let spectrum = mellin_kit::Spectrum::from_fn(0.0, shape, |t| {
        Complex64::new(if t.abs() <= PI { 1.0 } else { 0.0 }, 0.0)
    })
    .unwrap();
    fs::write(&spec, io::spectrum_csv(&spectrum)).unwrap();
    let bw = path(&dir, "bw.json");
    let o = run(&[
        "estimate-bw",
        "--in",
        s(&spec),
        "--c",
        "0",
        "--rmax",
        "30",
        "--out",
        s(&bw),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&bw).unwrap()).unwrap();
    assert_eq!(json["method"], "ratio");
    let t_hat = json["T_hat"].as_f64().unwrap();
    assert!((t_hat - PI).abs() / PI < 0.02, "T_hat {t_hat}");
    let orders = json["per_order"].as_array().unwrap();
    assert_eq!(orders.len(), 30);
    assert_eq!(orders[0]["r"], 1);
    assert!(orders[9]["ratio"].as_f64().is_some() && orders[9]["root"].as_f64().is_some());
}

#[test]
fn estimate_bw_from_a_model() {
    let dir = TempDir::new().unwrap();
    let bw = path(&dir, "bw.json");
    let o = run(&["estimate-bw", "--model", "two-bands", "--out", s(&bw)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (_, t_hat, _) = io::read_bandwidth(&bw).unwrap();
    assert!((t_hat - 2.0).abs() < 0.1);
}

#[test]
fn sample_then_reconstruct() {
    let dir = TempDir::new().unwrap();
    let samples = path(&dir, "samples.json");
    let o = run(&[
        "sample",
        "--model",
        "smooth",
        "--T",
        "2.5",
        "--c",
        "-0.5",
        "--sigma",
        "1",
        "--K",
        "64",
        "--out",
        s(&samples),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&samples).unwrap()).unwrap();
    assert_eq!(json["K"], 64);
    assert_eq!(json["sigma"], 1.0);
    assert_eq!(json["samples"].as_array().unwrap().len(), 129);

    let out = path(&dir, "rec.csv");
    let o = run(&[
        "reconstruct",
        "--samples",
        s(&samples),
        "--x",
        "1,1.5,2.718281828459045",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("x,re,im"));
    let model = mellin_kit::corpus::smooth_edge(-0.5, 2.5).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let want = mellin_kit::synthesize(&model, f[0]).unwrap();
        let err = (Complex64::new(f[1], f[2]) - want).norm();
        // truncation of the series at K = 64
        assert!(err < 1e-7, "x={} err {err:e}", f[0]);
    }
}

#[test]
fn reconstruct_on_a_grid_sidecar() {
    let dir = TempDir::new().unwrap();
    let samples = path(&dir, "samples.json");
    assert_eq!(
        run(&["sample", "--model", "lin", "--K", "8", "--out", s(&samples)]).code,
        EXIT_OK
    );
    let meta = path(&dir, "grid.json");
    fs::write(&meta, r#"{"c": 0.0, "u_min": -2.0, "u_max": 2.0, "n": 9}"#).unwrap();
    let out = path(&dir, "rec.csv");
    let o = run(&[
        "reconstruct",
        "--samples",
        s(&samples),
        "--meta",
        s(&meta),
        "--out",
        s(&out),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 10);
}

#[test]
fn kernel_apply_matches_synthesis() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "k.csv");
    let o = run(&[
        "kernel-apply",
        "--model",
        "smooth",
        "--T",
        "2",
        "--sigma",
        "1",
        "--x",
        "1.3498588075760032",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let line = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .nth(1)
        .unwrap()
        .to_string();
    let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
    let model = mellin_kit::corpus::smooth_edge(0.0, 2.0).unwrap();
    let want = mellin_kit::synthesize(&model, f[0]).unwrap();
    assert!((Complex64::new(f[1], f[2]) - want).norm() / want.norm() < 1e-4);
}

#[test]
fn inverse_round_trips_a_spectrum() {
    let dir = TempDir::new().unwrap();
    let (csv, meta) = synth(
        &dir,
        "sig",
        &["--model", "smooth", "--c", "1", "--T", "3.141592653589793"],
    );
    let spec = path(&dir, "spec.csv");
    assert_eq!(
        run(&[
            "transform",
            "--in",
            s(&csv),
            "--meta",
            s(&meta),
            "--out",
            s(&spec)
        ])
        .code,
        EXIT_OK
    );
    let back = path(&dir, "back.csv");
    let o = run(&["inverse", "--in", s(&spec), "--c", "1", "--out", s(&back)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let original = io::read_signal(&csv, &meta).unwrap();
    let restored = io::read_signal(&back, &path(&dir, "back.json")).unwrap();
    let err = mellin_kit::transform::relative_l2_error(&restored, &original).unwrap();
    assert!(err < 1e-10, "{err}");
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = [
        "--model", "tilted", "--c", "0.5", "--T", "1.5", "--n", "2049", "--u-min", "-100",
        "--u-max", "100",
    ];
    let (a, _) = synth(&dir, "a", &args);
    let (b, _) = synth(&dir, "b", &args);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let meta = path(&dir, "a.json");
    let (sa, sb) = (path(&dir, "sa.csv"), path(&dir, "sb.csv"));
    for out in [&sa, &sb] {
        assert_eq!(
            run(&[
                "transform",
                "--in",
                s(&a),
                "--meta",
                s(&meta),
                "--tmax",
                "6",
                "--m",
                "257",
                "--out",
                s(out)
            ])
            .code,
            EXIT_OK
        );
    }
    assert_eq!(fs::read(&sa).unwrap(), fs::read(&sb).unwrap());
}

#[test]
fn strict_escalates_truncation_warnings() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "lin.csv");
    // lin decays like 1/log x and is far from negligible at |log x| = 30
    let args = [
        "synth",
        "--model",
        "lin",
        "--u-min",
        "-30.5",
        "--u-max",
        "30.5",
        "--n",
        "489",
        "--out",
        s(&out),
    ];
    let relaxed = run(&args);
    assert_eq!(relaxed.code, EXIT_OK);
    assert!(
        relaxed.stderr.contains("warning: truncation"),
        "{}",
        relaxed.stderr
    );
    let mut strict = vec!["--strict"];
    strict.extend_from_slice(&args);
    assert_eq!(run(&strict).code, EXIT_DIAGNOSTIC);
}

#[test]
fn malformed_csv_names_line_and_field() {
    let dir = TempDir::new().unwrap();
    let (csv, meta) = synth(
        &dir,
        "sig",
        &[
            "--model", "smooth", "--n", "5", "--u-min", "-1", "--u-max", "1",
        ],
    );
    let mut text = fs::read_to_string(&csv).unwrap();
    text = text.replacen("e-", "q-", 1);
    let bad_line = text.lines().position(|l| l.contains("q-")).unwrap() + 1;
    fs::write(&csv, text).unwrap();
    let o = run(&[
        "transform",
        "--in",
        s(&csv),
        "--meta",
        s(&meta),
        "--out",
        s(&path(&dir, "o.csv")),
    ]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(
        o.stderr.contains(&format!("line {bad_line}")),
        "{}",
        o.stderr
    );

    fs::write(
        &meta,
        r#"{"c": 0.0, "u_min": -1.0, "u_max": "one", "n": 5}"#,
    )
    .unwrap();
    let o = run(&[
        "transform",
        "--in",
        s(&csv),
        "--meta",
        s(&meta),
        "--out",
        s(&path(&dir, "o.csv")),
    ]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.stderr.contains("line"), "{}", o.stderr);
}

#[test]
fn missing_and_invalid_arguments() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["transform"]).code, EXIT_INVALID);
    assert_eq!(
        run(&["synth", "--out", s(&path(&dir, "x.csv"))]).code,
        EXIT_INVALID
    );
    assert_eq!(
        run(&["synth", "--model", "nope", "--out", s(&path(&dir, "x.csv"))]).code,
        EXIT_INVALID
    );
    let o = run(&[
        "sample",
        "--model",
        "lin",
        "--sigma",
        "-1",
        "--out",
        s(&path(&dir, "s.json")),
    ]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.stderr.contains("sigma"), "{}", o.stderr);
    let o = run(&[
        "kernel-apply",
        "--model",
        "lin",
        "--out",
        s(&path(&dir, "k.csv")),
    ]);
    assert_eq!(o.code, EXIT_INVALID);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = TempDir::new().unwrap();
    let config = path(&dir, "run.json");
    fs::write(
        &config,
        r#"{"c": 0.75, "band": 2.0, "grid": {"u_min": -10.0, "u_max": 10.0, "n": 161}}"#,
    )
    .unwrap();
    let out = path(&dir, "sig.csv");
    let o = run(&[
        "--config",
        s(&config),
        "synth",
        "--model",
        "flat",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(path(&dir, "sig.json")).unwrap()).unwrap();
    assert_eq!(meta["c"], 0.75);
    assert_eq!(meta["n"], 161);
    fs::write(&config, "{ not json").unwrap();
    assert_eq!(run(&["--config", s(&config), "verify"]).code, EXIT_INVALID);
}

#[test]
fn density_file_defines_a_model() {
    let dir = TempDir::new().unwrap();
    let density = path(&dir, "density.csv");
    fs::write(&density, "t,re,im\n-1,0,0\n0,1,0\n1,0,0\n").unwrap();
    let bw = path(&dir, "bw.json");
    let o = run(&[
        "estimate-bw",
        "--density",
        s(&density),
        "--T",
        "1",
        "--out",
        s(&bw),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (_, t_hat, _) = io::read_bandwidth(&bw).unwrap();
    assert!(t_hat < 1.0 && t_hat > 0.9, "{t_hat}");
}

#[test]
fn verify_passes_on_a_clean_build() {
    let o = run(&["verify"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert!(!o.stdout.contains("FAIL"));
    assert!(o.stdout.contains("checks passed"));
}
