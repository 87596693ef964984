//! Kept in its own binary: it changes the process environment.

use mellin_kit::cli::{run_with, EXIT_INVALID, EXIT_OK, THREADS_ENV};

fn run(args: &[&str]) -> (i32, String) {
    let argv = std::iter::once("mellin-kit").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(err).unwrap())
}

#[test]
fn thread_cap_is_validated_and_honoured() {
    let dir = tempfile::TempDir::new().unwrap();
    let out = dir.path().join("bw.json");
    let args = [
        "estimate-bw",
        "--model",
        "lin",
        "--out",
        out.to_str().unwrap(),
    ];

    std::env::set_var(THREADS_ENV, "zero");
    let (code, err) = run(&args);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains(THREADS_ENV), "{err}");

    std::env::set_var(THREADS_ENV, "0");
    assert_eq!(run(&args).0, EXIT_INVALID);

    std::env::set_var(THREADS_ENV, "1");
    assert_eq!(run(&args).0, EXIT_OK);
    let single = std::fs::read(&out).unwrap();

    std::env::set_var(THREADS_ENV, "3");
    assert_eq!(run(&args).0, EXIT_OK);
    assert_eq!(std::fs::read(&out).unwrap(), single);
    std::env::remove_var(THREADS_ENV);
}
