//! The built-in self-check, as `mellin-kit verify` runs it. Best run with `--release`.

use mellin_kit::verify::{render_table, run_suite};

fn main() {
    let rows =
        run_suite(|row| eprintln!("{} {}", if row.passed { "ok  " } else { "FAIL" }, row.name));
    print!("{}", render_table(&rows));
}
