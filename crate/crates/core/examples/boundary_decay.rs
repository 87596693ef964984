//! `|x^c Theta^k f(x)|` far from `x = 1`: bandlimited signals with smooth
//! densities fall off quickly in `log x`.

use mellin_kit::paley_wiener::log_uniform_probes;
use mellin_kit::{boundary_decay_probe, corpus};

fn main() -> mellin_kit::Result<()> {
    let probes = log_uniform_probes(20.5, 9);
    for (name, model) in [
        ("smooth", corpus::smooth_edge(0.0, 1.0)?),
        ("lin", corpus::lin(0.0)?),
    ] {
        for k in 0..3 {
            let values = boundary_decay_probe(&model, k, &probes)?;
            let row: Vec<String> = values.iter().map(|v| format!("{v:.1e}")).collect();
            println!("{name:6} k = {k}: {}", row.join(" "));
        }
    }
    Ok(())
}
