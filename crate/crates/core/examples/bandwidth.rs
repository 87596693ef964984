//! Estimating the Mellin bandwidth from the growth of `||Theta^r f||`.

use std::f64::consts::PI;

use mellin_kit::{bernstein_ratio, corpus, estimate_bandwidth};

fn main() -> mellin_kit::Result<()> {
    for band in [1.0, PI, 2.0 * PI] {
        let model = corpus::smooth_edge(0.0, band)?;
        let est = estimate_bandwidth(&model, 30)?;
        println!(
            "T = {band:.6}  estimate {:.6}  ({:+.2}%)",
            est.t_hat,
            100.0 * (est.t_hat / band - 1.0)
        );
    }

    let lin = estimate_bandwidth(&corpus::lin(0.0)?, 10)?;
    for o in &lin.per_order {
        println!(
            "lin: r = {:2}  root {:.6}  ratio {:.6}",
            o.r, o.root, o.ratio
        );
    }

    let narrow = corpus::edge_concentrated(0.0, 1.0, 1e-3)?;
    println!(
        "Bernstein ratio, energy at the edge: {:.6}",
        bernstein_ratio(&narrow, 20)?
    );
    Ok(())
}
