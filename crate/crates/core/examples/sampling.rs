//! Exponential sampling: recover a bandlimited signal from its values at `e^{k/sigma}`.

use std::f64::consts::PI;

use mellin_kit::{corpus, exp_reconstruct_with_estimate, exp_sample_model, synthesize};

fn main() -> mellin_kit::Result<()> {
    let model = corpus::smooth_edge(0.5, 0.8 * PI)?;
    let sigma = 1.0;
    for k_max in [16, 32, 64, 128] {
        let set = exp_sample_model(&model, sigma, k_max)?;
        let mut worst = 0.0f64;
        let mut tail = 0.0f64;
        for x in [0.3f64, 1.7, 4.2, 9.9] {
            let r = exp_reconstruct_with_estimate(&set, x)?;
            worst = worst.max((r.value - synthesize(&model, x)?).norm());
            tail = tail.max(r.tail_estimate);
        }
        println!("K = {k_max:4}  max error {worst:.3e}  tail estimate {tail:.3e}");
    }

    // undersampling is flagged
    let set = exp_sample_model(&model, 0.5, 32)?;
    for d in set.diagnostics() {
        println!("diagnostic: {d}");
    }
    Ok(())
}
