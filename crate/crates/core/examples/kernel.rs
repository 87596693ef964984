//! The reproducing kernel: convolving a bandlimited signal with `lin` in the
//! Mellin sense returns the signal.

use std::f64::consts::PI;

use mellin_kit::{corpus, kernel_apply, synthesize, KernelQuadrature};

fn main() -> mellin_kit::Result<()> {
    let model = corpus::smooth_edge(0.0, 0.8 * PI)?;
    let quad = KernelQuadrature::default();
    for x in [0.5, 1.0, 2.0, 5.0] {
        let k = kernel_apply(&model, model.c(), 1.0, x, quad)?;
        let direct = synthesize(&model, x)?;
        println!(
            "x = {x:4.1}  kernel {:+.10}  direct {:+.10}  diff {:.2e}  tail bound {:.2e}",
            k.value.re,
            direct.re,
            (k.value - direct).norm(),
            k.tail_bound
        );
    }
    Ok(())
}
