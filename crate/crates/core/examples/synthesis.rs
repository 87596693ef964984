//! Evaluating a Mellin-bandlimited signal from its spectral density.

use std::f64::consts::{E, PI};

use mellin_kit::{lin_c, synthesize, BandlimitedModel, Complex64, SpectralDensity};

fn main() -> mellin_kit::Result<()> {
    let c = 0.25;
    let flat = BandlimitedModel::flat(c, PI)?;
    for x in [0.2, 1.0, 1.7, E, 10.0] {
        println!(
            "x = {x:6.3}  synthesized {:+.12}  lin_c {:+.12}",
            synthesize(&flat, x)?.re,
            lin_c(c, x)?
        );
    }

    let triangle = BandlimitedModel::new(
        c,
        2.0,
        SpectralDensity::callable(|t| Complex64::new(1.0 - t.abs() / 2.0, 0.0)),
    )?;
    println!(
        "triangle density, f(1) = {:.12} (expected {:.12})",
        synthesize(&triangle, 1.0)?.re,
        1.0 / PI
    );
    Ok(())
}
