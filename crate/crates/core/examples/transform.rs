//! Mellin transform of `e^{-x}` on the line `Re s = 1/2`, compared with `Gamma(1/2 + it)` at `t = 0`.

use std::f64::consts::PI;

use mellin_kit::function::FnFunction;
use mellin_kit::{mellin_forward, Complex64, GeometricGrid, SampledSignal, SpectrumShape};

fn main() -> mellin_kit::Result<()> {
    let grid = GeometricGrid::new(-40.0, 5.0, 4097)?;
    let signal = SampledSignal::sample(
        grid,
        0.5,
        &FnFunction(|x: f64| Complex64::new((-x).exp(), 0.0)),
    )?;
    let spectrum = mellin_forward(&signal, SpectrumShape::new(10.0, 41)?)?;
    for (t, v) in spectrum.iter().step_by(5) {
        println!("t = {t:+6.2}   M f = {:+.10} {:+.10}i", v.re, v.im);
    }
    let centre = spectrum.values()[spectrum.len() / 2];
    println!("Gamma(1/2) = {:.12}, computed {:.12}", PI.sqrt(), centre.re);
    Ok(())
}
