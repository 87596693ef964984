//! Forward and inverse transform of a bandlimited signal, with the Plancherel gap.

use mellin_kit::corpus;
use mellin_kit::transform::relative_l2_error;
use mellin_kit::{mellin_forward, mellin_inverse, plancherel_gap, x2c_norm, SampledSignal};

fn main() -> mellin_kit::Result<()> {
    let model = corpus::smooth_edge(0.5, 2.0)?;
    let (grid, shape) = (
        corpus::reference_grid(model.band()),
        corpus::reference_shape(model.band()),
    );
    let signal = SampledSignal::sample(grid, model.c(), &model)?;
    let spectrum = mellin_forward(&signal, shape)?;
    let back = mellin_inverse(&spectrum, grid)?;
    println!("norm            {:.15}", x2c_norm(&signal));
    println!("plancherel gap  {:.3e}", plancherel_gap(&signal, shape)?);
    println!("round trip      {:.3e}", relative_l2_error(&back, &signal)?);
    Ok(())
}
