//! `Theta_c = x d/dx + c` applied repeatedly, and the Stirling-type coefficients
//! that expand it in ordinary derivatives.

use mellin_kit::function::{AnalyticFunction, PowerSum};
use mellin_kit::{mellin_derivative, stirling_coeffs, Complex64};

fn main() -> mellin_kit::Result<()> {
    let c = 0.5;
    for r in 0..5 {
        println!("r = {r}: {:?}", stirling_coeffs(r, c));
    }

    // x^a is an eigenfunction with eigenvalue a + c
    let a = 1.5;
    let power = PowerSum::monomial(a);
    for r in 0..4 {
        let v = mellin_derivative(&power, c, r, 2.0)?;
        println!(
            "Theta^{r} x^{a} at 2: {:.12} (expected {:.12})",
            v.re,
            (a + c).powi(r as i32) * 2f64.powf(a)
        );
    }

    let exp = AnalyticFunction(|x: f64, k: usize| {
        Complex64::new(
            if k.is_multiple_of(2) { 1.0 } else { -1.0 } * (-x).exp(),
            0.0,
        )
    });
    for r in 0..4 {
        println!(
            "Theta^{r} e^-x at 1: {:+.12}",
            mellin_derivative(&exp, c, r, 1.0)?.re
        );
    }
    Ok(())
}
