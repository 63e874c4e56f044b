//! Refit the h(v) polynomial for a few Möbius parameters and degrees and
//! report the certified error of each.

use vecnormal::fastfuncs::{fit_h_coeffs, fit_sincos_coeffs};

fn main() {
    for (rho, degree) in [(1.0, 15), (1.0, 11), (1.0, 19), (0.5, 15), (2.0, 15)] {
        match fit_h_coeffs(rho, degree) {
            Ok(h) => println!(
                "rho {rho:<4} degree {degree:>2}: tau {:.6}, certified error {:.3e}",
                h.tau, h.certified_error
            ),
            Err(e) => println!("rho {rho:<4} degree {degree:>2}: {e}"),
        }
    }
    let sc = fit_sincos_coeffs().expect("sin/cos kernel certifies");
    println!("sincos16 kernel: certified error {:.3e}", sc.certified_error);
}
