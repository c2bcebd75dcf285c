//! Moments and the change from one mode to two as q decreases.
//!
//!     cargo run --example moments_modality

use qgauss::distribution::{is_bimodal, mode_threshold, moments_up_to, pdf_second_derivative_at_zero};
use qgauss::TruncationPolicy;

fn main() -> qgauss::Result<()> {
    for q in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let m = moments_up_to(8, q);
        println!("q = {q:+.1}  E X^2 = {}  E X^4 = {}  E X^6 = {}  E X^8 = {}", m[2], m[4], m[6], m[8]);
    }

    let q0 = mode_threshold(&TruncationPolicy::default());
    println!("mode threshold q0 = {q0:.10}");
    for q in [q0 - 0.05, q0 - 0.01, q0 + 0.01, q0 + 0.05] {
        println!(
            "  q = {q:+.4}  f''(0) = {:+.4e}  bimodal = {}",
            pdf_second_derivative_at_zero(q, 1e-3)?,
            is_bimodal(q)?
        );
    }
    Ok(())
}
