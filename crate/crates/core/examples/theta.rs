//! The density on the theta-function scale: f(2 sin(pi z)/sqrt(1-q)) is a
//! constant multiple of theta_3(z) theta_2(z).
//!
//!     cargo run --example theta

use qgauss::qseries::{theta2, theta3};
use qgauss::validation::{check_theta_form, default_theta_grid, theta_constant, theta_ratios};
use qgauss::TruncationPolicy;

fn main() -> qgauss::Result<()> {
    let policy = TruncationPolicy::new(1e-17);
    let grid = default_theta_grid();
    for q in [0.2, 0.4, 0.6] {
        let ratios = theta_ratios(q, &grid, &policy);
        let c = check_theta_form(q, &grid, &policy);
        println!(
            "q = {q}  ratio at z = 0 {:.15}  C_q {:.15}  spread {:.1e}",
            ratios[grid.len() / 2],
            theta_constant(q, &policy),
            c.lhs
        );
    }
    println!("theta_3(0 | 0.1) = {:.15}", theta3(0.0, 0.1, &policy)?);
    println!("theta_2(1/4 | 0.5) = {:.15}", theta2(0.25, 0.5, &policy)?);
    Ok(())
}
