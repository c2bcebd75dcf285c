//! Distribution function and its inverse.
//!
//!     cargo run --example cdf_quantile

use qgauss::QGaussian;

fn main() -> qgauss::Result<()> {
    for q in [-0.8, 0.0, 0.7] {
        let law = QGaussian::new(q)?;
        println!("q = {q:+.1}  (series error bound {:.1e})", law.cdf_error_bound());
        for p in [0.001, 0.025, 0.25, 0.5, 0.75, 0.975, 0.999] {
            let x = law.quantile(p)?;
            println!("  p = {p:<6} x = {x:+.12}  F(x) - p = {:+.1e}", law.cdf(x) - p);
        }
    }

    let law = QGaussian::new(0.3)?;
    if let Err(e) = law.quantile(1.0) {
        println!("quantile(1): {e}");
    }
    Ok(())
}
