//! Density of the q-Gaussian law across the family, in both forms.
//!
//!     cargo run --example density

use qgauss::{QGaussian, QParameter, TruncationPolicy};

fn main() -> qgauss::Result<()> {
    for q in [-0.9, -0.5, 0.0, 0.5, 0.9] {
        let law = QGaussian::new(q)?;
        let r = law.param().support_halfwidth();
        println!("q = {q:+.1}  support [-{r:.4}, {r:.4}]  series terms {}", law.pdf_terms());
        for i in 0..=8 {
            let x = -r + 2.0 * r * i as f64 / 8.0;
            let p = law.pdf_product(x)?;
            let e = law.pdf_expansion(x)?;
            println!(
                "  x = {x:+.4}  product {:.12}  expansion {:.12}  bound {:.1e}",
                p.value, e.value, e.error_bound
            );
        }
    }

    // a looser tolerance needs fewer terms
    let loose = QGaussian::with_policy(QParameter::new(0.9)?, TruncationPolicy::new(1e-4))?;
    println!("q = 0.9 at eps 1e-4 uses {} terms", loose.pdf_terms());

    // the endpoints of the family
    println!("q = 1:  f(0) = {:.12}", QGaussian::new(1.0)?.pdf(0.0)?);
    println!("q = -1: P(X <= 0) = {}", QGaussian::new(-1.0)?.cdf(0.0));
    Ok(())
}
