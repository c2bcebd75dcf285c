//! How many series terms a given accuracy needs.
//!
//!     cargo run --example truncation

use qgauss::distribution::{terms_for_tolerance_cdf, terms_for_tolerance_pdf};
use qgauss::{QGaussError, QGaussian, QParameter, TruncationPolicy};

fn main() -> qgauss::Result<()> {
    let qs = [0.1, 0.4, 0.7, 0.9, 0.99];
    for (label, f) in [
        ("density", terms_for_tolerance_pdf as fn(f64, f64) -> qgauss::Result<_>),
        ("distribution function", terms_for_tolerance_cdf),
    ] {
        println!("{label}");
        print!("{:>8}", "eps");
        for q in qs {
            print!("{q:>10}");
        }
        println!();
        for eps in [1e-2, 1e-3, 1e-4, 1e-12] {
            print!("{eps:>8.0e}");
            for q in qs {
                let t = f(q, eps)?;
                print!("{:>10}", format!("{:.2}/{}", t.root, t.resolved_n));
            }
            println!();
        }
    }

    // a term cap that is too small is reported, not silently applied
    let capped = TruncationPolicy::new(1e-12).with_max_terms(10);
    match QGaussian::with_policy(QParameter::new(0.95)?, capped) {
        Err(e @ QGaussError::TermBudgetExceeded { .. }) => println!("{e}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
