//! The three polynomial families behind the density expansion.
//!
//!     cargo run --example polynomials

use qgauss::polynomials::PolynomialFamily;

fn main() {
    let q = 0.5;
    let families = [
        ("U_n(x)", PolynomialFamily::ChebyshevU),
        ("H_n(x|q)", PolynomialFamily::QHermiteH { q }),
        ("h_n(x|q)", PolynomialFamily::ContinuousQHermiteh { q }),
    ];
    for (name, fam) in families {
        let vals = fam.eval_all(6, 0.3);
        println!("{name:<9} at 0.3: {vals:.6?}");
    }
    let xs: Vec<f64> = (0..5).map(|i| -1.0 + i as f64 * 0.5).collect();
    println!("H_4 on {xs:?}: {:.6?}", PolynomialFamily::QHermiteH { q }.eval_grid(4, &xs));
}
