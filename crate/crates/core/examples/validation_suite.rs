//! Runs the identity and consistency suite and prints anything that is not
//! a plain pass.
//!
//!     cargo run --release --example validation_suite

use qgauss::validation::{run_suite, DEFAULT_SUITE_QS};

fn main() -> qgauss::Result<()> {
    let report = run_suite(&DEFAULT_SUITE_QS)?;
    for c in report.checks.iter().filter(|c| !c.passed) {
        println!(
            "{} {}: lhs {:.6e} rhs {:.6e} ({})",
            if c.gated { "FAIL" } else { "note" },
            c.name,
            c.lhs,
            c.rhs,
            c.notes
        );
    }
    let s = &report.summary;
    println!("{} checks, {} passed, {} failed, {} recorded only", s.total, s.passed, s.failed, s.recorded);
    Ok(())
}
