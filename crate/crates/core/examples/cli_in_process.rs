//! Drives the command-line front end from Rust; the binary is a thin
//! wrapper around the same call.
//!
//!     cargo run --example cli_in_process

fn main() {
    for args in [
        vec!["qgauss", "terms", "--q", "0.9", "--eps", "0.01"],
        vec!["qgauss", "pdf", "--q", "0", "--grid", "-2:2:4"],
        vec!["qgauss", "moments", "--q", "0.5", "--max-order", "4", "--format", "json"],
        vec!["qgauss", "pdf", "--q", "2", "--grid", "0:1:1"],
    ] {
        let out = qgauss::cli::run(&args);
        println!("$ {}  (status {})", args[1..].join(" "), out.status);
        print!("{}{}", out.stdout_str(), out.stderr_str());
    }
}
