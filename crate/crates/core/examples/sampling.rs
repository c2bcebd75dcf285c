//! Exact sampling: rejection from the closed-form envelope, CDF inversion,
//! and the closed forms at q = -1 and q = 1.
//!
//!     cargo run --release --example sampling

use qgauss::sampler::{rejection_bound, sample_lanes, Envelope};
use qgauss::validation::ks_critical_value_01;
use qgauss::{sample, QParameter, SampleStream, SamplingMethod, TruncationPolicy};

fn main() -> qgauss::Result<()> {
    let policy = TruncationPolicy::default();
    let n = 20_000;
    println!("KS critical value at n = {n}: {:.4}", ks_critical_value_01(n));
    for (q, method) in [
        (0.8, SamplingMethod::Auto),
        (-0.6, SamplingMethod::Rejection),
        (-0.95, SamplingMethod::Auto),
        (-1.0, SamplingMethod::Auto),
        (1.0, SamplingMethod::Auto),
    ] {
        let mut stream = SampleStream::new(2024, 0);
        let r = sample(n, QParameter::new(q)?, method, &mut stream, &policy)?;
        let mean = r.samples.iter().sum::<f64>() / n as f64;
        let var = r.samples.iter().map(|x| x * x).sum::<f64>() / n as f64 - mean * mean;
        println!(
            "q = {q:+.2}  {:<13} mean {mean:+.4}  var {var:.4}  acceptance {:.4}  KS {}",
            r.method.name(),
            r.acceptance_rate,
            r.ks_statistic.map_or("-".into(), |d| format!("{d:.4}"))
        );
    }

    // the bound and the envelope mass set the expected acceptance rate
    for q in [-0.8, -0.4, 0.4, 0.8] {
        let m = rejection_bound(q, &policy)?;
        let mass = Envelope::new(q)?.mass();
        println!("q = {q:+.1}  M(q) = {m:.4}  envelope mass {mass:.4}  expected acceptance {:.4}", 1.0 / (m * mass.max(1.0)));
    }

    // four lanes on stream ids 10..13; the result does not depend on scheduling
    let a = sample_lanes(n, QParameter::new(0.5)?, SamplingMethod::Auto, 7, 10, 4, &policy)?;
    let b = sample_lanes(n, QParameter::new(0.5)?, SamplingMethod::Auto, 7, 10, 4, &policy)?;
    println!("lanes {:?} reproducible: {}", a.stream_ids, a.samples == b.samples);
    println!("{}", serde_json::to_string_pretty(&a.sidecar_json(false)).unwrap());
    Ok(())
}
