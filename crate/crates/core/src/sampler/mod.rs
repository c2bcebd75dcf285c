//! Exact samplers for the q-Gaussian law.
//!
//! * `Rejection` draws candidates from the envelope by inversion of its
//!   closed-form distribution function and accepts with probability
//!   `f_H / (M(q) f_E)`.
//! * `CdfInversion` solves `F_H(x) = u` on the truncated distribution
//!   function; slower, but insensitive to how large `M(q)` gets near q = -1.
//! * `EnvelopeInversion` returns raw envelope draws, for diagnostics only.
//! * `TwoPoint` and `NormalClosedForm` cover q = -1 and q = 1.

mod envelope;
mod stream;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::distribution::{QGaussian, TruncationPolicy};
use crate::error::{QGaussError, Result};
use crate::qseries::{QKind, QParameter};
use crate::validation::ks_statistic;

pub use envelope::{rejection_bound, Envelope};
pub use stream::{SampleStream, GENERATOR_ID};

/// Below this q the automatic mode switches from rejection to CDF inversion.
pub const AUTO_REJECTION_MIN_Q: f64 = -0.85;
/// Accuracy used for `f_H` inside the acceptance ratio.
const RATIO_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMethod {
    /// Picks a method from q.
    Auto,
    Rejection,
    EnvelopeInversion,
    CdfInversion,
    TwoPoint,
    #[serde(rename = "normal")]
    NormalClosedForm,
}

impl SamplingMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SamplingMethod::Auto => "auto",
            SamplingMethod::Rejection => "rejection",
            SamplingMethod::EnvelopeInversion => "envelope-inversion",
            SamplingMethod::CdfInversion => "cdf-inversion",
            SamplingMethod::TwoPoint => "two-point",
            SamplingMethod::NormalClosedForm => "normal",
        }
    }

    /// Concrete method for `qp`; `Auto` is resolved, anything else is
    /// checked for compatibility.
    pub fn resolve(self, qp: QParameter) -> Result<SamplingMethod> {
        let q = qp.value();
        let mismatch = || QGaussError::MethodMismatch { method: self.name(), q };
        match (self, qp.kind()) {
            (SamplingMethod::Auto, QKind::TwoPoint) => Ok(SamplingMethod::TwoPoint),
            (SamplingMethod::Auto, QKind::Normal) => Ok(SamplingMethod::NormalClosedForm),
            (SamplingMethod::Auto, QKind::Continuous) => Ok(if q >= AUTO_REJECTION_MIN_Q {
                SamplingMethod::Rejection
            } else {
                SamplingMethod::CdfInversion
            }),
            (SamplingMethod::TwoPoint, QKind::TwoPoint) => Ok(self),
            (SamplingMethod::NormalClosedForm, QKind::Normal) => Ok(self),
            (
                SamplingMethod::Rejection
                | SamplingMethod::EnvelopeInversion
                | SamplingMethod::CdfInversion,
                QKind::Continuous,
            ) => Ok(self),
            _ => Err(mismatch()),
        }
    }
}

impl fmt::Display for SamplingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplingMethod {
    type Err = QGaussError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => SamplingMethod::Auto,
            "rejection" => SamplingMethod::Rejection,
            "envelope-inversion" => SamplingMethod::EnvelopeInversion,
            "cdf-inversion" => SamplingMethod::CdfInversion,
            "two-point" => SamplingMethod::TwoPoint,
            "normal" => SamplingMethod::NormalClosedForm,
            other => {
                return Err(QGaussError::InvalidArgument(format!("unknown sampling method {other:?}")))
            }
        })
    }
}

/// Samples plus diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct SamplerReport {
    pub q: f64,
    pub method: SamplingMethod,
    /// True when the samples follow the envelope, not the q-Gaussian law.
    pub diagnostic_only: bool,
    pub seed: u64,
    pub stream_ids: Vec<u64>,
    pub generator: &'static str,
    pub samples: Vec<f64>,
    /// Candidates generated (rejection) or samples produced (other methods).
    pub draws_attempted: u64,
    pub uniforms_used: u64,
    pub acceptance_rate: f64,
    /// `M(q)` for the rejection sampler.
    pub rejection_bound: Option<f64>,
    /// Mass of the unnormalised envelope that `M(q)` refers to.
    pub envelope_mass: Option<f64>,
    /// Constant actually used in the acceptance test, `M(q) max(1, mass)`;
    /// its reciprocal is the expected acceptance rate.
    pub effective_bound: Option<f64>,
    /// KS distance between the samples and the law they target.
    pub ks_statistic: Option<f64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SamplerReport {
    /// JSON sidecar. Timing is left out unless asked for so that repeated
    /// runs produce identical documents.
    pub fn sidecar_json(&self, with_timing: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serialises");
        let obj = v.as_object_mut().expect("object");
        obj.remove("samples");
        obj.insert("n".into(), self.samples.len().into());
        if with_timing {
            obj.insert("elapsed_seconds".into(), self.elapsed.as_secs_f64().into());
        }
        v
    }
}

/// Draws from one law with one concrete method.
struct Sampler {
    method: SamplingMethod,
    q: f64,
    law: Option<QGaussian>,
    envelope: Option<Envelope>,
    bound: Option<f64>,
    effective: Option<f64>,
}

impl Sampler {
    fn new(qp: QParameter, method: SamplingMethod, policy: &TruncationPolicy) -> Result<Self> {
        let method = method.resolve(qp)?;
        let q = qp.value();
        let mut s = Sampler {
            method,
            q,
            law: None,
            envelope: None,
            bound: None,
            effective: None,
        };
        match method {
            SamplingMethod::Rejection => {
                let ratio_policy =
                    TruncationPolicy::new(policy.epsilon.min(RATIO_EPSILON)).with_max_terms(policy.max_terms);
                s.law = Some(QGaussian::with_policy(qp, ratio_policy)?);
                let env = Envelope::new(q)?;
                let m = rejection_bound(q, policy)?;
                s.bound = Some(m);
                s.effective = Some(m * env.mass().max(1.0));
                s.envelope = Some(env);
            }
            SamplingMethod::EnvelopeInversion => {
                s.envelope = Some(Envelope::new(q)?);
            }
            SamplingMethod::CdfInversion => {
                s.law = Some(QGaussian::with_policy(qp, *policy)?);
            }
            _ => {}
        }
        Ok(s)
    }

    /// Returns one sample and the number of candidates it took.
    fn draw(&self, stream: &mut SampleStream) -> Result<(f64, u64)> {
        match self.method {
            SamplingMethod::Rejection => {
                let law = self.law.as_ref().expect("law");
                let env = self.envelope.as_ref().expect("envelope");
                let m = self.effective.expect("bound");
                let c0 = env.normalizer();
                let mut tries = 0;
                loop {
                    tries += 1;
                    let x = env.inverse(stream.uniform())?;
                    let u = stream.uniform();
                    // T = M f_E / f_H; accept iff u T <= 1. The semicircle
                    // factor is common to both densities and cancels.
                    let z = env.to_z(x);
                    let target = law.even_series(z) * c0;
                    let scaled_envelope = m * env.poly(z);
                    if target > 0.0 && u * scaled_envelope <= target {
                        return Ok((x, tries));
                    }
                }
            }
            SamplingMethod::EnvelopeInversion => {
                let env = self.envelope.as_ref().expect("envelope");
                Ok((env.inverse(stream.uniform())?, 1))
            }
            SamplingMethod::CdfInversion => {
                let law = self.law.as_ref().expect("law");
                Ok((law.quantile(stream.uniform())?, 1))
            }
            SamplingMethod::TwoPoint => Ok((if stream.uniform() < 0.5 { -1.0 } else { 1.0 }, 1)),
            SamplingMethod::NormalClosedForm => {
                // Box-Muller, cosine branch only: two uniforms per sample
                let u1 = stream.uniform();
                let u2 = stream.uniform();
                Ok(((-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos(), 1))
            }
            SamplingMethod::Auto => unreachable!("resolved in Sampler::new"),
        }
    }

    fn run(&self, n: usize, stream: &mut SampleStream) -> Result<(Vec<f64>, u64)> {
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0;
        for _ in 0..n {
            let (x, t) = self.draw(stream)?;
            out.push(x);
            attempts += t;
        }
        Ok((out, attempts))
    }

    fn ks(&self, samples: &[f64], policy: &TruncationPolicy) -> Result<Option<f64>> {
        if samples.is_empty() {
            return Ok(None);
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(match self.method {
            SamplingMethod::TwoPoint => None,
            SamplingMethod::EnvelopeInversion => {
                let env = self.envelope.as_ref().expect("envelope");
                Some(ks_statistic(&sorted, |x| env.cdf(x)))
            }
            SamplingMethod::CdfInversion | SamplingMethod::Rejection => {
                let law = QGaussian::with_policy(QParameter::new(self.q)?, *policy)?;
                Some(ks_statistic(&sorted, |x| law.cdf(x)))
            }
            SamplingMethod::NormalClosedForm => {
                Some(ks_statistic(&sorted, crate::distribution::normal_cdf))
            }
            SamplingMethod::Auto => None,
        })
    }
}

/// Draws `n` samples from the q-Gaussian law on a single stream.
pub fn sample(
    n: usize,
    qp: QParameter,
    method: SamplingMethod,
    stream: &mut SampleStream,
    policy: &TruncationPolicy,
) -> Result<SamplerReport> {
    if n == 0 {
        return Err(QGaussError::InvalidArgument("sample size must be at least 1".into()));
    }
    let start = Instant::now();
    let sampler = Sampler::new(qp, method, policy)?;
    let used_before = stream.drawn();
    let (samples, attempts) = sampler.run(n, stream)?;
    let elapsed = start.elapsed();
    let ks = sampler.ks(&samples, policy)?;
    Ok(build_report(
        &sampler,
        samples,
        attempts,
        stream.drawn() - used_before,
        stream.seed(),
        vec![stream.stream_id()],
        ks,
        elapsed,
    ))
}

/// Draws `n` samples split across `lanes` worker threads. Lane `i` uses
/// stream id `base_stream + i` and receives `n / lanes` samples, plus one
/// for the first `n % lanes` lanes. Output is ordered by lane, so it does
/// not depend on scheduling.
pub fn sample_lanes(
    n: usize,
    qp: QParameter,
    method: SamplingMethod,
    seed: u64,
    base_stream: u64,
    lanes: usize,
    policy: &TruncationPolicy,
) -> Result<SamplerReport> {
    if lanes <= 1 {
        return sample(n, qp, method, &mut SampleStream::new(seed, base_stream), policy);
    }
    if n == 0 {
        return Err(QGaussError::InvalidArgument("sample size must be at least 1".into()));
    }
    let start = Instant::now();
    let sampler = Sampler::new(qp, method, policy)?;
    let root = SampleStream::new(seed, base_stream);
    let sizes: Vec<usize> = (0..lanes).map(|i| n / lanes + usize::from(i < n % lanes)).collect();
    let results: Vec<Result<(Vec<f64>, u64, u64)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = sizes
            .iter()
            .enumerate()
            .map(|(i, &size)| {
                let mut stream = root.lane(i as u64);
                let sampler = &sampler;
                scope.spawn(move || {
                    let (xs, attempts) = sampler.run(size, &mut stream)?;
                    Ok((xs, attempts, stream.drawn()))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("lane panicked")).collect()
    });
    let mut samples = Vec::with_capacity(n);
    let mut attempts = 0;
    let mut uniforms = 0;
    for r in results {
        let (xs, a, u) = r?;
        samples.extend(xs);
        attempts += a;
        uniforms += u;
    }
    let elapsed = start.elapsed();
    let ks = sampler.ks(&samples, policy)?;
    let ids = (0..lanes as u64).map(|i| base_stream.wrapping_add(i)).collect();
    Ok(build_report(&sampler, samples, attempts, uniforms, seed, ids, ks, elapsed))
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    sampler: &Sampler,
    samples: Vec<f64>,
    attempts: u64,
    uniforms: u64,
    seed: u64,
    stream_ids: Vec<u64>,
    ks: Option<f64>,
    elapsed: Duration,
) -> SamplerReport {
    let acceptance_rate = if sampler.method == SamplingMethod::Rejection {
        samples.len() as f64 / attempts as f64
    } else {
        1.0
    };
    SamplerReport {
        q: sampler.q,
        method: sampler.method,
        diagnostic_only: sampler.method == SamplingMethod::EnvelopeInversion,
        seed,
        stream_ids,
        generator: GENERATOR_ID,
        samples,
        draws_attempted: attempts,
        uniforms_used: uniforms,
        acceptance_rate,
        rejection_bound: sampler.bound,
        envelope_mass: sampler.envelope.as_ref().filter(|_| sampler.bound.is_some()).map(Envelope::mass),
        effective_bound: sampler.effective,
        ks_statistic: ks,
        elapsed,
    }
}
