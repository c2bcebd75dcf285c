use std::sync::OnceLock;

use super::{QGaussian, TruncationPolicy};
use crate::error::{QGaussError, Result};
use crate::roots::{bisect_sign_change, BRACKET_WIDTH};

/// `g(q) = sum_{k>=0} (2k+1)^2 q^(k(k+1)/2)`, stopped once a term's
/// magnitude falls below `eps` (and at least five terms are in).
pub fn bimodality_threshold_series(q: f64, eps: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0u64.. {
        let odd = (2 * k + 1) as f64;
        let term = odd * odd * q.powf((k * (k + 1) / 2) as f64);
        sum += term;
        if k >= 5 && term.abs() < eps {
            break;
        }
        if k > 100_000 {
            break;
        }
    }
    sum
}

/// Largest root of `g` in (-1, 0): below it the density has a local
/// minimum at the origin.
pub fn mode_threshold(policy: &TruncationPolicy) -> f64 {
    let g = |q: f64| bimodality_threshold_series(q, policy.epsilon);
    // walk down from 0 (g(0) = 1) to the first sign change
    let step = 1e-3;
    let mut hi = 0.0;
    let mut lo = -step;
    while g(lo) > 0.0 && lo > -0.999 {
        hi = lo;
        lo -= step;
    }
    bisect_sign_change(g, lo, hi, BRACKET_WIDTH)
}

fn default_threshold() -> f64 {
    static Q0: OnceLock<f64> = OnceLock::new();
    *Q0.get_or_init(|| mode_threshold(&TruncationPolicy::new(1e-17)))
}

/// Whether the density for this `q` has two modes.
pub fn is_bimodal(q: f64) -> Result<bool> {
    if !(q.abs() < 1.0) {
        return Err(QGaussError::InvalidArgument(format!(
            "modality is defined for |q| < 1, got {q}"
        )));
    }
    Ok(q < default_threshold())
}

/// Central second difference of the density at the origin, step `h`.
pub fn pdf_second_derivative_at_zero(q: f64, h: f64) -> Result<f64> {
    let f = QGaussian::new(q)?;
    Ok((f.pdf(h)? - 2.0 * f.pdf(0.0)? + f.pdf(-h)?) / (h * h))
}
