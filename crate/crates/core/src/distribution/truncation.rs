//! Choosing how many expansion terms a requested accuracy needs.
//!
//! Both selectors solve `bound(n) = eps` for a continuous `n`, using the
//! closed-form tail bounds on the density and distribution-function
//! expansions, and then round up to an integer no smaller than 4.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{QGaussError, Result};

/// Default target absolute error for series evaluation.
pub const DEFAULT_EPSILON: f64 = 1e-12;
/// Default cap on the number of expansion terms.
pub const DEFAULT_MAX_TERMS: usize = 1000;
/// Smallest series length for which the tail bounds are valid.
pub const MIN_TERMS: usize = 4;
/// Largest |q| accepted on the series paths.
pub const MAX_SERIES_ABS_Q: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationPolicy {
    /// Target absolute error.
    pub epsilon: f64,
    /// Upper limit on the resolved series length.
    pub max_terms: usize,
    /// Series length picked by a selector, once resolved.
    pub resolved_n: Option<usize>,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::new(DEFAULT_EPSILON)
    }
}

impl TruncationPolicy {
    pub fn new(epsilon: f64) -> Self {
        TruncationPolicy {
            epsilon,
            max_terms: DEFAULT_MAX_TERMS,
            resolved_n: None,
        }
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(QGaussError::InvalidArgument(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        if self.max_terms == 0 {
            return Err(QGaussError::InvalidArgument("max_terms must be positive".into()));
        }
        Ok(())
    }

    /// Returns a copy with `resolved_n = n`, or `TermBudgetExceeded` if `n`
    /// is over the cap.
    pub fn resolve(&self, q: f64, n: usize) -> Result<TruncationPolicy> {
        if n > self.max_terms {
            return Err(QGaussError::TermBudgetExceeded {
                q,
                eps: self.epsilon,
                needed: n,
                max_terms: self.max_terms,
                hint: "",
            });
        }
        Ok(TruncationPolicy {
            resolved_n: Some(n),
            ..*self
        })
    }
}

/// Continuous root `N(q, eps)` of a tail-bound equation and the series
/// length actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermsEstimate {
    pub root: f64,
    pub resolved_n: usize,
}

/// Sup-norm bound on the density error after `n` expansion terms:
/// `n |q|^((n-1)(n-2)/2) / (pi (1 - q^2)^2)`.
pub fn pdf_tail_bound(q: f64, n: f64) -> f64 {
    let a = q.abs();
    if a == 0.0 {
        return if n >= 3.0 { 0.0 } else { n / PI };
    }
    n * a.powf((n - 1.0) * (n - 2.0) / 2.0) / (PI * (1.0 - q * q).powi(2))
}

/// Sup-norm bound on the distribution-function error after `n` terms:
/// `(|q|^(n(n-1)/2) + |q|^(n(n+1)/2)) / (2 pi (1 - |q|^n))`.
pub fn cdf_tail_bound(q: f64, n: f64) -> f64 {
    let a = q.abs();
    if a == 0.0 {
        return 0.0;
    }
    (a.powf(n * (n - 1.0) / 2.0) + a.powf(n * (n + 1.0) / 2.0)) / (2.0 * PI * (1.0 - a.powf(n)))
}

fn check_args(q: f64, eps: f64) -> Result<()> {
    if !(q.abs() > 0.0 && q.abs() < 1.0) {
        return Err(QGaussError::InvalidArgument(format!(
            "term selection needs 0 < |q| < 1, got {q}"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(QGaussError::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Root of a bound that is decreasing on `[lo, inf)`; returns `lo` if the
/// bound is already below `eps` there.
fn decreasing_root<B: Fn(f64) -> f64>(bound: B, lo: f64, eps: f64) -> f64 {
    if bound(lo) <= eps {
        return lo;
    }
    let mut hi = lo.max(1.0) * 2.0;
    while bound(hi) > eps {
        hi *= 2.0;
    }
    let mut lo = lo;
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if bound(mid) > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn resolved(root: f64) -> usize {
    (root.ceil() as usize).max(MIN_TERMS)
}

/// Solves the density tail-bound equation for `n`.
///
/// The left side `n |q|^((n-1)(n-2)/2)` rises briefly before it decays, so
/// the search starts at its maximiser (or at `n = 2`).
pub fn terms_for_tolerance_pdf(q: f64, eps: f64) -> Result<TermsEstimate> {
    check_args(q, eps)?;
    let a = -q.abs().ln();
    // d/dn log bound = 1/n - a (n - 3/2) = 0
    let peak = (1.5 * a + (2.25 * a * a + 4.0 * a).sqrt()) / (2.0 * a);
    let root = decreasing_root(|n| pdf_tail_bound(q, n), peak.max(2.0), eps);
    Ok(TermsEstimate {
        root,
        resolved_n: resolved(root),
    })
}

/// Solves the distribution-function tail-bound equation for `n`. Its left
/// side is decreasing for all `n > 0`.
pub fn terms_for_tolerance_cdf(q: f64, eps: f64) -> Result<TermsEstimate> {
    check_args(q, eps)?;
    let root = decreasing_root(|n| cdf_tail_bound(q, n), 1e-9, eps);
    Ok(TermsEstimate {
        root,
        resolved_n: resolved(root),
    })
}
