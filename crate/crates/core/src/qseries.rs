//! q-arithmetic: q-numbers, q-factorials, Gaussian binomials, Pochhammer
//! products, and the two Jacobi theta functions used by the density.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::distribution::TruncationPolicy;
use crate::error::{QGaussError, Result};

/// Hard cap on factors/terms for infinite products and theta series.
const MAX_INFINITE_TERMS: usize = 10_000_000;

/// Which member of the family a given q selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QKind {
    /// q = -1: mass 1/2 at each of -1 and 1.
    TwoPoint,
    /// |q| < 1: absolutely continuous on a bounded interval.
    Continuous,
    /// q = 1: standard normal.
    Normal,
}

/// A validated deformation parameter q in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QParameter {
    q: f64,
    kind: QKind,
}

impl QParameter {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || !(-1.0..=1.0).contains(&q) {
            return Err(QGaussError::InvalidQ(q));
        }
        let kind = if q == -1.0 {
            QKind::TwoPoint
        } else if q == 1.0 {
            QKind::Normal
        } else {
            QKind::Continuous
        };
        Ok(QParameter { q, kind })
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn kind(&self) -> QKind {
        self.kind
    }

    /// Half-width of the support: 2/sqrt(1-q) for |q| < 1, 1 for the
    /// two-point law, infinity for the normal law.
    pub fn support_halfwidth(&self) -> f64 {
        match self.kind {
            QKind::TwoPoint => 1.0,
            QKind::Normal => f64::INFINITY,
            QKind::Continuous => 2.0 / (1.0 - self.q).sqrt(),
        }
    }
}

/// Length of a Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terms {
    Finite(usize),
    Infinite,
}

/// `[n]_q = 1 + q + ... + q^(n-1)`, with `[0]_q = 0`.
pub fn q_number(n: usize, q: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for _ in 0..n {
        sum += pow;
        pow *= q;
    }
    sum
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`, with `[0]_q! = 1`.
pub fn q_factorial(n: usize, q: f64) -> f64 {
    (1..=n).map(|i| q_number(i, q)).product()
}

/// Gaussian binomial coefficient; zero for `k` outside `0..=n`.
///
/// Evaluated with the q-Pascal rule `[n,k] = [n-1,k-1] + q^k [n-1,k]`, which
/// needs no division and so stays finite and exact in the limits q = +-1
/// where the factorial ratio is 0/0 or overflows. For large `n` with
/// `|q| < 1` the product form `prod (1-q^(n-k+i))/(1-q^i)` is used instead.
pub fn q_binomial(n: usize, k: i64, q: f64) -> f64 {
    if k < 0 || k as u64 > n as u64 {
        return 0.0;
    }
    let k = (k as usize).min(n - k as usize);
    if k == 0 {
        return 1.0;
    }
    if n > 512 && q.abs() < 0.9 {
        return q_binomial_product(n, k, q);
    }
    // row[j] holds [m, j]_q for the current m
    let mut row = vec![0.0; k + 1];
    row[0] = 1.0;
    let mut qpow = vec![1.0; k + 1];
    for j in 1..=k {
        qpow[j] = qpow[j - 1] * q;
    }
    for m in 1..=n {
        let top = m.min(k);
        for j in (1..=top).rev() {
            row[j] = row[j - 1] + qpow[j] * row[j];
        }
    }
    row[k]
}

fn q_binomial_product(n: usize, k: usize, q: f64) -> f64 {
    let mut acc = 1.0;
    for i in 1..=k {
        acc *= (1.0 - q.powi((n - k + i) as i32)) / (1.0 - q.powi(i as i32));
    }
    acc
}

/// Pochhammer symbol `(a; q)_n = prod_{k<n} (1 - a q^k)`.
///
/// The infinite product stops at the first `K` with
/// `|a| |q|^K / (1 - |q|) < policy.epsilon`.
pub fn pochhammer(a: f64, q: f64, n: Terms, policy: &TruncationPolicy) -> Result<f64> {
    match n {
        Terms::Finite(n) => {
            let mut acc = 1.0;
            let mut aq = a;
            for _ in 0..n {
                acc *= 1.0 - aq;
                aq *= q;
            }
            Ok(acc)
        }
        Terms::Infinite => {
            if q.abs() >= 1.0 || !q.is_finite() {
                return Err(QGaussError::NonConvergent(format!(
                    "infinite Pochhammer product needs |q| < 1, got q = {q}"
                )));
            }
            let tail_scale = 1.0 / (1.0 - q.abs());
            let mut acc = 1.0;
            let mut aq = a;
            for _ in 0..MAX_INFINITE_TERMS {
                if aq.abs() * tail_scale < policy.epsilon {
                    return Ok(acc);
                }
                acc *= 1.0 - aq;
                aq *= q;
            }
            Err(QGaussError::NonConvergent(format!(
                "(a; q)_inf with a = {a}, q = {q} did not reach eps = {:e}",
                policy.epsilon
            )))
        }
    }
}

fn check_nome(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(QGaussError::NonConvergent(format!(
            "theta functions are evaluated for nome q in (0, 1), got {q}"
        )))
    }
}

/// `theta_3(z|q) = 1 + 2 sum_{n>=1} q^(n^2) cos(2 pi n z)` (period-1 argument).
pub fn theta3(z: f64, q: f64, policy: &TruncationPolicy) -> Result<f64> {
    check_nome(q)?;
    let mut sum = 1.0;
    for n in 1..MAX_INFINITE_TERMS {
        let nf = n as f64;
        let weight = 2.0 * q.powf(nf * nf);
        if weight < policy.epsilon {
            return Ok(sum);
        }
        sum += weight * (2.0 * PI * nf * z).cos();
    }
    Err(QGaussError::NonConvergent("theta3 series".into()))
}

/// `theta_2(z|q) = 2 sum_{n>=0} q^((n+1/2)^2) cos((2n+1) pi z)` (period-1 argument).
pub fn theta2(z: f64, q: f64, policy: &TruncationPolicy) -> Result<f64> {
    check_nome(q)?;
    let mut sum = 0.0;
    for n in 0..MAX_INFINITE_TERMS {
        let h = n as f64 + 0.5;
        let weight = 2.0 * q.powf(h * h);
        if weight < policy.epsilon {
            return Ok(sum);
        }
        sum += weight * ((2.0 * h) * PI * z).cos();
    }
    Err(QGaussError::NonConvergent("theta2 series".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> TruncationPolicy {
        TruncationPolicy::new(1e-17)
    }

    #[test]
    fn q_parameter_kinds() {
        assert_eq!(QParameter::new(-1.0).unwrap().kind(), QKind::TwoPoint);
        assert_eq!(QParameter::new(1.0).unwrap().kind(), QKind::Normal);
        assert_eq!(QParameter::new(0.3).unwrap().kind(), QKind::Continuous);
        assert!(QParameter::new(1.01).is_err());
        assert!(QParameter::new(f64::NAN).is_err());
        assert_eq!(QParameter::new(0.0).unwrap().support_halfwidth(), 2.0);
        assert_eq!(QParameter::new(-1.0).unwrap().support_halfwidth(), 1.0);
        assert!(QParameter::new(1.0).unwrap().support_halfwidth().is_infinite());
    }

    #[test]
    fn halfwidth_increases_with_q() {
        let mut prev = 0.0;
        for i in -99..100 {
            let w = QParameter::new(i as f64 / 100.0).unwrap().support_halfwidth();
            assert!(w > prev);
            prev = w;
        }
    }

    #[test]
    fn q_numbers() {
        assert_eq!(q_number(3, 0.5), 1.75);
        assert_eq!(q_number(0, 0.7), 0.0);
        for n in 0..20 {
            assert_eq!(q_number(n, 1.0), n as f64);
        }
        assert_eq!(q_number(4, -1.0), 0.0);
        assert_eq!(q_number(5, -1.0), 1.0);
    }

    #[test]
    fn q_factorials() {
        assert_eq!(q_factorial(0, 0.4), 1.0);
        assert_eq!(q_factorial(3, 0.0), 1.0);
        assert_eq!(q_factorial(3, 1.0), 6.0);
        assert_eq!(q_factorial(10, 1.0), 3_628_800.0);
    }

    #[test]
    fn q_binomials() {
        let q = 0.37;
        assert!((q_binomial(2, 1, q) - (1.0 + q)).abs() < 1e-15);
        assert_eq!(q_binomial(4, 2, 1.0), 6.0);
        assert_eq!(q_binomial(3, 5, q), 0.0);
        assert_eq!(q_binomial(3, -1, q), 0.0);
        // [4,2]_q = 1 + q + 2q^2 + q^3 + q^4
        let q = -1.0;
        assert_eq!(q_binomial(4, 2, q), 2.0);
        assert_eq!(q_binomial(30, 15, 1.0), 155_117_520.0);
    }

    #[test]
    fn q_binomial_matches_factorial_ratio() {
        for &q in &[-0.9, -0.5, 0.2, 0.8] {
            for n in 0..15 {
                for k in 0..=n {
                    let ratio =
                        q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q));
                    let b = q_binomial(n, k as i64, q);
                    assert!((b - ratio).abs() <= 1e-11 * ratio.abs().max(1.0), "{n} {k} {q}");
                }
            }
        }
    }

    #[test]
    fn q_binomial_large_n_paths_agree() {
        let (n, k, q) = (600usize, 7usize, 0.5f64);
        let pascal = {
            let mut row = vec![0.0; k + 1];
            row[0] = 1.0;
            for _ in 1..=n {
                for j in (1..=k).rev() {
                    row[j] = row[j - 1] + q.powi(j as i32) * row[j];
                }
            }
            row[k]
        };
        let b = q_binomial(n, k as i64, q);
        assert!((b - pascal).abs() < 1e-12 * pascal);
    }

    #[test]
    fn pochhammer_values() {
        let p = TruncationPolicy::default();
        assert_eq!(pochhammer(0.5, 0.5, Terms::Finite(2), &p).unwrap(), 0.375);
        assert_eq!(pochhammer(0.3, 0.9, Terms::Finite(0), &p).unwrap(), 1.0);
        assert!(pochhammer(0.5, 1.0, Terms::Infinite, &p).is_err());
        assert!(pochhammer(0.5, -1.2, Terms::Infinite, &p).is_err());
    }

    #[test]
    fn pochhammer_q_q_is_scaled_factorial() {
        let p = TruncationPolicy::default();
        for i in -9..=9 {
            let q = i as f64 / 10.0;
            for n in 0..=30 {
                let lhs = pochhammer(q, q, Terms::Finite(n), &p).unwrap();
                let rhs = (1.0 - q).powi(n as i32) * q_factorial(n, q);
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300),
                    "q={q} n={n}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn infinite_pochhammer_tail_is_self_consistent() {
        for &(a, q) in &[(0.5, 0.5), (0.9, 0.9), (-0.7, -0.8), (0.3, 0.97)] {
            let mut eps = 1e-4;
            let mut prev = pochhammer(a, q, Terms::Infinite, &TruncationPolicy::new(eps)).unwrap();
            for _ in 0..10 {
                eps /= 2.0;
                let next = pochhammer(a, q, Terms::Infinite, &TruncationPolicy::new(eps)).unwrap();
                assert!((next - prev).abs() < 2.0 * eps, "a={a} q={q} eps={eps}");
                prev = next;
            }
        }
    }

    #[test]
    fn theta3_direct_series() {
        // 1 + 2(0.1 + 0.1^4 + 0.1^9 + ...)
        let v = theta3(0.0, 0.1, &tight()).unwrap();
        assert!((v - 1.200_200_002).abs() < 1e-12);
        assert!(theta3(0.5, 0.3, &tight()).unwrap() < theta3(0.0, 0.3, &tight()).unwrap());
        assert!(theta3(0.0, 0.0, &tight()).is_err());
        assert!(theta2(0.0, 1.0, &tight()).is_err());
    }

    #[test]
    fn theta2_vanishes_at_half_period() {
        assert!(theta2(0.5, 0.4, &tight()).unwrap().abs() < 1e-15);
        assert!(theta2(0.0, 0.4, &tight()).unwrap() > 0.0);
    }
}
