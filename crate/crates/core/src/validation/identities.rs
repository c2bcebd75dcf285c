//! q-series identities that follow from the density expansion, each checked
//! by evaluating the product side with Pochhammer products and the sum side
//! by direct term accumulation.

use std::f64::consts::PI;

use serde::Serialize;

use crate::distribution::{QGaussian, TruncationPolicy};
use crate::qseries::{pochhammer, q_binomial, theta2, theta3, QParameter, Terms};

/// Default tolerance for the identity checks.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Whether a failure of this check fails the suite; ungated checks are
    /// recorded only.
    pub gated: bool,
    pub notes: String,
}

impl CheckResult {
    pub fn compare(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let abs_error = (lhs - rhs).abs();
        CheckResult {
            name: name.into(),
            lhs,
            rhs,
            abs_error,
            tolerance,
            passed: abs_error <= tolerance,
            gated: true,
            notes: String::new(),
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn recorded_only(mut self) -> Self {
        self.gated = false;
        self
    }
}

/// Sums `sum_k term(k)` from `start`, stopping once `|term| < 1e-18` with at
/// least five terms taken.
fn series<F: Fn(u64) -> f64>(start: u64, term: F) -> f64 {
    let mut sum = 0.0;
    let mut taken = 0;
    for k in start.. {
        let t = term(k);
        sum += t;
        taken += 1;
        if taken >= 5 && t.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn qpow(q: f64, e: u64) -> f64 {
    if e > i32::MAX as u64 {
        return 0.0;
    }
    q.powi(e as i32)
}

fn binom2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

fn inf(a: f64, q: f64, policy: &TruncationPolicy) -> f64 {
    pochhammer(a, q, Terms::Infinite, policy).expect("|q| < 1")
}

/// `(-q; q)_inf (q^2; q^2)_inf = sum_{k>=1} q^C(k,2)`.
pub fn check_triple_product(q: f64, policy: &TruncationPolicy) -> CheckResult {
    let lhs = inf(-q, q, policy) * inf(q * q, q * q, policy);
    let rhs = series(1, |k| qpow(q, binom2(k)));
    CheckResult::compare(format!("triple product, q = {q}"), lhs, rhs, IDENTITY_TOLERANCE)
}

/// `(q^3; q^3)_inf = 1 + sum_{k>=1} (-1)^k (q^C(3k,2) + q^C(3k+1,2))`.
pub fn check_q3(q: f64, policy: &TruncationPolicy) -> CheckResult {
    let q3 = q * q * q;
    let lhs = inf(q3, q3, policy);
    let rhs = 1.0
        + series(1, |k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * (qpow(q, binom2(3 * k)) + qpow(q, binom2(3 * k + 1)))
        });
    CheckResult::compare(format!("(q^3;q^3) series, q = {q}"), lhs, rhs, IDENTITY_TOLERANCE)
}

/// `(q; q)_inf^3 = 1 + sum_{k>=2} (-1)^(k+1) (2k-1) q^C(k,2)`.
pub fn check_cubed_euler(q: f64, policy: &TruncationPolicy) -> CheckResult {
    let lhs = inf(q, q, policy).powi(3);
    let rhs = 1.0
        + series(2, |k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * (2 * k - 1) as f64 * qpow(q, binom2(k))
        });
    CheckResult::compare(format!("cubed Euler product, q = {q}"), lhs, rhs, IDENTITY_TOLERANCE)
}

/// `[2n, n]_q = sum_{k=1}^{n} (-1)^(k-1) (1 + q^k) q^C(k,2) [2n, n-k]_q`.
pub fn check_qbinomial_sum(n: usize, q: f64) -> CheckResult {
    let lhs = q_binomial(2 * n, n as i64, q);
    let rhs: f64 = (1..=n as u64)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * (1.0 + qpow(q, k)) * qpow(q, binom2(k)) * q_binomial(2 * n, n as i64 - k as i64, q)
        })
        .sum();
    let tol = IDENTITY_TOLERANCE * lhs.abs().max(1.0);
    CheckResult::compare(format!("central q-binomial sum, n = {n}, q = {q}"), lhs, rhs, tol)
}

/// `sum_{k>=n} (2k-1) r^C(k,2) <= 2n r^(n(n-1)/2) / (1-r^2)^2`.
pub fn check_tail_inequality(r: f64, n: usize) -> CheckResult {
    let n64 = n as u64;
    let lhs = series(n64, |k| (2 * k - 1) as f64 * qpow(r, binom2(k)));
    let rhs = 2.0 * n as f64 * qpow(r, binom2(n64)) / (1.0 - r * r).powi(2);
    let excess = (lhs - rhs).max(0.0);
    CheckResult {
        name: format!("tail inequality, r = {r}, n = {n}"),
        lhs,
        rhs,
        abs_error: excess,
        tolerance: 0.0,
        passed: excess <= 0.0,
        gated: true,
        notes: "passes when lhs <= rhs".into(),
    }
}

/// `C_q = sqrt(1-q) (q; q^2)_inf / (2 pi q^(1/4) (q^2; q^2)_inf)`.
pub fn theta_constant(q: f64, policy: &TruncationPolicy) -> f64 {
    (1.0 - q).sqrt() * inf(q, q * q, policy) / (2.0 * PI * q.powf(0.25) * inf(q * q, q * q, policy))
}

/// Ratios `f_H(2 sin(pi z)/sqrt(1-q)) / (theta_3(z) theta_2(z))` over the grid.
pub fn theta_ratios(q: f64, z_grid: &[f64], policy: &TruncationPolicy) -> Vec<f64> {
    let law = QGaussian::with_policy(QParameter::new(q).expect("q in (0,1)"), *policy).expect("law");
    z_grid
        .iter()
        .map(|&z| {
            let x = 2.0 * (PI * z).sin() / (1.0 - q).sqrt();
            let f = law.pdf(x).expect("continuous");
            f / (theta3(z, q, policy).expect("nome") * theta2(z, q, policy).expect("nome"))
        })
        .collect()
}

/// Relative condition number of the two theta series at `z`. The sum of
/// absolute terms of either series is its value at `z = 0`.
pub fn theta_condition(z: f64, q: f64, policy: &TruncationPolicy) -> f64 {
    let t3 = theta3(z, q, policy).expect("nome");
    let t2 = theta2(z, q, policy).expect("nome");
    theta3(0.0, q, policy).expect("nome") / t3.abs() + theta2(0.0, q, policy).expect("nome") / t2.abs()
}

/// Checks that the density over `theta_3 theta_2` is constant in `z`.
/// Gated on the relative spread of the ratio; the comparison of the constant
/// against `C_q` is reported in the notes. When cancellation in the theta
/// series alone could reach a tenth of the tolerance somewhere on the grid
/// (large q, z near 1/2) the check is recorded only.
pub fn check_theta_form(q: f64, z_grid: &[f64], policy: &TruncationPolicy) -> CheckResult {
    const TOL: f64 = 1e-9;
    let ratios = theta_ratios(q, z_grid, policy);
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = (max - min) / mean.abs();
    let cq = theta_constant(q, policy);
    let kappa = z_grid.iter().map(|&z| theta_condition(z, q, policy)).fold(0.0, f64::max);
    let mut c = CheckResult::compare(format!("theta ratio constancy, q = {q}"), spread, 0.0, TOL);
    c.notes = format!(
        "mean ratio {mean:.17e}, C_q {cq:.17e}, relative difference {:.3e}, series condition {kappa:.3e}",
        (mean - cq).abs() / cq
    );
    if kappa * f64::EPSILON > 0.1 * TOL {
        c.gated = false;
    }
    c
}

/// Compares the constant ratio against `C_q`; recorded, not gated.
pub fn check_theta_constant(q: f64, z_grid: &[f64], policy: &TruncationPolicy) -> CheckResult {
    let ratios = theta_ratios(q, z_grid, policy);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let cq = theta_constant(q, policy);
    CheckResult::compare(format!("theta constant vs C_q, q = {q}"), mean, cq, 1e-8 * cq)
        .recorded_only()
        .with_notes("period-1 theta convention")
}

/// Default z grid for the theta check: 41 points in (-1/2, 1/2).
pub fn default_theta_grid() -> Vec<f64> {
    (0..41).map(|i| -0.49 + 0.98 * i as f64 / 40.0).collect()
}
