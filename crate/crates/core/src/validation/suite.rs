//! The validation suite run by `qgauss validate`.

use serde::Serialize;

use super::identities::*;
use super::quadrature::{integrate, DEFAULT_NODES};
use super::ks::ks_critical_value_01;
use crate::distribution::{
    moment, mode_threshold, pdf_second_derivative_at_zero, terms_for_tolerance_cdf,
    terms_for_tolerance_pdf, QGaussian, TruncationPolicy,
};
use crate::error::Result;
use crate::polynomials::q_hermite;
use crate::qseries::{q_factorial, QParameter};
use crate::sampler::{rejection_bound, sample, Envelope, SampleStream, SamplingMethod};

/// q values used when none are given.
pub const DEFAULT_SUITE_QS: [f64; 5] = [-0.6, -0.3, 0.3, 0.6, 0.9];

/// Density tail-bound table: rows eps = 1e-2, 1e-3, 1e-4; columns q.
pub const PDF_TABLE_QS: [f64; 5] = [0.1, 0.4, 0.7, 0.9, 0.99];
pub const PDF_TABLE: [(f64, [f64; 5]); 3] = [
    (1e-2, [3.59, 4.97, 7.71, 14.93, 56.73]),
    (1e-3, [4.04, 5.67, 8.73, 16.53, 60.86]),
    (1e-4, [4.76, 6.26, 9.61, 17.97, 64.70]),
];
/// Reference distribution-function table with the same layout.
pub const CDF_TABLE: [(f64, [f64; 5]); 3] = [
    (1e-2, [2.3, 3.3, 5.1, 9.5, 33.0]),
    (1e-3, [2.8, 4.2, 6.3, 11.5, 39.0]),
    (1e-4, [3.2, 4.73, 7.3, 13.3, 44.0]),
];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
    /// Gated checks that failed.
    pub failed: usize,
    /// Ungated checks (recorded for information).
    pub recorded: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
    pub summary: SuiteSummary,
}

impl SuiteReport {
    pub fn from_checks(checks: Vec<CheckResult>) -> Self {
        let summary = SuiteSummary {
            total: checks.len(),
            passed: checks.iter().filter(|c| c.passed).count(),
            failed: checks.iter().filter(|c| c.gated && !c.passed).count(),
            recorded: checks.iter().filter(|c| !c.gated).count(),
        };
        SuiteReport { checks, summary }
    }

    pub fn all_gated_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Normalisation, form agreement, moments and orthogonality for one q.
pub fn law_checks(q: f64) -> Result<Vec<CheckResult>> {
    let law = QGaussian::new(q)?;
    let mut out = Vec::new();
    let mass = integrate(|x| law.pdf(x).unwrap_or(0.0), q, DEFAULT_NODES);
    out.push(CheckResult::compare(format!("normalisation, q = {q}"), mass, 1.0, 1e-9));

    let r = 2.0 / (1.0 - q).sqrt();
    let mut sup: f64 = 0.0;
    for i in 0..=1000 {
        let x = -r + 2.0 * r * i as f64 / 1000.0;
        let d = (law.pdf_product(x)?.value - law.pdf_expansion(x)?.value).abs();
        sup = sup.max(d);
    }
    out.push(
        CheckResult::compare(format!("product vs expansion, q = {q}"), sup, 0.0, law.pdf_error_bound())
            .with_notes(format!("{} terms", law.pdf_terms())),
    );
    out.push(CheckResult::compare(format!("cdf at upper end, q = {q}"), law.cdf(r), 1.0, 1e-9));

    for order in [2usize, 4, 6, 8, 10] {
        let quad = integrate(|x| x.powi(order as i32) * law.pdf(x).unwrap_or(0.0), q, DEFAULT_NODES);
        out.push(CheckResult::compare(
            format!("moment {order} recursion vs quadrature, q = {q}"),
            moment(order, q),
            quad,
            1e-7,
        ));
    }

    let mut worst_cross: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    for m in 0..=8i64 {
        for n in m..=8i64 {
            let v = integrate(
                |x| q_hermite(m, x, q) * q_hermite(n, x, q) * law.pdf(x).unwrap_or(0.0),
                q,
                DEFAULT_NODES,
            );
            if m == n {
                let want = q_factorial(n as usize, q);
                worst_norm = worst_norm.max((v - want).abs() / want);
            } else {
                worst_cross = worst_cross.max(v.abs());
            }
        }
    }
    out.push(CheckResult::compare(format!("orthogonality, q = {q}"), worst_cross, 0.0, 1e-8));
    out.push(CheckResult::compare(
        format!("squared norms = [n]_q!, q = {q} (relative)"),
        worst_norm,
        0.0,
        1e-6,
    ));
    Ok(out)
}

/// Envelope domination on a 2001-point grid and the `M(0) = 1` identity.
pub fn envelope_checks(q: f64, policy: &TruncationPolicy) -> Result<Vec<CheckResult>> {
    let law = QGaussian::new(q)?;
    let env = Envelope::new(q)?;
    let m = rejection_bound(q, policy)?;
    let r = env.halfwidth();
    let mut worst: f64 = 0.0;
    for i in 0..=2000 {
        let x = -r + 2.0 * r * i as f64 / 2000.0;
        let excess = law.pdf(x)? - m * env.unnormalized_pdf(x) * (1.0 + 1e-9);
        worst = worst.max(excess);
    }
    Ok(vec![CheckResult::compare(format!("envelope domination, q = {q}"), worst, 0.0, 0.0)
        .with_notes(format!(
            "M(q) = {m:.17e}, unnormalised envelope mass {:.17e}",
            env.mass()
        ))])
}

pub fn table_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (eps, row) in PDF_TABLE {
        for (q, want) in PDF_TABLE_QS.iter().zip(row) {
            let got = terms_for_tolerance_pdf(*q, eps).map(|t| t.root).unwrap_or(f64::NAN);
            let c = CheckResult::compare(format!("N_pdf(q = {q}, eps = {eps:e})"), got, want, 0.05);
            // the tabulated 4.76 is not a root of the bound; 4.43 is
            out.push(if *q == 0.1 && eps == 1e-4 {
                c.recorded_only().with_notes("reference table value; lhs is the root of the bound")
            } else {
                c
            });
        }
    }
    for (eps, row) in CDF_TABLE {
        for (q, want) in PDF_TABLE_QS.iter().zip(row) {
            let got = terms_for_tolerance_cdf(*q, eps).map(|t| t.root).unwrap_or(f64::NAN);
            out.push(
                CheckResult::compare(format!("N_cdf(q = {q}, eps = {eps:e})"), got, want, 0.05)
                    .recorded_only()
                    .with_notes("reference table value; lhs is the root of the bound"),
            );
        }
    }
    out
}

pub fn modality_checks(policy: &TruncationPolicy) -> Result<Vec<CheckResult>> {
    let q0 = mode_threshold(policy);
    let below = pdf_second_derivative_at_zero(q0 - 1e-2, 1e-3)?;
    let above = pdf_second_derivative_at_zero(q0 + 1e-2, 1e-3)?;
    let flip = below > 0.0 && above < 0.0;
    Ok(vec![
        CheckResult::compare("bimodality threshold q0", q0, -0.107, 1e-3),
        CheckResult {
            name: "f''(0) changes sign across q0".into(),
            lhs: below,
            rhs: above,
            abs_error: if flip { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: flip,
            gated: true,
            notes: "lhs at q0 - 0.01, rhs at q0 + 0.01".into(),
        },
    ])
}

/// Fixed-seed KS runs of the default sampler; recorded only.
pub fn sampler_checks(q: f64, policy: &TruncationPolicy) -> Result<Vec<CheckResult>> {
    let n = 2000;
    let qp = QParameter::new(q)?;
    let report = sample(n, qp, SamplingMethod::Auto, &mut SampleStream::new(2024, 0), policy)?;
    let d = report.ks_statistic.unwrap_or(f64::NAN);
    Ok(vec![CheckResult {
        name: format!("KS {} n = {n}, q = {q}", report.method),
        lhs: d,
        rhs: ks_critical_value_01(n),
        abs_error: d,
        tolerance: ks_critical_value_01(n),
        passed: d <= ks_critical_value_01(n),
        gated: false,
        notes: format!("acceptance rate {:.4}", report.acceptance_rate),
    }])
}

/// Runs every check for the given q values.
pub fn run_suite(qs: &[f64]) -> Result<SuiteReport> {
    let tight = TruncationPolicy::new(1e-17);
    let mut checks = Vec::new();
    for &q in qs {
        QParameter::new(q)?;
        if q.abs() < 1.0 {
            checks.push(check_triple_product(q, &tight));
            checks.push(check_q3(q, &tight));
            checks.push(check_cubed_euler(q, &tight));
        }
        for n in 1..=8 {
            checks.push(check_qbinomial_sum(n, q));
        }
        if q.abs() < 1.0 && q.abs() <= crate::distribution::MAX_SERIES_ABS_Q {
            checks.extend(law_checks(q)?);
            checks.extend(envelope_checks(q, &tight)?);
            checks.extend(sampler_checks(q, &TruncationPolicy::default())?);
        }
        if q > 0.0 && q < 1.0 {
            let grid = default_theta_grid();
            checks.push(check_theta_form(q, &grid, &tight));
            checks.push(check_theta_constant(q, &grid, &tight));
        }
    }
    for r in [0.5, 0.9, 0.99] {
        for n in [3, 5, 10] {
            checks.push(check_tail_inequality(r, n));
        }
    }
    checks.extend(table_checks());
    checks.extend(modality_checks(&TruncationPolicy::default())?);
    Ok(SuiteReport::from_checks(checks))
}
