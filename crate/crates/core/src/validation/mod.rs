//! Numerical checks: Gauss-Legendre quadrature over the support, the
//! q-series identity suite, the theta-function cross-check and the
//! Kolmogorov-Smirnov statistic.

mod identities;
mod ks;
mod quadrature;
mod suite;

pub use identities::{
    check_cubed_euler, check_q3, check_qbinomial_sum, check_tail_inequality, check_theta_constant,
    check_theta_form, check_triple_product, default_theta_grid, theta_constant, theta_ratios,
    CheckResult, IDENTITY_TOLERANCE,
};
pub use ks::{ks_critical_value_01, ks_statistic};
pub use quadrature::{integrate, integrate_over, GaussLegendre, DEFAULT_NODES};
pub use suite::{
    envelope_checks, law_checks, modality_checks, run_suite, sampler_checks, table_checks,
    SuiteReport, SuiteSummary, CDF_TABLE, DEFAULT_SUITE_QS, PDF_TABLE, PDF_TABLE_QS,
};
