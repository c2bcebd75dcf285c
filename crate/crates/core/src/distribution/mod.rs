//! The q-Gaussian law: density in product and Chebyshev-expansion form,
//! distribution function, quantile, moments and modality.

mod modality;
mod moments;
mod truncation;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{QGaussError, Result};
use crate::qseries::{QKind, QParameter};
use crate::roots::{solve_increasing, BRACKET_WIDTH};
use crate::validation::GaussLegendre;

pub use modality::{bimodality_threshold_series, is_bimodal, mode_threshold, pdf_second_derivative_at_zero};
pub use moments::{moment, moments_up_to};
pub use truncation::{
    cdf_tail_bound, pdf_tail_bound, terms_for_tolerance_cdf, terms_for_tolerance_pdf,
    TermsEstimate, TruncationPolicy, DEFAULT_EPSILON, DEFAULT_MAX_TERMS, MAX_SERIES_ABS_Q,
    MIN_TERMS,
};

/// Tail threshold for the reference product form.
const PRODUCT_EPSILON: f64 = 1e-17;
/// Beyond this |z| the product form pulls the vanishing square-root factor
/// out of the k = 0 term instead of dividing by it.
const ENDPOINT_SWITCH: f64 = 1.0 - 1e-8;
/// Below this tail probability the distribution function is integrated from
/// the product density; the series value there is a difference of O(1)
/// terms and carries only absolute accuracy.
const TAIL_SWITCH: f64 = 1e-3;
const TAIL_NODES: usize = 64;

fn tail_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(TAIL_NODES))
}

/// Where a law puts its mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Support {
    Interval { lo: f64, hi: f64 },
    RealLine,
    TwoPoint { lo: f64, hi: f64 },
}

impl Support {
    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Support::Interval { lo, hi } => x >= lo && x <= hi,
            Support::RealLine => x.is_finite(),
            Support::TwoPoint { lo, hi } => x == lo || x == hi,
        }
    }
}

pub fn support(qp: QParameter) -> Support {
    match qp.kind() {
        QKind::TwoPoint => Support::TwoPoint { lo: -1.0, hi: 1.0 },
        QKind::Normal => Support::RealLine,
        QKind::Continuous => {
            let r = qp.support_halfwidth();
            Support::Interval { lo: -r, hi: r }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DensityForm {
    Product,
    Expansion,
    /// Closed-form normal density (q = 1).
    Normal,
}

/// One density value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityEvaluation {
    pub x: f64,
    /// Density clamped at zero.
    pub value: f64,
    /// Unclamped series value; a truncated expansion can dip slightly below 0.
    pub raw: f64,
    pub form: DensityForm,
    pub terms_used: usize,
    pub error_bound: f64,
}

/// A q-Gaussian law with its series lengths resolved and the coefficients
/// `q^C(k,2)` cached. Immutable once built.
#[derive(Debug, Clone)]
pub struct QGaussian {
    param: QParameter,
    policy: TruncationPolicy,
    pdf_terms: usize,
    cdf_terms: usize,
    pdf_bound: f64,
    cdf_bound: f64,
    /// `coeffs[k-1] = (-1)^(k-1) q^C(k,2)` for `k = 1..`.
    coeffs: Vec<f64>,
    /// `q^k` for `k = 1..`, aligned with `coeffs`.
    qpow: Vec<f64>,
}

impl QGaussian {
    pub fn new(q: f64) -> Result<Self> {
        Self::with_policy(QParameter::new(q)?, TruncationPolicy::default())
    }

    pub fn with_policy(param: QParameter, policy: TruncationPolicy) -> Result<Self> {
        policy.validate()?;
        let q = param.value();
        let (pdf_terms, cdf_terms) = match param.kind() {
            QKind::Continuous if q == 0.0 => (MIN_TERMS, MIN_TERMS),
            QKind::Continuous => {
                if q.abs() > MAX_SERIES_ABS_Q {
                    let needed = terms_for_tolerance_pdf(q, policy.epsilon)?.resolved_n;
                    return Err(QGaussError::TermBudgetExceeded {
                        q,
                        eps: policy.epsilon,
                        needed,
                        max_terms: policy.max_terms,
                        hint: "; |q| above 0.999 is not served by the series, use q = 1 or q = -1 closed forms",
                    });
                }
                let n_pdf = terms_for_tolerance_pdf(q, policy.epsilon)?.resolved_n;
                let n_cdf = terms_for_tolerance_cdf(q, policy.epsilon)?.resolved_n;
                policy.resolve(q, n_pdf)?;
                policy.resolve(q, n_cdf)?;
                (n_pdf, n_cdf)
            }
            _ => (0, 0),
        };
        let len = pdf_terms.max(cdf_terms);
        let mut coeffs = Vec::with_capacity(len);
        let mut qpow = Vec::with_capacity(len);
        let mut c = 1.0; // q^C(k,2)
        let mut p = q; // q^k
        for k in 1..=len {
            coeffs.push(if k % 2 == 1 { c } else { -c });
            qpow.push(p);
            c *= p;
            p *= q;
        }
        let pdf_bound = if q == 0.0 || param.kind() != QKind::Continuous {
            0.0
        } else {
            pdf_tail_bound(q, pdf_terms as f64)
        };
        let cdf_bound = if q == 0.0 || param.kind() != QKind::Continuous {
            0.0
        } else {
            cdf_tail_bound(q, cdf_terms as f64)
        };
        Ok(QGaussian {
            param,
            policy,
            pdf_terms,
            cdf_terms,
            pdf_bound,
            cdf_bound,
            coeffs,
            qpow,
        })
    }

    pub fn q(&self) -> f64 {
        self.param.value()
    }

    pub fn param(&self) -> QParameter {
        self.param
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    /// Series length used for the density expansion.
    pub fn pdf_terms(&self) -> usize {
        self.pdf_terms
    }

    pub fn cdf_terms(&self) -> usize {
        self.cdf_terms
    }

    /// Reported sup-error of the truncated density expansion.
    pub fn pdf_error_bound(&self) -> f64 {
        self.pdf_bound
    }

    pub fn cdf_error_bound(&self) -> f64 {
        self.cdf_bound
    }

    pub fn support(&self) -> Support {
        support(self.param)
    }

    fn scale(&self) -> f64 {
        (1.0 - self.q()).sqrt()
    }

    /// Maps x to the Chebyshev argument `z = x sqrt(1-q) / 2`.
    #[inline]
    fn to_z(&self, x: f64) -> f64 {
        x * self.scale() / 2.0
    }

    fn continuous_only(&self) -> Result<()> {
        match self.param.kind() {
            QKind::TwoPoint => Err(QGaussError::UnsupportedKind("two-point (q = -1)")),
            _ => Ok(()),
        }
    }

    /// Density from the infinite-product definition.
    pub fn pdf_product(&self, x: f64) -> Result<DensityEvaluation> {
        self.continuous_only()?;
        if self.param.kind() == QKind::Normal {
            return Ok(normal_evaluation(x));
        }
        let q = self.q();
        let z = self.to_z(x);
        let mut eval = DensityEvaluation {
            x,
            value: 0.0,
            raw: 0.0,
            form: DensityForm::Product,
            terms_used: 0,
            error_bound: 0.0,
        };
        if !(z.abs() < 1.0) {
            return Ok(eval);
        }
        let four_z2 = 4.0 * z * z;
        let tail_scale = 8.0 / (1.0 - q.abs());
        let mut prod = 1.0;
        let mut qk = q;
        let mut k = 0;
        while qk.abs() * tail_scale >= PRODUCT_EPSILON {
            let onep = 1.0 + qk;
            prod *= (onep * onep - four_z2 * qk) * (1.0 - qk);
            qk *= q;
            k += 1;
        }
        // 4 - (1-q) x^2 = 4 (1-z)(1+z)
        let s = 4.0 * (1.0 - z) * (1.0 + z);
        let value = if z.abs() > ENDPOINT_SWITCH {
            self.scale() / (2.0 * PI) * s.sqrt() * prod
        } else {
            self.scale() / (2.0 * PI * s.sqrt()) * s * prod
        };
        eval.value = value.max(0.0);
        eval.raw = value;
        eval.terms_used = k;
        eval.error_bound = value.abs() * qk.abs() * tail_scale;
        Ok(eval)
    }

    /// Density from the truncated Chebyshev-U expansion.
    pub fn pdf_expansion(&self, x: f64) -> Result<DensityEvaluation> {
        self.continuous_only()?;
        if self.param.kind() == QKind::Normal {
            return Ok(normal_evaluation(x));
        }
        let z = self.to_z(x);
        let mut eval = DensityEvaluation {
            x,
            value: 0.0,
            raw: 0.0,
            form: DensityForm::Expansion,
            terms_used: self.pdf_terms,
            error_bound: self.pdf_bound,
        };
        if !(z.abs() < 1.0) {
            return Ok(eval);
        }
        let raw = self.scale() / PI * (1.0 - z * z).sqrt() * self.even_series(z);
        eval.raw = raw;
        eval.value = raw.max(0.0);
        Ok(eval)
    }

    /// `sum_{k=1}^{n} (-1)^(k-1) q^C(k,2) U_{2k-2}(z)`.
    pub(crate) fn even_series(&self, z: f64) -> f64 {
        let (mut u_prev, mut u) = (0.0, 1.0); // U_{m-1}, U_m with m = 0
        let mut sum = 0.0;
        let two_z = 2.0 * z;
        for (k, c) in self.coeffs[..self.pdf_terms].iter().enumerate() {
            if k > 0 {
                // advance m by two
                let u1 = two_z * u - u_prev;
                let u2 = two_z * u1 - u;
                u_prev = u1;
                u = u2;
            }
            sum += c * u;
        }
        sum
    }

    /// Density: the product form for |q| < 1, the normal density at q = 1.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        Ok(self.pdf_product(x)?.value)
    }

    /// Distribution function from the truncated arcsine-plus-series form.
    /// Tail probabilities below 1e-3 come from quadrature of the product
    /// density instead, which keeps them accurate relative to their size.
    pub fn cdf(&self, y: f64) -> f64 {
        match self.param.kind() {
            QKind::TwoPoint => {
                if y < -1.0 {
                    0.0
                } else if y < 1.0 {
                    0.5
                } else {
                    1.0
                }
            }
            QKind::Normal => normal_cdf(y),
            QKind::Continuous => {
                if y.is_nan() {
                    return f64::NAN;
                }
                let z = self.to_z(y);
                if z <= -1.0 {
                    return 0.0;
                }
                if z >= 1.0 {
                    return 1.0;
                }
                let series = self.odd_series(z);
                let v = 0.5 + z.asin() / PI + (1.0 - z * z).sqrt() / PI * series;
                if v < TAIL_SWITCH {
                    self.lower_tail(z)
                } else if v > 1.0 - TAIL_SWITCH {
                    1.0 - self.lower_tail(-z)
                } else {
                    v.clamp(0.0, 1.0)
                }
            }
        }
    }

    /// `P(X <= R z)` for `z < 0`, integrating over `z = -cos(phi)` so the
    /// square-root edge becomes smooth.
    fn lower_tail(&self, z: f64) -> f64 {
        let r = self.param.support_halfwidth();
        let top = (-z).clamp(-1.0, 1.0).acos();
        let f = |phi: f64| {
            let v = self.pdf_product(-r * phi.cos()).map(|e| e.value).unwrap_or(0.0);
            v * r * phi.sin()
        };
        tail_rule().integrate(f, 0.0, top).max(0.0)
    }

    /// `sum_{k=1}^{n} (-1)^(k-1) q^C(k,2) (1 + q^k) U_{2k-1}(z) / (2k)`.
    fn odd_series(&self, z: f64) -> f64 {
        let two_z = 2.0 * z;
        let (mut u_prev, mut u) = (1.0, two_z); // U_0, U_1
        let mut sum = 0.0;
        for k in 1..=self.cdf_terms {
            if k > 1 {
                let u1 = two_z * u - u_prev;
                let u2 = two_z * u1 - u;
                u_prev = u1;
                u = u2;
            }
            sum += self.coeffs[k - 1] * (1.0 + self.qpow[k - 1]) * u / (2 * k) as f64;
        }
        sum
    }

    /// Inverse of [`QGaussian::cdf`]; odd in `p - 1/2` by construction.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(QGaussError::InvalidArgument(format!(
                "quantile level must lie in (0, 1), got {p}"
            )));
        }
        match self.param.kind() {
            QKind::TwoPoint => Ok(if p <= 0.5 { -1.0 } else { 1.0 }),
            QKind::Normal => {
                if p > 0.5 {
                    return Ok(-self.quantile(1.0 - p)?);
                }
                Ok(solve_increasing(
                    |x| normal_cdf(x) - p,
                    Some(normal_pdf),
                    -40.0,
                    0.0,
                    BRACKET_WIDTH,
                ))
            }
            QKind::Continuous => {
                if p == 0.5 {
                    return Ok(0.0);
                }
                if p > 0.5 {
                    return Ok(-self.quantile(1.0 - p)?);
                }
                let r = self.param.support_halfwidth();
                Ok(solve_increasing(
                    |x| self.cdf(x) - p,
                    Some(|x| self.pdf_expansion(x).map(|e| e.raw).unwrap_or(0.0)),
                    -r,
                    0.0,
                    BRACKET_WIDTH,
                ))
            }
        }
    }

    /// Raw moment `E X^r`.
    pub fn moment(&self, r: usize) -> f64 {
        moment(r, self.q())
    }
}

fn normal_evaluation(x: f64) -> DensityEvaluation {
    let v = normal_pdf(x);
    DensityEvaluation {
        x,
        value: v,
        raw: v,
        form: DensityForm::Normal,
        terms_used: 0,
        error_bound: 0.0,
    }
}

pub(crate) fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub(crate) fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

fn handle(qp: QParameter, policy: &TruncationPolicy) -> Result<QGaussian> {
    QGaussian::with_policy(qp, *policy)
}

pub fn pdf_product(x: f64, qp: QParameter, policy: &TruncationPolicy) -> Result<DensityEvaluation> {
    handle(qp, policy)?.pdf_product(x)
}

pub fn pdf_expansion(x: f64, qp: QParameter, policy: &TruncationPolicy) -> Result<DensityEvaluation> {
    handle(qp, policy)?.pdf_expansion(x)
}

pub fn cdf(y: f64, qp: QParameter, policy: &TruncationPolicy) -> Result<f64> {
    Ok(handle(qp, policy)?.cdf(y))
}

pub fn quantile(p: f64, qp: QParameter, policy: &TruncationPolicy) -> Result<f64> {
    handle(qp, policy)?.quantile(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law(q: f64) -> QGaussian {
        QGaussian::new(q).unwrap()
    }

    fn semicircle(x: f64) -> f64 {
        (4.0 - x * x).max(0.0).sqrt() / (2.0 * PI)
    }

    #[test]
    fn supports() {
        assert_eq!(
            support(QParameter::new(0.0).unwrap()),
            Support::Interval { lo: -2.0, hi: 2.0 }
        );
        assert_eq!(support(QParameter::new(1.0).unwrap()), Support::RealLine);
        assert_eq!(
            support(QParameter::new(-1.0).unwrap()),
            Support::TwoPoint { lo: -1.0, hi: 1.0 }
        );
    }

    #[test]
    fn semicircle_values() {
        let f = law(0.0);
        assert!((f.pdf(0.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!((f.pdf(1.0).unwrap() - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
        assert!((f.pdf(1.0).unwrap() - 0.27566).abs() < 1e-5);
        for i in 0..=100 {
            let x = -2.0 + 4.0 * i as f64 / 100.0;
            let e = f.pdf_expansion(x).unwrap();
            assert!((e.value - semicircle(x)).abs() < 1e-15);
        }
        let c = f.cdf(1.0);
        let want = 0.5 + (0.5f64).asin() / PI + 3f64.sqrt() / (4.0 * PI);
        assert!((c - want).abs() < 1e-15);
        assert!((c - 0.80450).abs() < 1e-5);
    }

    #[test]
    fn zero_at_and_beyond_endpoints() {
        for &q in &[-0.7, 0.0, 0.5, 0.9] {
            let f = law(q);
            let r = 2.0 / (1.0 - q).sqrt();
            for x in [r, -r, r * 1.01, -5.0 * r] {
                assert_eq!(f.pdf_product(x).unwrap().value, 0.0);
                assert_eq!(f.pdf_expansion(x).unwrap().value, 0.0);
            }
            assert_eq!(f.cdf(r), 1.0);
            assert_eq!(f.cdf(-r), 0.0);
            assert_eq!(f.cdf(0.0), 0.5);
        }
    }

    #[test]
    fn near_endpoint_product_is_continuous() {
        let f = law(0.6);
        let r = 2.0 / 0.4f64.sqrt();
        // either side of the switch to the factored endpoint form
        for t in [1e-8 - 1e-12, 1e-8 + 1e-12, 1e-6, 1e-10, 1e-14] {
            for x in [r * (1.0 - t), -r * (1.0 - t)] {
                let a = f.pdf_product(x).unwrap().value;
                let b = f.pdf_expansion(x).unwrap().value;
                assert!(a > 0.0);
                assert!((a - b).abs() < 1e-12, "t={t}: {a} {b}");
            }
        }
    }

    #[test]
    fn product_and_expansion_agree_at_zero() {
        let qp = QParameter::new(0.5).unwrap();
        let pol = TruncationPolicy::new(1e-10);
        let a = pdf_product(0.0, qp, &pol).unwrap().value;
        let b = pdf_expansion(0.0, qp, &pol).unwrap().value;
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn product_and_expansion_agree_on_grid() {
        for &q in &[-0.9, -0.5, 0.5, 0.9] {
            let f = law(q);
            let r = 2.0 / (1.0 - q).sqrt();
            for i in 0..=1000 {
                let x = -r + 2.0 * r * i as f64 / 1000.0;
                let a = f.pdf_product(x).unwrap();
                let b = f.pdf_expansion(x).unwrap();
                assert!((a.value - b.value).abs() <= f.pdf_error_bound() + 1e-13, "q={q} x={x}");
            }
        }
    }

    #[test]
    fn two_point_law() {
        let f = law(-1.0);
        assert!(matches!(f.pdf(0.3), Err(QGaussError::UnsupportedKind(_))));
        assert_eq!(f.cdf(-1.5), 0.0);
        assert_eq!(f.cdf(-1.0), 0.5);
        assert_eq!(f.cdf(0.99), 0.5);
        assert_eq!(f.cdf(1.0), 1.0);
        assert_eq!(f.quantile(0.3).unwrap(), -1.0);
        assert_eq!(f.quantile(0.7).unwrap(), 1.0);
        assert_eq!(f.moment(4), 1.0);
    }

    #[test]
    fn normal_law() {
        let f = law(1.0);
        assert!((f.pdf(0.0).unwrap() - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-16);
        assert!((f.cdf(1.959963984540054) - 0.975).abs() < 1e-13);
        assert!((f.quantile(0.975).unwrap() - 1.959963984540054).abs() < 1e-10);
    }

    #[test]
    fn quantiles() {
        for &q in &[-0.9, 0.0, 0.5, 0.95] {
            let f = law(q);
            assert_eq!(f.quantile(0.5).unwrap(), 0.0);
            for i in 1..100 {
                let p = i as f64 / 100.0;
                let x = f.quantile(p).unwrap();
                assert!((f.cdf(x) - p).abs() <= 1e-12, "q={q} p={p}");
                assert!((x + f.quantile(1.0 - p).unwrap()).abs() < 1e-10);
            }
        }
        let x = law(0.0).quantile(0.80450).unwrap();
        assert!((x - 1.0).abs() < 1e-4);
        assert!(law(0.3).quantile(0.0).is_err());
        assert!(law(0.3).quantile(1.0).is_err());
    }

    #[test]
    fn large_abs_q_is_refused() {
        let e = QGaussian::new(0.9995).unwrap_err();
        assert!(matches!(e, QGaussError::TermBudgetExceeded { .. }));
        let tiny = TruncationPolicy::new(1e-12).with_max_terms(5);
        let e = QGaussian::with_policy(QParameter::new(0.9).unwrap(), tiny).unwrap_err();
        assert!(matches!(e, QGaussError::TermBudgetExceeded { .. }));
    }

    #[test]
    fn tails_are_monotone_and_match_series() {
        let f = law(0.9);
        let r = 2.0 / 0.1f64.sqrt();
        let mut prev = 0.0;
        for i in 0..=4000 {
            let v = f.cdf(-r + 2.0 * r * i as f64 / 4000.0);
            assert!(v >= prev, "i={i}");
            prev = v;
        }
        // both sides of the switch agree to the series accuracy
        let x = f.quantile(super::TAIL_SWITCH).unwrap();
        let z = x * 0.1f64.sqrt() / 2.0;
        let series = 0.5 + z.asin() / PI + (1.0 - z * z).sqrt() / PI * f.odd_series(z);
        assert!((f.lower_tail(z) - series).abs() < 1e-13);
        // 64 nodes against 200
        let fine = GaussLegendre::new(200);
        for z in [z, -0.9, -0.99] {
            let top = (-z).acos();
            let want = fine.integrate(|p| f.pdf(-r * p.cos()).unwrap() * r * p.sin(), 0.0, top);
            let got = f.lower_tail(z);
            assert!((got - want).abs() < 1e-12 * want, "{got:e} {want:e}");
        }
        let deep = f.cdf(-0.98 * r);
        assert!(deep > 0.0 && deep < 1e-12);
    }
}
