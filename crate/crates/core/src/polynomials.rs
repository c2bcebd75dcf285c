//! Chebyshev polynomials of the second kind and the two q-Hermite families,
//! evaluated pointwise by forward three-term recurrence.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PolynomialFamily {
    /// `U_{n+1} = 2x U_n - U_{n-1}`.
    ChebyshevU,
    /// `H_{n+1} = x H_n - [n]_q H_{n-1}`.
    QHermiteH { q: f64 },
    /// `h_{n+1} = 2t h_n - (1 - q^n) h_{n-1}`.
    ContinuousQHermiteh { q: f64 },
}

impl PolynomialFamily {
    /// Value of the degree-`n` member at `x`; `n = -1` gives 0.
    pub fn eval(&self, n: i64, x: f64) -> f64 {
        match *self {
            PolynomialFamily::ChebyshevU => chebyshev_u(n, x),
            PolynomialFamily::QHermiteH { q } => q_hermite(n, x, q),
            PolynomialFamily::ContinuousQHermiteh { q } => continuous_q_hermite(n, x, q),
        }
    }

    /// Values of degrees `0..=max_degree` at `x`.
    pub fn eval_all(&self, max_degree: usize, x: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(max_degree + 1);
        let (mut prev, mut cur) = (0.0, 1.0);
        out.push(cur);
        // recurrence: p_{n+1} = a x p_n - b_n p_{n-1}
        let mut qpow = 1.0;
        let mut qnum = 0.0;
        for n in 0..max_degree {
            let next = match *self {
                PolynomialFamily::ChebyshevU => 2.0 * x * cur - prev,
                PolynomialFamily::QHermiteH { q } => {
                    // [n]_q built incrementally
                    if n > 0 {
                        qnum += qpow;
                        qpow *= q;
                    }
                    x * cur - qnum * prev
                }
                PolynomialFamily::ContinuousQHermiteh { q } => {
                    let b = 1.0 - qpow;
                    qpow *= q;
                    2.0 * x * cur - b * prev
                }
            };
            prev = cur;
            cur = next;
            out.push(cur);
        }
        out
    }

    /// Degree-`n` values over a grid of abscissae.
    pub fn eval_grid(&self, n: i64, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(n, x)).collect()
    }
}

/// Chebyshev polynomial of the second kind, `U_n(cos t) = sin((n+1)t)/sin t`.
pub fn chebyshev_u(n: i64, x: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Trigonometric form of `U_n`, valid for `|x| < 1`. Only used to cross-check
/// the recurrence.
pub fn chebyshev_u_trig(n: i64, x: f64) -> f64 {
    let t = x.acos();
    ((n + 1) as f64 * t).sin() / t.sin()
}

/// q-Hermite polynomial `H_n(x|q)`.
pub fn q_hermite(n: i64, x: f64, q: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    // [k]_q for k = 0, 1, ...
    let mut qnum = 0.0;
    let mut qpow = 1.0;
    for _ in 0..n {
        let next = x * cur - qnum * prev;
        prev = cur;
        cur = next;
        qnum += qpow;
        qpow *= q;
    }
    cur
}

/// Continuous q-Hermite polynomial `h_n(t|q)`.
pub fn continuous_q_hermite(n: i64, t: f64, q: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut qpow = 1.0;
    for _ in 0..n {
        let next = 2.0 * t * cur - (1.0 - qpow) * prev;
        prev = cur;
        cur = next;
        qpow *= q;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::q_binomial;

    #[test]
    fn chebyshev_small_cases() {
        assert_eq!(chebyshev_u(-1, 0.3), 0.0);
        assert_eq!(chebyshev_u(0, 0.3), 1.0);
        assert_eq!(chebyshev_u(2, 0.0), -1.0);
        for k in 0..50 {
            assert_eq!(chebyshev_u(2 * k, 1.0), (2 * k + 1) as f64);
        }
        let cycle = [1.0, 0.0, -1.0];
        for n in 0..30 {
            let v = chebyshev_u(2 * n, 0.5);
            assert!((v - cycle[(n % 3) as usize]).abs() < 1e-12, "n={n}: {v}");
        }
    }

    #[test]
    fn chebyshev_trig_agreement() {
        let m = 4001;
        for n in [0, 1, 5, 17, 64, 123, 200] {
            for i in 0..m {
                let x = (1.0 - 1e-6) * (-1.0 + 2.0 * i as f64 / (m - 1) as f64);
                let a = chebyshev_u(n, x);
                let b = chebyshev_u_trig(n, x);
                assert!((a - b).abs() <= 1e-10 * (n as f64 + 1.0), "n={n} x={x}: {a} {b}");
            }
        }
    }

    #[test]
    fn chebyshev_sup_norms() {
        let m = 200_001;
        for n in [1i64, 4, 9, 20] {
            let mut sup_u: f64 = 0.0;
            let mut sup_w: f64 = 0.0;
            for i in 0..m {
                let x = -1.0 + 2.0 * i as f64 / (m - 1) as f64;
                let u = chebyshev_u(n, x);
                sup_u = sup_u.max(u.abs());
                sup_w = sup_w.max((1.0 - x * x).sqrt() * u.abs());
            }
            assert_eq!(sup_u, (n + 1) as f64);
            assert!((sup_w - 1.0).abs() < 1e-6, "n={n}: {sup_w}");
        }
    }

    #[test]
    fn q_hermite_cases() {
        assert_eq!(q_hermite(2, 0.0, 0.4), -1.0);
        assert!((q_hermite(3, 1.0, 0.5) + 1.5).abs() < 1e-15);
        for n in -1..25 {
            for &x in &[-3.1, -1.0, 0.0, 0.7, 1.9] {
                let a = q_hermite(n, x, 0.0);
                let b = chebyshev_u(n, x / 2.0);
                assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
            }
        }
        // q = 1 gives the probabilists' Hermite polynomials: He_4 = x^4 - 6x^2 + 3
        let x: f64 = 1.3;
        assert!((q_hermite(4, x, 1.0) - (x.powi(4) - 6.0 * x * x + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn q_hermite_parity() {
        for n in 0..15 {
            for &q in &[-0.7, 0.2, 0.9] {
                for &x in &[0.3, 1.1, 2.5] {
                    let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((q_hermite(n, -x, q) - s * q_hermite(n, x, q)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn continuous_q_hermite_cases() {
        assert!((continuous_q_hermite(1, 0.3, 0.8) - 0.6).abs() < 1e-15);
        assert_eq!(continuous_q_hermite(2, 0.0, 0.5), -0.5);
        // rescaling to H_n
        for &q in &[-0.6_f64, 0.0, 0.45, 0.9] {
            for n in 0..15 {
                for &t in &[-0.9, 0.1, 0.6] {
                    let h = continuous_q_hermite(n, t, q);
                    let scaled =
                        (1.0 - q).powf(n as f64 / 2.0) * q_hermite(n, 2.0 * t / (1.0 - q).sqrt(), q);
                    assert!((h - scaled).abs() < 1e-11 * h.abs().max(1.0), "q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn continuous_q_hermite_trig_sum() {
        for &q in &[-0.8, 0.3, 0.75] {
            for n in 0..12usize {
                for &theta in &[0.1f64, 0.9, 2.0] {
                    let sum: f64 = (0..=n)
                        .map(|k| q_binomial(n, k as i64, q) * ((n as f64 - 2.0 * k as f64) * theta).cos())
                        .sum();
                    let h = continuous_q_hermite(n as i64, theta.cos(), q);
                    assert!((h - sum).abs() < 1e-11 * sum.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn batch_matches_pointwise() {
        let fams = [
            PolynomialFamily::ChebyshevU,
            PolynomialFamily::QHermiteH { q: 0.35 },
            PolynomialFamily::ContinuousQHermiteh { q: -0.4 },
        ];
        for fam in fams {
            let all = fam.eval_all(12, 0.77);
            for (n, v) in all.iter().enumerate() {
                assert!((v - fam.eval(n as i64, 0.77)).abs() < 1e-13);
            }
            assert_eq!(fam.eval(-1, 0.77), 0.0);
            assert_eq!(fam.eval(0, 0.77), 1.0);
        }
    }
}
