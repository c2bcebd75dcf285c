//! The dominating density used by the rejection sampler.
//!
//! With `z = x sqrt(1-q) / 2` the envelope is a semicircle times the even
//! sextic `P(z) = prod_{j=1..3} ((1+q^j)^2 - 4 z^2 q^j)`. Writing `P` in the
//! basis `U_0, U_2, U_4, U_6` makes every term of the distribution function
//! integrable in closed form, and the `U_0` coefficient is the exact
//! normalising constant.
//!
//! The bound `M(q)` holds for the sextic scaled by `1 / ([9]_q [5]_q)`
//! (see [`Envelope::unnormalized_pdf`]), which is not a probability density:
//! its mass [`Envelope::mass`] is below 1 for q > 0 and above 1 for q < 0.

use std::f64::consts::PI;

use crate::distribution::TruncationPolicy;
use crate::error::{QGaussError, Result};
use crate::polynomials::chebyshev_u;
use crate::qseries::{pochhammer, q_number, Terms};
use crate::roots::{solve_increasing, BRACKET_WIDTH};

#[derive(Debug, Clone)]
pub struct Envelope {
    q: f64,
    scale: f64,
    /// `[9]_q [5]_q`
    norm: f64,
    /// semicircle mean of `P`, i.e. the `U_0` coefficient
    c0: f64,
    /// coefficients of `U_0, U_2, U_4, U_6` in `P`
    ucoef: [f64; 4],
}

impl Envelope {
    pub fn new(q: f64) -> Result<Self> {
        if !(q.abs() < 1.0) {
            return Err(QGaussError::InvalidArgument(format!(
                "the envelope density needs |q| < 1, got {q}"
            )));
        }
        let norm = q_number(9, q) * q_number(5, q);
        // P as a polynomial in w = z^2: prod (a_j - b_j w)
        let mut power = [1.0, 0.0, 0.0, 0.0];
        for j in 1..=3 {
            let qj = q.powi(j);
            let a = (1.0 + qj) * (1.0 + qj);
            let b = 4.0 * qj;
            let mut next = [0.0; 4];
            for (d, c) in power.iter().enumerate() {
                next[d] += a * c;
                if d + 1 < 4 {
                    next[d + 1] -= b * c;
                }
            }
            power = next;
        }
        let ucoef = power_to_even_chebyshev(&power);
        Ok(Envelope {
            q,
            scale: (1.0 - q).sqrt(),
            norm,
            c0: ucoef[0],
            ucoef,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn halfwidth(&self) -> f64 {
        2.0 / self.scale
    }

    /// `[9]_q [5]_q`, the scale under which `M(q)` bounds the density ratio.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Exact normalising constant of the sextic-times-semicircle shape.
    pub fn normalizer(&self) -> f64 {
        self.c0
    }

    /// Total mass of [`Envelope::unnormalized_pdf`].
    pub fn mass(&self) -> f64 {
        self.c0 / self.norm
    }

    /// Coefficients of `U_0, U_2, U_4, U_6` in the sextic factor.
    pub fn chebyshev_coefficients(&self) -> [f64; 4] {
        self.ucoef
    }

    #[inline]
    pub(crate) fn to_z(&self, x: f64) -> f64 {
        x * self.scale / 2.0
    }

    /// The sextic factor `P(z)`.
    pub(crate) fn poly(&self, z: f64) -> f64 {
        let z2 = 4.0 * z * z;
        (1..=3)
            .map(|j| {
                let qj = self.q.powi(j);
                (1.0 + qj) * (1.0 + qj) - z2 * qj
            })
            .product()
    }

    fn shape(&self, x: f64) -> f64 {
        let z = self.to_z(x);
        if !(z.abs() < 1.0) {
            return 0.0;
        }
        self.scale * ((1.0 - z) * (1.0 + z)).sqrt() * self.poly(z) / PI
    }

    /// Envelope probability density.
    pub fn pdf(&self, x: f64) -> f64 {
        self.shape(x) / self.c0
    }

    /// `sqrt((1-q)(4-(1-q)x^2)) P / (2 pi [9]_q [5]_q)`; equals
    /// `mass() * pdf(x)`.
    pub fn unnormalized_pdf(&self, x: f64) -> f64 {
        self.shape(x) / self.norm
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let y = self.to_z(x);
        if y.is_nan() {
            return f64::NAN;
        }
        if y <= -1.0 {
            return 0.0;
        }
        if y >= 1.0 {
            return 1.0;
        }
        let root = ((1.0 - y) * (1.0 + y)).sqrt();
        // int_{-1}^{y} sqrt(1-t^2) dt
        let mut acc = self.ucoef[0] * (PI / 4.0 + 0.5 * (y.asin() + y * root));
        for n in 1..=3usize {
            let nf = n as f64;
            let hi = chebyshev_u(2 * n as i64 + 1, y) / (4.0 * nf + 4.0);
            let lo = chebyshev_u(2 * n as i64 - 1, y) / (4.0 * nf);
            acc += self.ucoef[n] * root * (hi - lo);
        }
        (2.0 * acc / (PI * self.c0)).clamp(0.0, 1.0)
    }

    /// Solves `cdf(x) = u` by bisection with a Newton polish.
    pub fn inverse(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(QGaussError::InvalidArgument(format!(
                "envelope inverse needs u in (0, 1), got {u}"
            )));
        }
        if u == 0.5 {
            return Ok(0.0);
        }
        if u > 0.5 {
            return Ok(-self.inverse(1.0 - u)?);
        }
        Ok(solve_increasing(
            |x| self.cdf(x) - u,
            Some(|x| self.pdf(x)),
            -self.halfwidth(),
            0.0,
            BRACKET_WIDTH,
        ))
    }
}

/// Rewrites `sum_d p[d] z^(2d)` (degree <= 6) as `sum_n c[n] U_{2n}(z)`.
fn power_to_even_chebyshev(power: &[f64; 4]) -> [f64; 4] {
    // Horner in the U basis; multiplication by z maps U_m to (U_{m+1} + U_{m-1}) / 2
    let times_z = |c: &[f64; 8]| {
        let mut out = [0.0; 8];
        for m in 0..8 {
            if c[m] == 0.0 {
                continue;
            }
            if m + 1 < 8 {
                out[m + 1] += 0.5 * c[m];
            }
            if m >= 1 {
                out[m - 1] += 0.5 * c[m];
            }
        }
        out
    };
    let mut acc = [0.0; 8];
    for d in (0..4).rev() {
        acc = times_z(&times_z(&acc));
        acc[0] += power[d];
    }
    [acc[0], acc[2], acc[4], acc[6]]
}

/// Bound `M(q)` on the ratio of the q-Gaussian density to
/// [`Envelope::unnormalized_pdf`].
pub fn rejection_bound(q: f64, policy: &TruncationPolicy) -> Result<f64> {
    if !(q.abs() < 1.0) {
        return Err(QGaussError::InvalidArgument(format!(
            "rejection bound needs |q| < 1, got {q}"
        )));
    }
    if q == 0.0 {
        return Ok(1.0);
    }
    let head = (1.0 + q) * (1.0 - q.powi(3)) * (1.0 - q.powi(5)) * (1.0 - q.powi(9));
    let q4 = q.powi(4);
    let tail = if q > 0.0 {
        // prod_{k>=4} (1 - q^2k)(1 + q^k)
        pochhammer(q.powi(8), q * q, Terms::Infinite, policy)?
            * pochhammer(-q4, q, Terms::Infinite, policy)?
    } else {
        // prod_{k>=4} (1 + |q|^k)^2 (1 - q^k)
        let a = q.abs();
        let plus = pochhammer(-a.powi(4), a, Terms::Infinite, policy)?;
        plus * plus * pochhammer(q4, q, Terms::Infinite, policy)?
    };
    Ok(head * tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::chebyshev_u;

    fn gl_integral<F: Fn(f64) -> f64>(f: F, r: f64) -> f64 {
        crate::validation::integrate_over(&f, r, 256)
    }

    #[test]
    fn chebyshev_rewrite_matches_power_form() {
        for &q in &[-0.9, -0.3, 0.0, 0.4, 0.95] {
            let env = Envelope::new(q).unwrap();
            let c = env.chebyshev_coefficients();
            for i in 0..=20 {
                let z = -1.0 + i as f64 / 10.0;
                let from_u: f64 = (0..4).map(|n| c[n] * chebyshev_u(2 * n as i64, z)).sum();
                assert!((from_u - env.poly(z)).abs() < 1e-12, "q={q} z={z}");
            }
        }
    }

    #[test]
    fn semicircle_at_zero_q() {
        let env = Envelope::new(0.0).unwrap();
        assert!((env.pdf(0.0) - 1.0 / PI).abs() < 1e-15);
        for i in 0..=40 {
            let x = -2.0 + i as f64 / 10.0;
            let want = 0.5 + (x / 2.0).asin() / PI + x * (4.0 - x * x).max(0.0).sqrt() / (4.0 * PI);
            assert!((env.cdf(x) - want).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn vanishes_at_endpoints_and_integrates_to_one() {
        for &q in &[-0.8, -0.2, 0.3, 0.8] {
            let env = Envelope::new(q).unwrap();
            let r = env.halfwidth();
            assert_eq!(env.pdf(r), 0.0);
            assert_eq!(env.pdf(-r), 0.0);
            assert!((env.cdf(0.0) - 0.5).abs() < 1e-15);
            assert!((env.cdf(r * (1.0 - 1e-15)) - 1.0).abs() < 1e-9);
            let mass = gl_integral(|x| env.pdf(x), r);
            assert!((mass - 1.0).abs() < 1e-9, "q={q}: {mass}");
            let raw = gl_integral(|x| env.unnormalized_pdf(x), r);
            assert!((raw - env.mass()).abs() < 1e-12);
        }
    }

    #[test]
    fn cdf_derivative_is_pdf() {
        let env = Envelope::new(0.6).unwrap();
        let r = env.halfwidth();
        let h = 1e-5;
        for i in 1..200 {
            let x = -r + 2.0 * r * i as f64 / 200.0;
            let d = (env.cdf(x + h) - env.cdf(x - h)) / (2.0 * h);
            assert!((d - env.pdf(x)).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn inverse_round_trip() {
        for &q in &[-0.8, 0.0, 0.6] {
            let env = Envelope::new(q).unwrap();
            assert_eq!(env.inverse(0.5).unwrap(), 0.0);
            for i in 1..1000 {
                let u = i as f64 / 1000.0;
                let x = env.inverse(u).unwrap();
                assert!((env.cdf(x) - u).abs() < 1e-12, "q={q} u={u}");
            }
        }
        assert!(Envelope::new(0.3).unwrap().inverse(1.0).is_err());
    }

    #[test]
    fn bound_values() {
        let p = TruncationPolicy::new(1e-17);
        assert_eq!(rejection_bound(0.0, &p).unwrap(), 1.0);
        let m5 = rejection_bound(0.7, &p).unwrap();
        let m7 = rejection_bound(0.5, &p).unwrap();
        assert!(m5 > 0.0 && m7 > 0.0);
        // 200-factor products written out directly
        let q: f64 = 0.5;
        let mut oracle = (1.0 + q) * (1.0 - q.powi(3)) * (1.0 - q.powi(5)) * (1.0 - q.powi(9));
        for k in 4..204 {
            oracle *= (1.0 - q.powi(2 * k)) * (1.0 + q.powi(k));
        }
        assert!((rejection_bound(0.5, &p).unwrap() - oracle).abs() < 1e-15);
        let a = rejection_bound(-0.5, &p).unwrap();
        let b = rejection_bound(-0.7, &p).unwrap();
        let c = rejection_bound(-0.85, &p).unwrap();
        assert!(a < b && b < c, "{a} {b} {c}");
    }
}
