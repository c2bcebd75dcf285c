use crate::qseries::q_number;

/// Raw moment `E X^r` of the q-Gaussian law, for any `q` in `[-1, 1]`.
///
/// Expands `x^r` in the q-Hermite basis using `x H_k = H_{k+1} + [k]_q H_{k-1}`
/// and reads off the constant coefficient; odd moments vanish.
pub fn moment(r: usize, q: f64) -> f64 {
    if r % 2 == 1 {
        return 0.0;
    }
    // c[k]: coefficient of H_k in x^n
    let mut c = vec![0.0; r + 2];
    c[0] = 1.0;
    let brackets: Vec<f64> = (0..=r + 1).map(|k| q_number(k, q)).collect();
    for n in 0..r {
        let mut next = vec![0.0; r + 2];
        for k in 0..=(n + 1).min(r) {
            let from_below = if k > 0 { c[k - 1] } else { 0.0 };
            next[k] = from_below + brackets[k + 1] * c[k + 1];
        }
        c = next;
    }
    c[0]
}

/// Moments `E X^0, ..., E X^max_order`.
pub fn moments_up_to(max_order: usize, q: f64) -> Vec<f64> {
    (0..=max_order).map(|r| moment(r, q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_closed_forms() {
        for i in -10..=10 {
            let q = i as f64 / 10.0;
            assert_eq!(moment(0, q), 1.0);
            assert!((moment(2, q) - 1.0).abs() < 1e-15);
            assert!((moment(4, q) - (2.0 + q)).abs() < 1e-14);
            let m6 = 5.0 + 6.0 * q + 3.0 * q * q + q * q * q;
            assert!((moment(6, q) - m6).abs() < 1e-13);
            assert_eq!(moment(3, q), 0.0);
        }
        assert!((moment(4, 0.3) - 2.3).abs() < 1e-15);
    }

    #[test]
    fn limits() {
        // normal: (r-1)!!
        let double_fact = [1.0, 1.0, 3.0, 15.0, 105.0, 945.0];
        for (i, want) in double_fact.iter().enumerate() {
            assert_eq!(moment(2 * i, 1.0), *want);
        }
        // semicircle: Catalan numbers
        let catalan = [1.0, 1.0, 2.0, 5.0, 14.0, 42.0, 132.0];
        for (i, want) in catalan.iter().enumerate() {
            assert_eq!(moment(2 * i, 0.0), *want);
        }
        // two-point
        for r in (0..12).step_by(2) {
            assert_eq!(moment(r, -1.0), 1.0);
        }
    }
}
