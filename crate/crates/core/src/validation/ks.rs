/// Asymptotic Kolmogorov-Smirnov critical value at level 0.01.
pub fn ks_critical_value_01(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// One-sample KS distance between sorted `samples` and `cdf`:
/// `sup_i max(i/n - F(x_i), F(x_i) - (i-1)/n)`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    assert!(!samples.is_empty(), "KS statistic needs at least one sample");
    debug_assert!(samples.windows(2).all(|w| w[0] <= w[1]), "samples must be sorted");
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::SampleStream;

    #[test]
    fn exact_quantiles() {
        let n = 200;
        let xs: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
        let d = ks_statistic(&xs, |x| x);
        assert!((d - 0.5 / n as f64).abs() < 1e-15);
    }

    #[test]
    fn uniform_sample_passes() {
        let mut s = SampleStream::new(2024, 0);
        let mut xs: Vec<f64> = (0..1000).map(|_| s.uniform()).collect();
        xs.sort_by(f64::total_cmp);
        assert!(ks_statistic(&xs, |x| x) < ks_critical_value_01(1000));
    }

    #[test]
    fn degenerate_sample() {
        let xs = vec![0.999; 50];
        let d = ks_statistic(&xs, |x: f64| x.clamp(0.0, 1.0));
        assert!(d > 0.99);
    }
}
