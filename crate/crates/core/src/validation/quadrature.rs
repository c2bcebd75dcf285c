use std::f64::consts::{FRAC_PI_2, PI};

/// Default Gauss-Legendre order for integrals over the support.
pub const DEFAULT_NODES: usize = 256;

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are the roots of `P_n`, found by Newton iteration from the
    /// usual cosine guesses; weights are `2 / ((1 - x^2) P_n'(x)^2)`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integral of `f` over `[-r, r]` after substituting `x = r sin(t)`, which
/// turns square-root behaviour at the endpoints into a smooth integrand.
pub fn integrate_over<F: Fn(f64) -> f64 + ?Sized>(f: &F, r: f64, nodes: usize) -> f64 {
    let gl = GaussLegendre::new(nodes);
    gl.integrate(|t| f(r * t.sin()) * r * t.cos(), -FRAC_PI_2, FRAC_PI_2)
}

/// Integral of `f` over the support `[-2/sqrt(1-q), 2/sqrt(1-q)]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, q: f64, nodes: usize) -> f64 {
    integrate_over(&f, 2.0 / (1.0 - q).sqrt(), nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules() {
        let g = GaussLegendre::new(2);
        let a = 1.0 / 3f64.sqrt();
        assert!((g.nodes()[1] - a).abs() < 1e-15);
        assert!((g.weights()[0] - 1.0).abs() < 1e-15);
        let g = GaussLegendre::new(5);
        assert_eq!(g.nodes()[2], 0.0);
        assert!((g.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_polynomials() {
        let g = GaussLegendre::new(10);
        // degree 19 is exact
        let v = g.integrate(|x| x.powi(18) + x.powi(19), -1.0, 1.0);
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        let g = GaussLegendre::new(256);
        assert!((g.weights().iter().sum::<f64>() - 2.0).abs() < 1e-13);
        assert!((g.integrate(f64::exp, 0.0, 1.0) - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn semicircle_mass() {
        let f = |x: f64| (4.0 - x * x).max(0.0).sqrt() / (2.0 * PI);
        assert!((integrate(f, 0.0, DEFAULT_NODES) - 1.0).abs() < 1e-12);
        assert!(integrate(|x| x * f(x), 0.0, DEFAULT_NODES).abs() < 1e-12);
    }
}
