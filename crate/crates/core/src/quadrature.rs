//! Gauss rules from three-term recurrences.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of an `n`-point Gauss rule.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Orthonormal recurrence `x p_k = b_{k+1} p_{k+1} + b_k p_{k-1}` (zero diagonal)
/// with `p_0 = 1/sqrt(mu0)`.
fn symmetric_rule(n: usize, mu0: f64, b: impl Fn(usize) -> f64) -> GaussRule {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        jacobi[(k, k - 1)] = b(k);
        jacobi[(k - 1, k)] = b(k);
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, c| a.total_cmp(c));
    let eval = |x: f64| {
        // returns (p_n, p_n', sum_{k<n} p_k^2)
        let (mut p0, mut p1) = (0.0, mu0.powf(-0.5));
        let (mut d0, mut d1) = (0.0, 0.0);
        let mut sum = p1 * p1;
        for k in 0..n {
            let bk = if k == 0 { 0.0 } else { b(k) };
            let bn = b(k + 1);
            let p2 = (x * p1 - bk * p0) / bn;
            let d2 = (p1 + x * d1 - bk * d0) / bn;
            (p0, p1, d0, d1) = (p1, p2, d1, d2);
            if k + 1 < n {
                sum += p1 * p1;
            }
        }
        (p1, d1, sum)
    };
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, d, _) = eval(*x);
            *x -= p / d;
        }
    }
    let weights = nodes.iter().map(|&x| 1.0 / eval(x).2).collect();
    GaussRule { nodes, weights }
}

/// `int f(x) e^{-x^2} dx` on the real line.
pub fn gauss_hermite(n: usize) -> GaussRule {
    symmetric_rule(n, std::f64::consts::PI.sqrt(), |k| (k as f64 / 2.0).sqrt())
}

/// `int_{-1}^{1} f(x) dx`.
pub fn gauss_legendre(n: usize) -> GaussRule {
    symmetric_rule(n, 2.0, |k| {
        let k = k as f64;
        k / (4.0 * k * k - 1.0).sqrt()
    })
}

impl GaussRule {
    /// The rule mapped affinely from `[-1, 1]` onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> GaussRule {
        let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
        GaussRule {
            nodes: self.nodes.iter().map(|x| m + r * x).collect(),
            weights: self.weights.iter().map(|w| w * r).collect(),
        }
    }
}
