//! Brute-force reference integrators for tests.
//!
//! Nothing here shares code with `dblint-core`: Gauss–Legendre nodes come
//! from the Golub–Welsch eigenvalue construction instead of Newton iteration
//! on Legendre polynomials, and double integrals are computed by nesting two
//! composite rules with panel halving until successive values agree.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights on [-1, 1] from the eigen-decomposition of the Jacobi
/// matrix of the Legendre recurrence.
pub fn golub_welsch(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let kf = k as f64;
        let beta = kf / (4.0 * kf * kf - 1.0).sqrt();
        j[(k - 1, k)] = beta;
        j[(k, k - 1)] = beta;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], 2.0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Composite rule with `panels` equal panels.
pub struct Composite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Composite {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = golub_welsch(order);
        Composite { nodes, weights }
    }

    pub fn fixed(&self, g: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let w = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * w;
            let s: f64 = self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(x, wt)| wt * g(mid + 0.5 * w * x))
                .sum();
            total += s;
        }
        total * 0.5 * w
    }

    /// Doubles the panel count until two successive values agree to `tol`.
    pub fn converged(&self, g: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let mut panels = 4;
        let mut prev = self.fixed(g, a, b, panels);
        loop {
            panels *= 2;
            let cur = self.fixed(g, a, b, panels);
            if (cur - prev).abs() <= tol || panels >= 1 << 14 {
                return cur;
            }
            prev = cur;
        }
    }
}

/// `∫_{x0}^{x1} ∫_{t0(x)}^{t1(x)} f(x, t) dt dx` by nested panel halving,
/// each level converged to `tol`.
pub fn double_integral(
    f: impl Fn(f64, f64) -> f64,
    t0: impl Fn(f64) -> f64,
    t1: impl Fn(f64) -> f64,
    x0: f64,
    x1: f64,
    tol: f64,
) -> f64 {
    let rule = Composite::new(16);
    let mut outer = |x: f64| rule.converged(&mut |t| f(x, t), t0(x), t1(x), tol);
    rule.converged(&mut outer, x0, x1, tol)
}

/// Reference `C(x)` for `∫_1^x ∫_{s/5}^{s²+1} sin(s t) dt ds`.
pub fn sin_xt_reference(x: f64) -> f64 {
    double_integral(
        |x, t| (x * t).sin(),
        |x| x / 5.0,
        |x| x * x + 1.0,
        1.0,
        x,
        1e-14,
    )
}
