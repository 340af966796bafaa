//! Composite Gauss–Legendre quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::{Error, Result};

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 64;
/// Points per panel used for the inner integrals unless overridden.
pub const DEFAULT_ORDER: usize = 20;
/// Upper bound on panel width in the composite rule.
pub const PANEL_WIDTH: f64 = 0.5;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Nodes and weights of an `order`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub(crate) fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn build(order: usize) -> GaussRule {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    // Roots come in ± pairs; compute the positive half and mirror.
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut best = (f64::INFINITY, x);
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre(n, x);
            if p.abs() < best.0 {
                best = (p.abs(), x);
            }
            if p.abs() < NEWTON_TOL {
                break;
            }
            let step = p / dp;
            if step == 0.0 {
                break;
            }
            x -= step;
        }
        // Odd orders have a root at exactly 0.
        let x = if n % 2 == 1 && i == n / 2 {
            0.0
        } else {
            best.1
        };
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussRule {
        order,
        nodes,
        weights,
    }
}

static RULES: [OnceLock<GaussRule>; MAX_ORDER + 1] = [const { OnceLock::new() }; MAX_ORDER + 1];

/// The `order`-point rule; computed on first use and cached for the process.
pub fn gauss_rule(order: usize) -> Result<&'static GaussRule> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::OrderOutOfRange {
            what: "Gauss rule",
            order,
            min: MIN_ORDER,
            max: MAX_ORDER,
        });
    }
    Ok(RULES[order].get_or_init(|| build(order)))
}

/// Number of panels the composite rule uses on an interval of width `len`.
pub fn panel_count(len: f64) -> usize {
    ((len.abs() / PANEL_WIDTH).ceil() as usize).max(1)
}

impl GaussRule {
    /// Signed composite integral of `g` over `[a, b]`; `a > b` gives the
    /// negated integral and `a == b` gives exactly 0.
    pub fn integrate<F>(&self, mut g: F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if a == b {
            return Ok(0.0);
        }
        if a > b {
            return self.integrate(g, b, a).map(|v| -v);
        }
        let panels = panel_count(b - a);
        let width = (b - a) / panels as f64;
        let half = 0.5 * width;
        let mut total = 0.0;
        for j in 0..panels {
            let mid = a + (j as f64 + 0.5) * width;
            let mut s = 0.0;
            for (&node, &w) in self.nodes.iter().zip(&self.weights) {
                s += w * g(mid + half * node)?;
            }
            total += s;
        }
        let result = total * half;
        if !result.is_finite() {
            return Err(Error::NonFiniteQuadrature { a, b });
        }
        Ok(result)
    }
}

/// [`GaussRule::integrate`] with the default order-20 rule.
pub fn integrate<F>(g: F, a: f64, b: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    gauss_rule(DEFAULT_ORDER)?.integrate(g, a, b)
}
