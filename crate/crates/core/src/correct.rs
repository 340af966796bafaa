//! Imposed cubature rules. Solving the problem with a rule `Q` attached gives
//! the correction curve `C(x)` such that `Q(x) + C(x)` is the integral.

use std::fmt;
use std::sync::Arc;

use crate::expr::{Expr, Jet2};
use crate::ivp::Problem;
use crate::{Error, Result};

type RuleFn = dyn Fn(f64) -> Result<Jet2> + Send + Sync;

/// A cubature rule as a function of the upper outer limit `x`, returning
/// `(Q(x), Q'(x), Q''(x))`.
#[derive(Clone)]
pub struct CubatureRule {
    name: String,
    q: Arc<RuleFn>,
}

impl CubatureRule {
    pub fn new<F>(name: impl Into<String>, q: F) -> Self
    where
        F: Fn(f64) -> Result<Jet2> + Send + Sync + 'static,
    {
        CubatureRule {
            name: name.into(),
            q: Arc::new(q),
        }
    }

    /// `Q ≡ 0`; attaching it changes nothing.
    pub fn zero() -> Self {
        CubatureRule::new("zero", |_| Ok(Jet2::constant(0.0)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> Result<Jet2> {
        let q = (self.q)(x)?;
        if !q.is_finite() {
            return Err(Error::Domain(crate::DomainError {
                x,
                t: 0.0,
                reason: "cubature rule is not finite",
            }));
        }
        Ok(q)
    }
}

impl fmt::Debug for CubatureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CubatureRule")
            .field("name", &self.name)
            .finish()
    }
}

/// Simpson's rule for `f(ξ, ·)` on `[t0(ξ), t1(ξ)]`, evaluated in jets.
fn inner_simpson(f: &Expr, t0: &Expr, t1: &Expr, xi: Jet2) -> Result<Jet2> {
    let zero = Jet2::constant(0.0);
    let lo = t0.eval_with(xi, zero)?;
    let hi = t1.eval_with(xi, zero)?;
    let mid = (lo + hi) / 2.0;
    let sum = f.eval_with(xi, lo)? + f.eval_with(xi, mid)? * 4.0 + f.eval_with(xi, hi)?;
    Ok((hi - lo) / 6.0 * sum)
}

/// Single-panel Simpson product rule over the region of `p`, as a function of
/// the upper outer limit:
///
/// ```text
/// Q(x) = (x - x0)/6 · Σ_{ξ ∈ {x0, (x0+x)/2, x}} w_ξ · S(ξ),   w = (1, 4, 1)
/// ```
///
/// where `S(ξ)` is Simpson's rule for the inner integral at `ξ`. `x` enters
/// through the outer width, the midpoint node and the inner limits, and the
/// whole expression is evaluated with `x` seeded so `Q'` and `Q''` are exact.
pub fn simpson_rule(p: &Problem) -> CubatureRule {
    let (f, t0, t1, x0) = (p.f.clone(), p.t0.clone(), p.t1.clone(), p.x0);
    CubatureRule::new("simpson", move |x| {
        let x = Jet2::variable(x);
        let start = Jet2::constant(x0);
        let nodes = [(start, 1.0), ((start + x) / 2.0, 4.0), (x, 1.0)];
        let mut sum = Jet2::constant(0.0);
        for (xi, w) in nodes {
            sum = sum + inner_simpson(&f, &t0, &t1, xi)? * w;
        }
        Ok((x - x0) / 6.0 * sum)
    })
}

/// `p` with `rule` attached: `Z'` loses `Q''`, and the initial values become
/// `C(x0) = -Q(x0)`, `Z(x0) = ∫ f(x0, t) dt - Q'(x0)`.
pub fn corrected_problem(p: &Problem, rule: CubatureRule) -> Result<Problem> {
    if p.correction.is_some() {
        return Err(Error::CorrectionAlreadyAttached);
    }
    let mut out = p.clone();
    out.correction = Some(rule);
    Ok(out)
}
