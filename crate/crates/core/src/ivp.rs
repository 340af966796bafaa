//! The double integral as a second-order initial value problem and the
//! explicit Euler stepper that integrates it.
//!
//! Differentiating `C(x) = ∫_{x0}^{x} ∫_{t0(x)}^{t1(x)} f dt dx` twice gives
//!
//! ```text
//! C' = Z
//! Z' = f(x, t1) t1' - f(x, t0) t0' + ∫_{t0}^{t1} ∂f/∂x dt  =: g(x)
//! ```
//!
//! with `C(x0) = 0` and `Z(x0) = ∫ f(x0, t) dt`. With a cubature rule `Q`
//! attached, `g` loses `Q''` and the initial values shift by `-Q(x0)` and
//! `-Q'(x0)`, so `C` becomes the correction to `Q`.

use rayon::prelude::*;

use crate::correct::CubatureRule;
use crate::expr::{parse, Expr, Var};
use crate::quad::{self, GaussRule};
use crate::{Error, Result};

/// Anything the Euler ladder can integrate: a pure quadrature system
/// `C' = Z`, `Z' = rhs(x)` on a closed interval.
pub trait SecondOrderSystem: Sync {
    fn interval(&self) -> (f64, f64);
    fn initial_values(&self) -> Result<(f64, f64)>;
    fn rhs(&self, x: f64) -> Result<f64>;
}

/// `∫_{t0(x)}^{t1(x)} f(x, t) dt` together with its Leibniz-rule derivative.
pub(crate) struct Integrand<'a> {
    pub f: &'a Expr,
    pub t0: &'a Expr,
    pub t1: &'a Expr,
    pub rule: &'a GaussRule,
}

impl Integrand<'_> {
    pub fn value(&self, x: f64) -> Result<f64> {
        let lo = self.t0.eval(x, 0.0)?;
        let hi = self.t1.eval(x, 0.0)?;
        self.rule.integrate(|t| Ok(self.f.eval(x, t)?), lo, hi)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let lo = self.t0.eval_jet(Var::X, x, 0.0)?;
        let hi = self.t1.eval_jet(Var::X, x, 0.0)?;
        let upper = self.f.eval(x, hi.v)? * hi.d1;
        let lower = self.f.eval(x, lo.v)? * lo.d1;
        let inner = self
            .rule
            .integrate(|t| Ok(self.f.eval_jet(Var::X, x, t)?.d1), lo.v, hi.v)?;
        Ok(upper - lower + inner)
    }
}

/// A double integral over `x0 ≤ x ≤ x_end`, `t0(x) ≤ t ≤ t1(x)`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub f: Expr,
    pub t0: Expr,
    pub t1: Expr,
    pub x0: f64,
    pub x_end: f64,
    pub correction: Option<CubatureRule>,
    quad_order: usize,
}

impl Problem {
    pub fn new(f: Expr, t0: Expr, t1: Expr, x0: f64, x_end: f64) -> Result<Self> {
        if !x0.is_finite() || !x_end.is_finite() {
            return Err(Error::invalid("outer limits must be finite"));
        }
        if x_end < x0 {
            return Err(Error::invalid(format!(
                "x_end ({x_end}) must not be below x0 ({x0})"
            )));
        }
        for (name, e) in [("t0", &t0), ("t1", &t1)] {
            if e.mentions(Var::T) {
                return Err(Error::invalid(format!("limit {name} may only depend on x")));
            }
        }
        Ok(Problem {
            f,
            t0,
            t1,
            x0,
            x_end,
            correction: None,
            quad_order: quad::DEFAULT_ORDER,
        })
    }

    /// Builds a problem from source text for the three expressions.
    pub fn parse(f: &str, t0: &str, t1: &str, x0: f64, x_end: f64) -> Result<Self> {
        Problem::new(parse(f)?, parse(t0)?, parse(t1)?, x0, x_end)
    }

    /// `∫_1^5 ∫_{x/5}^{x²+1} sin(xt) dt dx`, the standard worked example.
    pub fn sin_xt_example() -> Self {
        Problem::parse("sin(x*t)", "x/5", "x^2+1", 1.0, 5.0).expect("built-in example parses")
    }

    /// Points per panel of the inner Gauss rule.
    pub fn with_quad_order(mut self, order: usize) -> Result<Self> {
        quad::gauss_rule(order)?;
        self.quad_order = order;
        Ok(self)
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order
    }

    pub(crate) fn integrand(&self) -> Result<Integrand<'_>> {
        Ok(Integrand {
            f: &self.f,
            t0: &self.t0,
            t1: &self.t1,
            rule: quad::gauss_rule(self.quad_order)?,
        })
    }
}

/// `g(x)`: the right-hand side of `Z' = g(x)`, minus `Q''(x)` when a
/// correction rule is attached.
pub fn rhs_g(p: &Problem, x: f64) -> Result<f64> {
    let g = p.integrand()?.derivative(x)?;
    match &p.correction {
        Some(rule) => Ok(g - rule.eval(x)?.d2),
        None => Ok(g),
    }
}

/// `(C(x0), Z(x0))`.
pub fn initial_values(p: &Problem) -> Result<(f64, f64)> {
    let z0 = p.integrand()?.value(p.x0)?;
    match &p.correction {
        Some(rule) => {
            let q = rule.eval(p.x0)?;
            Ok((0.0 - q.v, z0 - q.d1))
        }
        None => Ok((0.0, z0)),
    }
}

impl SecondOrderSystem for Problem {
    fn interval(&self) -> (f64, f64) {
        (self.x0, self.x_end)
    }

    fn initial_values(&self) -> Result<(f64, f64)> {
        initial_values(self)
    }

    fn rhs(&self, x: f64) -> Result<f64> {
        rhs_g(self, x)
    }
}

/// Samples `(x_i, C_i, Z_i)` of one Euler run at fixed stepsize.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub h: f64,
    pub xs: Vec<f64>,
    pub cs: Vec<f64>,
    pub zs: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.xs.len().saturating_sub(1)
    }

    pub fn last(&self) -> Option<(f64, f64, f64)> {
        let i = self.len().checked_sub(1)?;
        Some((self.xs[i], self.cs[i], self.zs[i]))
    }
}

/// Node `i` of the uniform grid with `n` steps on `[x0, x_end]`; the last
/// node is `x_end` exactly.
pub(crate) fn grid_node(x0: f64, x_end: f64, n: usize, i: usize) -> f64 {
    if i == n {
        x_end
    } else {
        x0 + i as f64 * ((x_end - x0) / n as f64)
    }
}

/// Explicit Euler with `n` uniform steps:
/// `C_{i+1} = C_i + h Z_i`, `Z_{i+1} = Z_i + h g(x_i)`.
///
/// `g` depends on `x` alone, so its values at the left nodes are computed up
/// front (in parallel) and the recurrence itself runs sequentially.
pub fn euler_solve<S: SecondOrderSystem + ?Sized>(sys: &S, n: usize) -> Result<Trajectory> {
    let (x0, x_end) = sys.interval();
    let (c0, z0) = sys.initial_values()?;
    if n == 0 {
        if x_end != x0 {
            return Err(Error::invalid("step count must be at least 1"));
        }
        return Ok(Trajectory {
            h: 0.0,
            xs: vec![x0],
            cs: vec![c0],
            zs: vec![z0],
        });
    }
    let h = (x_end - x0) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| grid_node(x0, x_end, n, i)).collect();
    let gs: Vec<f64> = xs[..n]
        .par_iter()
        .map(|&x| sys.rhs(x))
        .collect::<Result<_>>()?;

    let mut cs = Vec::with_capacity(n + 1);
    let mut zs = Vec::with_capacity(n + 1);
    let (mut c, mut z) = (c0, z0);
    cs.push(c);
    zs.push(z);
    for g in gs {
        c += h * z;
        z += h * g;
        cs.push(c);
        zs.push(z);
    }
    Ok(Trajectory { h, xs, cs, zs })
}
