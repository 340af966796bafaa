//! Outer limits that are themselves functions of `x`:
//!
//! ```text
//! C(x) = ∫_{a(x)}^{b(x)} I(s) ds,    I(s) = ∫_{t0(s)}^{t1(s)} f(s, t) dt
//! C''  = I(b) b'' - I(a) a'' + I'(b) b'^2 - I'(a) a'^2
//! ```
//!
//! This formulation is experimental; tables it produces are flagged as such.

use crate::expr::{parse, Expr, Jet2, Var};
use crate::ivp::{Integrand, Problem, SecondOrderSystem};
use crate::quad::{self, DEFAULT_ORDER};
use crate::richardson::{extrapolate_system, ExtrapolationTable};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct GeneralProblem {
    pub f: Expr,
    pub t0: Expr,
    pub t1: Expr,
    pub a: Expr,
    pub b: Expr,
    pub x0: f64,
    pub x_end: f64,
    quad_order: usize,
}

impl GeneralProblem {
    pub fn new(f: Expr, t0: Expr, t1: Expr, a: Expr, b: Expr, x0: f64, x_end: f64) -> Result<Self> {
        if !x0.is_finite() || !x_end.is_finite() || x_end < x0 {
            return Err(Error::invalid(format!("bad interval [{x0}, {x_end}]")));
        }
        for (name, e) in [("t0", &t0), ("t1", &t1), ("a", &a), ("b", &b)] {
            if e.mentions(Var::T) {
                return Err(Error::invalid(format!("limit {name} may only depend on x")));
            }
        }
        Ok(GeneralProblem {
            f,
            t0,
            t1,
            a,
            b,
            x0,
            x_end,
            quad_order: DEFAULT_ORDER,
        })
    }

    pub fn parse(
        f: &str,
        t0: &str,
        t1: &str,
        a: &str,
        b: &str,
        x0: f64,
        x_end: f64,
    ) -> Result<Self> {
        GeneralProblem::new(
            parse(f)?,
            parse(t0)?,
            parse(t1)?,
            parse(a)?,
            parse(b)?,
            x0,
            x_end,
        )
    }

    pub fn with_quad_order(mut self, order: usize) -> Result<Self> {
        quad::gauss_rule(order)?;
        self.quad_order = order;
        Ok(self)
    }

    fn integrand(&self) -> Result<Integrand<'_>> {
        Ok(Integrand {
            f: &self.f,
            t0: &self.t0,
            t1: &self.t1,
            rule: quad::gauss_rule(self.quad_order)?,
        })
    }

    fn outer_limits(&self, x: f64) -> Result<(Jet2, Jet2)> {
        Ok((
            self.a.eval_jet(Var::X, x, 0.0)?,
            self.b.eval_jet(Var::X, x, 0.0)?,
        ))
    }

    /// The ordinary problem over `[a(p), b(p)]` with the outer limits frozen
    /// at `x = p`.
    pub fn fixed_at(&self, p: f64) -> Result<Problem> {
        let (a, b) = self.outer_limits(p)?;
        Problem::new(self.f.clone(), self.t0.clone(), self.t1.clone(), a.v, b.v)?
            .with_quad_order(self.quad_order)
    }
}

/// `I(u) = ∫_{t0(u)}^{t1(u)} f(u, t) dt`.
pub fn inner_i(gp: &GeneralProblem, u: f64) -> Result<f64> {
    gp.integrand()?.value(u)
}

/// `dI/du` by the Leibniz rule.
pub fn di_du(gp: &GeneralProblem, u: f64) -> Result<f64> {
    gp.integrand()?.derivative(u)
}

/// `C''(x)`.
pub fn general_rhs(gp: &GeneralProblem, x: f64) -> Result<f64> {
    let (a, b) = gp.outer_limits(x)?;
    let inner = gp.integrand()?;
    Ok(
        inner.value(b.v)? * b.d2 - inner.value(a.v)? * a.d2 + inner.derivative(b.v)? * b.d1 * b.d1
            - inner.derivative(a.v)? * a.d1 * a.d1,
    )
}

/// `C(x0) = (b(x0) - a(x0)) I(x0)` and `Z(x0) = I(b(x0)) b'(x0) - I(a(x0)) a'(x0)`.
///
/// The `C(x0)` formula treats `I` as constant across `[a(x0), b(x0)]`, so it
/// is only exact when that interval is empty or `I` is constant on it.
pub fn general_initial_values(gp: &GeneralProblem) -> Result<(f64, f64)> {
    let (a, b) = gp.outer_limits(gp.x0)?;
    let inner = gp.integrand()?;
    let c0 = (b.v - a.v) * inner.value(gp.x0)?;
    let z0 = inner.value(b.v)? * b.d1 - inner.value(a.v)? * a.d1;
    Ok((c0, z0))
}

impl SecondOrderSystem for GeneralProblem {
    fn interval(&self) -> (f64, f64) {
        (self.x0, self.x_end)
    }

    fn initial_values(&self) -> Result<(f64, f64)> {
        general_initial_values(self)
    }

    fn rhs(&self, x: f64) -> Result<f64> {
        general_rhs(self, x)
    }
}

/// Euler + Richardson on the general system; the returned table is flagged
/// experimental.
pub fn general_solve(gp: &GeneralProblem, n: usize, m: usize) -> Result<ExtrapolationTable> {
    let (a, b) = gp.outer_limits(gp.x0)?;
    if a.v != b.v {
        log::warn!(
            "a(x0) = {} differs from b(x0) = {}; C(x0) uses (b - a)·I(x0), which assumes I is constant there",
            a.v,
            b.v
        );
    }
    let mut table = extrapolate_system(gp, n, m)?;
    table.experimental = true;
    Ok(table)
}
