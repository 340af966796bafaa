//! Double integrals with variable inner limits, evaluated by recasting
//!
//! ```text
//! C(x) = ∫_{x0}^{x} ∫_{t0(x)}^{t1(x)} f(x, t) dt dx
//! ```
//!
//! as the second-order initial value problem `C' = Z`, `Z' = g(x)` (the
//! Leibniz-rule derivative of the inner integral), integrating it with
//! explicit Euler, and combining Euler runs at `h, h/2, …, h/2^(m-1)` by
//! Richardson extrapolation into an order-`m` result.
//!
//! Module map:
//!
//! * [`expr`]: expression language, evaluation, order-2 jets
//! * [`quad`]: composite Gauss–Legendre quadrature for the inner integrals
//! * [`ivp`]: the [`Problem`], its right-hand side, and the Euler stepper
//! * [`richardson`]: extrapolation coefficients, ladders, error coefficients
//! * [`control`]: tolerance-driven stepsize selection
//! * [`correct`]: imposed cubature rules and their correction curves
//! * [`genlimits`]: outer limits that are themselves functions of `x`

// `!(v > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod correct;
pub mod expr;
pub mod genlimits;
pub mod ivp;
pub mod quad;
pub mod richardson;

pub use control::{plan_stepsize, tune_and_solve, StepsizePlan, DEFAULT_PILOT};
pub use correct::{corrected_problem, simpson_rule, CubatureRule};
pub use expr::{parse, DomainError, Expr, Jet2, ParseError, Var};
pub use genlimits::GeneralProblem;
pub use ivp::{euler_solve, Problem, SecondOrderSystem, Trajectory};
pub use quad::{gauss_rule, GaussRule};
pub use richardson::{
    coefficients, conversion_factor, error_coefficient, extrapolate, CoefficientVector,
    ExtrapolationTable, Ladder,
};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("domain error: {0}")]
    Domain(#[from] DomainError),
    #[error("{what} order out of range: {order} (allowed {min}..={max})")]
    OrderOutOfRange {
        what: &'static str,
        order: usize,
        min: usize,
        max: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature on [{a}, {b}] accumulated a non-finite value")]
    NonFiniteQuadrature { a: f64, b: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("problem already carries a correction rule")]
    CorrectionAlreadyAttached,
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::NonFiniteQuadrature { .. })
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
