use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

use super::{BinOp, Expr, Func, Jet2, Var};

/// Integer exponents up to this magnitude are evaluated by repeated
/// multiplication.
const MAX_EXACT_POWER: i32 = 8;

/// Evaluation produced a non-finite value or left a function's domain.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{reason} at x = {x}, t = {t}")]
pub struct DomainError {
    pub x: f64,
    pub t: f64,
    pub reason: &'static str,
}

/// Number type an [`Expr`] can be evaluated on.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    fn all_finite(&self) -> bool;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn tan(self) -> Self {
        f64::tan(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

impl Scalar for Jet2 {
    fn constant(c: f64) -> Self {
        Jet2::constant(c)
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
    fn sin(self) -> Self {
        Jet2::sin(self)
    }
    fn cos(self) -> Self {
        Jet2::cos(self)
    }
    fn tan(self) -> Self {
        Jet2::tan(self)
    }
    fn exp(self) -> Self {
        Jet2::exp(self)
    }
    fn ln(self) -> Self {
        Jet2::ln(self)
    }
    fn sqrt(self) -> Self {
        Jet2::sqrt(self)
    }
    fn abs(self) -> Self {
        Jet2::abs(self)
    }
}

/// Literal integer exponent (`x^3`, `x^-2`) eligible for exact evaluation.
fn literal_int_exponent(e: &Expr) -> Option<i32> {
    let v = match e {
        Expr::Num(v) => *v,
        Expr::Neg(inner) => match **inner {
            Expr::Num(v) => -v,
            _ => return None,
        },
        _ => return None,
    };
    (v.fract() == 0.0 && v.abs() <= MAX_EXACT_POWER as f64).then_some(v as i32)
}

fn powi<T: Scalar>(base: T, k: i32) -> T {
    let mut acc = T::constant(1.0);
    if k == 0 {
        return acc;
    }
    acc = base;
    for _ in 1..k.unsigned_abs() {
        acc = acc * base;
    }
    if k < 0 {
        T::constant(1.0) / acc
    } else {
        acc
    }
}

struct Ctx<T> {
    x: T,
    t: T,
}

impl<T: Scalar> Ctx<T> {
    fn fail(&self, reason: &'static str) -> DomainError {
        DomainError {
            x: self.x.value(),
            t: self.t.value(),
            reason,
        }
    }

    fn check(&self, r: T, reason: &'static str) -> Result<T, DomainError> {
        if r.all_finite() {
            Ok(r)
        } else {
            Err(self.fail(reason))
        }
    }

    fn eval(&self, e: &Expr) -> Result<T, DomainError> {
        match e {
            Expr::Num(v) => Ok(T::constant(*v)),
            Expr::Var(Var::X) => Ok(self.x),
            Expr::Var(Var::T) => Ok(self.t),
            Expr::Neg(inner) => Ok(-self.eval(inner)?),
            Expr::Binary(op, l, r) => {
                let a = self.eval(l)?;
                if *op == BinOp::Pow {
                    if let Some(k) = literal_int_exponent(r) {
                        if k < 0 && a.value() == 0.0 {
                            return Err(self.fail("division by zero"));
                        }
                        return self.check(powi(a, k), "non-finite power");
                    }
                    let b = self.eval(r)?;
                    if a.value() <= 0.0 {
                        return Err(self.fail("non-integer power of non-positive base"));
                    }
                    return self.check((a.ln() * b).exp(), "non-finite power");
                }
                let b = self.eval(r)?;
                match op {
                    BinOp::Add => self.check(a + b, "non-finite sum"),
                    BinOp::Sub => self.check(a - b, "non-finite difference"),
                    BinOp::Mul => self.check(a * b, "non-finite product"),
                    BinOp::Div => {
                        if b.value() == 0.0 {
                            return Err(self.fail("division by zero"));
                        }
                        self.check(a / b, "non-finite quotient")
                    }
                    BinOp::Pow => unreachable!(),
                }
            }
            Expr::Call(func, arg) => {
                let a = self.eval(arg)?;
                let r = match func {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => a.tan(),
                    Func::Exp => a.exp(),
                    Func::Ln => {
                        if a.value() <= 0.0 {
                            return Err(self.fail("ln of non-positive argument"));
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if a.value() < 0.0 {
                            return Err(self.fail("sqrt of negative argument"));
                        }
                        a.sqrt()
                    }
                    Func::Abs => a.abs(),
                };
                self.check(r, "non-finite function value")
            }
        }
    }
}

impl Expr {
    /// Evaluates on any [`Scalar`] type; `x` and `t` may themselves be jets.
    pub fn eval_with<T: Scalar>(&self, x: T, t: T) -> Result<T, DomainError> {
        Ctx { x, t }.eval(self)
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64, DomainError> {
        self.eval_with(x, t)
    }

    /// Value plus first and second derivative with respect to `seed`, the
    /// other variable held fixed.
    pub fn eval_jet(&self, seed: Var, x: f64, t: f64) -> Result<Jet2, DomainError> {
        let (xj, tj) = match seed {
            Var::X => (Jet2::variable(x), Jet2::constant(t)),
            Var::T => (Jet2::constant(x), Jet2::variable(t)),
        };
        self.eval_with(xj, tj)
    }
}
