use std::hint::black_box;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Order-2 jet: a value with its first and second derivative along one
/// seeded direction.
///
/// Arithmetic follows the truncated Taylor rules, e.g. for a product
/// `(uw, u'w + uw', u''w + 2u'w' + uw'')`. The value component is always
/// computed with exactly the same floating-point operations as plain `f64`
/// evaluation would use.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet2 { v, d1, d2 }
    }

    /// A quantity that does not depend on the seeded variable.
    pub const fn constant(v: f64) -> Self {
        Jet2 {
            v,
            d1: 0.0,
            d2: 0.0,
        }
    }

    /// The seeded variable itself.
    pub const fn variable(v: f64) -> Self {
        Jet2 {
            v,
            d1: 1.0,
            d2: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    /// Chain rule for a scalar function with value `f0`, slope `f1` and
    /// curvature `f2` at `self.v`.
    #[inline]
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Jet2 {
            v: f0,
            d1: f1 * self.d1,
            d2: f2 * self.d1 * self.d1 + f1 * self.d2,
        }
    }

    // The value slot must match plain `f64` evaluation bit for bit. LLVM fuses
    // a `sin` and `cos` of the same argument into `sincos`, whose result can
    // differ in the last place, so the derivative call goes through a barrier.
    pub fn sin(self) -> Self {
        let (s, c) = (self.v.sin(), black_box(self.v).cos());
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = (black_box(self.v).sin(), self.v.cos());
        self.chain(c, -s, -c)
    }

    pub fn tan(self) -> Self {
        let t = self.v.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(self.v.ln(), r, -r * r)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let d = 0.5 / s;
        self.chain(s, d, -d / (2.0 * self.v))
    }

    /// Derivative of `|u|` is taken as `signum(u)` away from zero and 0 at zero.
    pub fn abs(self) -> Self {
        let s = if self.v > 0.0 {
            1.0
        } else if self.v < 0.0 {
            -1.0
        } else {
            0.0
        };
        self.chain(self.v.abs(), s, 0.0)
    }
}

impl From<f64> for Jet2 {
    fn from(v: f64) -> Self {
        Jet2::constant(v)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[inline]
    fn div(self, o: Jet2) -> Jet2 {
        let q = self.v / o.v;
        let q1 = (self.d1 - q * o.d1) / o.v;
        let q2 = (self.d2 - 2.0 * q1 * o.d1 - q * o.d2) / o.v;
        Jet2::new(q, q1, q2)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    #[inline]
    fn neg(self) -> Jet2 {
        Jet2::new(-self.v, -self.d1, -self.d2)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, o: f64) -> Jet2 {
        Jet2::new(self.v + o, self.d1, self.d2)
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, o: f64) -> Jet2 {
        Jet2::new(self.v - o, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, o: f64) -> Jet2 {
        Jet2::new(self.v * o, self.d1 * o, self.d2 * o)
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, o: f64) -> Jet2 {
        Jet2::new(self.v / o, self.d1 / o, self.d2 / o)
    }
}
