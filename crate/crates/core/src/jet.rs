//! Third-order jets: truncated Taylor arithmetic carrying a value and its
//! first three derivatives at a base point.
//!
//! Every operation is the exact order-3 truncation of the corresponding
//! operation on germs, so polynomials of degree ≤ 3 are reproduced exactly
//! and compositions follow Faà di Bruno's formula.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Value and derivatives of orders 1..=3 of a real function at `x0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet3 {
    pub x0: f64,
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

impl Jet3 {
    pub const fn new(x0: f64, f: f64, f1: f64, f2: f64, f3: f64) -> Self {
        Self { x0, f, f1, f2, f3 }
    }

    /// The identity germ `x ↦ x` at `x0`.
    pub const fn variable(x0: f64) -> Self {
        Self::new(x0, x0, 1.0, 0.0, 0.0)
    }

    pub const fn constant(x0: f64, value: f64) -> Self {
        Self::new(x0, value, 0.0, 0.0, 0.0)
    }

    pub fn derivatives(&self) -> [f64; 4] {
        [self.f, self.f1, self.f2, self.f3]
    }

    pub fn is_finite(&self) -> bool {
        self.x0.is_finite() && self.derivatives().iter().all(|v| v.is_finite())
    }

    /// Chain rule up to third order: the jet of `outer ∘ self`, where
    /// `outer` is the jet of the outer function taken at `self.f`.
    pub fn compose(outer: &Jet3, inner: &Jet3) -> Jet3 {
        let (g1, g2, g3) = (inner.f1, inner.f2, inner.f3);
        Jet3 {
            x0: inner.x0,
            f: outer.f,
            f1: outer.f1 * g1,
            f2: outer.f2 * g1 * g1 + outer.f1 * g2,
            f3: outer.f3 * g1 * g1 * g1 + 3.0 * outer.f2 * g1 * g2 + outer.f1 * g3,
        }
    }

    /// Applies a scalar function given through its value and first three
    /// derivatives at `self.f`.
    pub fn map(&self, derivs: [f64; 4]) -> Jet3 {
        let outer = Jet3::new(self.f, derivs[0], derivs[1], derivs[2], derivs[3]);
        Jet3::compose(&outer, self)
    }

    pub fn recip(&self) -> Jet3 {
        let r = 1.0 / self.f;
        self.map([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn exp(&self) -> Jet3 {
        let e = self.f.exp();
        self.map([e, e, e, e])
    }

    pub fn ln(&self) -> Jet3 {
        let r = 1.0 / self.f;
        self.map([self.f.ln(), r, -r * r, 2.0 * r * r * r])
    }

    pub fn sin(&self) -> Jet3 {
        let (s, c) = self.f.sin_cos();
        self.map([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet3 {
        let (s, c) = self.f.sin_cos();
        self.map([c, -s, -c, s])
    }

    pub fn tan(&self) -> Jet3 {
        // tan' = 1 + T², tan'' = 2T(1 + T²), tan''' = 2(1 + T²)(1 + 3T²)
        let t = self.f.tan();
        let sec2 = 1.0 + t * t;
        self.map([t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t)])
    }

    pub fn sinh(&self) -> Jet3 {
        let (s, c) = (self.f.sinh(), self.f.cosh());
        self.map([s, c, s, c])
    }

    pub fn cosh(&self) -> Jet3 {
        let (s, c) = (self.f.sinh(), self.f.cosh());
        self.map([c, s, c, s])
    }

    pub fn powi(&self, n: i32) -> Jet3 {
        let nf = f64::from(n);
        // falling factorial n(n-1)...(n-k+1) times x^(n-k); zero coefficients
        // are kept exact so that low-degree monomials stay finite at x = 0
        let term = |k: i32| {
            let coeff: f64 = (0..k).map(|i| nf - f64::from(i)).product();
            if coeff == 0.0 {
                0.0
            } else {
                coeff * self.f.powi(n - k)
            }
        };
        self.map([term(0), term(1), term(2), term(3)])
    }

    pub fn scale(&self, k: f64) -> Jet3 {
        Jet3::new(self.x0, k * self.f, k * self.f1, k * self.f2, k * self.f3)
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        Jet3::new(
            self.x0,
            self.f + rhs.f,
            self.f1 + rhs.f1,
            self.f2 + rhs.f2,
            self.f3 + rhs.f3,
        )
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        self + (-rhs)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        let (a, b) = (self, rhs);
        Jet3::new(
            a.x0,
            a.f * b.f,
            a.f1 * b.f + a.f * b.f1,
            a.f2 * b.f + 2.0 * a.f1 * b.f1 + a.f * b.f2,
            a.f3 * b.f + 3.0 * a.f2 * b.f1 + 3.0 * a.f1 * b.f2 + a.f * b.f3,
        )
    }
}

impl Div for Jet3 {
    type Output = Jet3;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet3) -> Jet3 {
        self * rhs.recip()
    }
}

impl Add<f64> for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: f64) -> Jet3 {
        Jet3 {
            f: self.f + rhs,
            ..self
        }
    }
}

impl Sub<f64> for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: f64) -> Jet3 {
        self + (-rhs)
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: f64) -> Jet3 {
        self.scale(rhs)
    }
}

impl Mul<Jet3> for f64 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        rhs.scale(self)
    }
}

impl Div<f64> for Jet3 {
    type Output = Jet3;
    fn div(self, rhs: f64) -> Jet3 {
        self.scale(1.0 / rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn assert_jet(j: Jet3, expected: [f64; 4]) {
        for (got, want) in j.derivatives().iter().zip(expected) {
            assert_relative_eq!(*got, want, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn cubic_products_are_exact() {
        // (1 + 2x)(3 - x + x²) = 3 + 5x - x² + 2x³ at x = 0.5
        let x = Jet3::variable(0.5);
        let p = (x * 2.0 + 1.0) * (x * x - x + 3.0);
        let at = |x: f64| 3.0 + 5.0 * x - x * x + 2.0 * x * x * x;
        assert_jet(
            p,
            [
                at(0.5),
                5.0 - 2.0 * 0.5 + 6.0 * 0.25,
                -2.0 + 12.0 * 0.5,
                12.0,
            ],
        );
    }

    #[test]
    fn reciprocal_of_variable() {
        let j = Jet3::variable(2.0).recip();
        assert_jet(j, [0.5, -0.25, 0.25, -0.375]);
    }

    #[test]
    fn division_matches_reciprocal_product() {
        let x = Jet3::variable(0.3);
        let q = x.sin() / (x.exp() + 1.0);
        let r = x.sin() * (x.exp() + 1.0).recip();
        assert_jet(q, r.derivatives());
    }

    #[test]
    fn elementary_functions_at_zero() {
        let x = Jet3::variable(0.0);
        assert_jet(x.tan(), [0.0, 1.0, 0.0, 2.0]);
        assert_jet(x.sinh(), [0.0, 1.0, 0.0, 1.0]);
        assert_jet(x.exp(), [1.0, 1.0, 1.0, 1.0]);
        assert_jet(x.sin(), [0.0, 1.0, 0.0, -1.0]);
        assert_jet((x + 1.0).ln(), [0.0, 1.0, -1.0, 2.0]);
        assert_jet((x + 2.0).powi(3), [8.0, 12.0, 12.0, 6.0]);
        assert_jet((x + 2.0).powi(-1), [0.5, -0.25, 0.25, -0.375]);
    }

    #[test]
    fn scaled_argument_chain_rule() {
        // d³/dt³ tan(2t) at 0 = 2 · 2³ = 16
        let j = (Jet3::variable(0.0) * 2.0).tan();
        assert_jet(j, [0.0, 2.0, 0.0, 16.0]);
    }
}
