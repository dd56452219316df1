//! Forward-mode dual numbers and the scalar abstraction shared by every
//! differentiable evaluator in the crate.
//!
//! A [`Dual<T>`] carries a value and one directional derivative. Because
//! `Dual<T>` is itself [`Real`] whenever `T` is, nesting gives exact
//! higher-order mixed partials: `Dual<Dual<f64>>` yields second
//! derivatives, four levels yield fourth derivatives.

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar type usable by generic evaluators: plain `f64` or any nesting of
/// [`Dual`] over it.
pub trait Real:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(v: f64) -> Self;
    /// Innermost primal value.
    fn value(self) -> f64;
    /// True if every component (value and all derivative parts) is finite.
    fn all_finite(self) -> bool;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;

    fn zero() -> Self {
        Self::constant(0.0)
    }

    fn one() -> Self {
        Self::constant(1.0)
    }

    fn scale(self, k: f64) -> Self {
        self * Self::constant(k)
    }
}

impl Real for f64 {
    #[inline]
    fn constant(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn all_finite(self) -> bool {
        self.is_finite()
    }
    #[inline]
    fn exp(self) -> Self {
        libm::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        libm::log(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        libm::sqrt(self)
    }
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { 1.0 / self } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = 1.0;
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            base *= base;
            k >>= 1;
        }
        acc
    }
}

/// `re + du·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub du: T,
}

impl<T: Real> Dual<T> {
    pub fn new(re: T, du: T) -> Self {
        Dual { re, du }
    }

    /// Independent variable seeded with unit tangent.
    pub fn variable(re: T) -> Self {
        Dual { re, du: T::one() }
    }

    pub fn lift(re: T) -> Self {
        Dual { re, du: T::zero() }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.re * rhs.re, self.du * rhs.re + self.re * rhs.du)
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let re = self.re / rhs.re;
        Dual::new(re, (self.du - re * rhs.du) / rhs.re)
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.du)
    }
}

impl<T: Real> Real for Dual<T> {
    fn constant(v: f64) -> Self {
        Dual::lift(T::constant(v))
    }

    fn value(self) -> f64 {
        self.re.value()
    }

    fn all_finite(self) -> bool {
        self.re.all_finite() && self.du.all_finite()
    }

    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, self.du * e)
    }

    fn ln(self) -> Self {
        Dual::new(self.re.ln(), self.du / self.re)
    }

    fn sqrt(self) -> Self {
        let r = self.re.sqrt();
        Dual::new(r, self.du / (r + r))
    }

    fn powi(self, n: i32) -> Self {
        match n {
            0 => Dual::constant(1.0),
            _ => {
                let lower = self.re.powi(n - 1);
                Dual::new(lower * self.re, self.du * lower.scale(n as f64))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_quotient_rules() {
        let x = Dual::variable(3.0);
        let y = Dual::constant(2.0);
        assert_eq!((x * x).du, 6.0);
        assert_eq!((y / x).du, -2.0 / 9.0);
    }

    #[test]
    fn nested_gives_second_derivative() {
        // d²/dx² exp(2x) at x = 0.3
        let x: Dual<Dual<f64>> = Dual::new(Dual::variable(0.3), Dual::constant(1.0));
        let two = Dual::constant(2.0);
        let y = (two * x).exp();
        let expected = 4.0 * libm::exp(0.6);
        assert!((y.du.du - expected).abs() < 1e-14);
    }

    #[test]
    fn powi_handles_negative_and_zero_exponents() {
        assert_eq!(2.0f64.powi(-2), 0.25);
        assert_eq!((-3.0f64).powi(3), -27.0);
        let x = Dual::variable(-2.0);
        let y = x.powi(-1);
        assert_eq!(y.re, -0.5);
        assert_eq!(y.du, -0.25);
        assert_eq!(x.powi(0).du, 0.0);
    }
}
