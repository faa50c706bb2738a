//! Scalar abstraction shared by plain evaluation (`f64`) and forward-mode
//! differentiation ([`Dual`](crate::diff::Dual)).
//!
//! Every interpretation formula is written once against [`Real`]. Operations
//! that are not differentiable everywhere (`min`, `max`, `abs`, fractional
//! powers at zero) come in a checked form that reports a [`Kink`] when the
//! tangent is ambiguous. On `f64` the checked forms never fail.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest magnitude accepted by `exp` before clamping.
pub const EXP_CLAMP: f64 = 700.0;

/// A non-differentiable point was hit: two branches of `min`/`max`/`abs`
/// tie on the primal value but carry different tangents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Kink;

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
    /// Lift a constant (zero tangent).
    fn constant(x: f64) -> Self;

    /// Lift a value that carries unit tangent. For `f64` this is `constant`.
    fn seeded(x: f64) -> Self;

    /// Primal value.
    fn value(self) -> f64;

    /// Tangent component; always zero for `f64`.
    fn tangent(self) -> f64;

    /// `exp` with the exponent clamped to `±EXP_CLAMP`. The flag reports
    /// whether clamping happened.
    fn exp_clamped(self) -> (Self, bool);

    fn powf(self, p: f64) -> Result<Self, Kink>;

    fn abs_checked(self) -> Result<Self, Kink>;

    fn min_checked(self, other: Self) -> Result<Self, Kink>;

    fn max_checked(self, other: Self) -> Result<Self, Kink>;

    /// `min` with ties resolved toward `self`, never reporting a kink.
    fn min_first(self, other: Self) -> Self {
        if other.value() < self.value() {
            other
        } else {
            self
        }
    }

    fn zero() -> Self {
        Self::constant(0.0)
    }

    fn one() -> Self {
        Self::constant(1.0)
    }
}

impl Real for f64 {
    fn constant(x: f64) -> Self {
        x
    }

    fn seeded(x: f64) -> Self {
        x
    }

    fn value(self) -> f64 {
        self
    }

    fn tangent(self) -> f64 {
        0.0
    }

    fn exp_clamped(self) -> (Self, bool) {
        let clamped = self.clamp(-EXP_CLAMP, EXP_CLAMP);
        (clamped.exp(), clamped != self)
    }

    fn powf(self, p: f64) -> Result<Self, Kink> {
        Ok(f64::powf(self, p))
    }

    fn abs_checked(self) -> Result<Self, Kink> {
        Ok(self.abs())
    }

    fn min_checked(self, other: Self) -> Result<Self, Kink> {
        Ok(if other < self { other } else { self })
    }

    fn max_checked(self, other: Self) -> Result<Self, Kink> {
        Ok(if other > self { other } else { self })
    }
}
