//! The smooth STL conjunction and its two non-trivial branches.
//!
//! For `a_min = min a` and relative deviations `ã_i = (a_i - a_min) / a_min`:
//!
//! * `a_min > 0`: `Σ a_i e^{-ν ã_i} / Σ e^{-ν ã_i}`
//! * `a_min < 0`: `Σ a_min e^{ã_i} e^{ν ã_i} / Σ e^{ν ã_i}`
//! * `a_min = 0`: `0`
//!
//! Disjunction is the De Morgan dual through STL negation:
//! `or(a) = -and(-a)`.
//!
//! The branch functions are total on any input with non-zero minimum so that
//! their partial derivatives can be probed on either side of a point.

use super::SemanticsError;
use crate::num::Real;

/// Minimum of `a` seeded with `x` (ties keep the accumulator).
fn seeded_min<T: Real>(x: T, a: &[T]) -> T {
    a.iter().fold(x, |acc, &y| acc.min_first(y))
}

pub(crate) fn min_dev_t<T: Real>(x: T, a: &[T]) -> T {
    let r = seeded_min(x, a);
    (x - r) / r
}

pub(crate) fn and_gt0_t<T: Real>(a: &[T], nu: f64, clamped: &mut bool) -> T {
    let mut num = T::zero();
    let mut den = T::zero();
    for &x in a {
        let (w, c) = (T::constant(-nu) * min_dev_t(x, a)).exp_clamped();
        *clamped |= c;
        num = num + x * w;
        den = den + w;
    }
    num / den
}

pub(crate) fn and_lt0_t<T: Real>(a: &[T], nu: f64, clamped: &mut bool) -> T {
    let mut num = T::zero();
    let mut den = T::zero();
    for &x in a {
        let dev = min_dev_t(x, a);
        let (e1, c1) = dev.exp_clamped();
        let (w, c2) = (T::constant(nu) * dev).exp_clamped();
        *clamped |= c1 || c2;
        num = num + seeded_min(x, a) * e1 * w;
        den = den + w;
    }
    num / den
}

/// Three-way dispatch on the sign of the minimum. `a` must be nonempty.
pub(crate) fn and_t<T: Real>(a: &[T], nu: f64, clamped: &mut bool) -> T {
    let a_min = seeded_min(a[0], &a[1..]).value();
    if a_min < 0.0 {
        and_lt0_t(a, nu, clamped)
    } else if a_min > 0.0 {
        and_gt0_t(a, nu, clamped)
    } else {
        T::zero()
    }
}

pub(crate) fn or_t<T: Real>(a: &[T], nu: f64, clamped: &mut bool) -> T {
    let neg: Vec<T> = a.iter().map(|&x| -x).collect();
    -and_t(&neg, nu, clamped)
}

/// Relative deviation `(x - r) / r` of `x` from `r`, the minimum of `a`
/// seeded with `x`.
pub fn min_dev(x: f64, a: &[f64]) -> Result<f64, SemanticsError> {
    if seeded_min(x, a) == 0.0 {
        return Err(SemanticsError::ZeroMinimum);
    }
    Ok(min_dev_t(x, a))
}

/// The `a_min > 0` branch.
pub fn stl_and_gt0(a: &[f64], nu: f64) -> Result<f64, SemanticsError> {
    if a.is_empty() {
        return Err(SemanticsError::EmptyList);
    }
    Ok(and_gt0_t(a, nu, &mut false))
}

/// The `a_min < 0` branch.
pub fn stl_and_lt0(a: &[f64], nu: f64) -> Result<f64, SemanticsError> {
    if a.is_empty() {
        return Err(SemanticsError::EmptyList);
    }
    Ok(and_lt0_t(a, nu, &mut false))
}

/// The STL conjunction. The empty conjunction is the finite truth value `1`.
pub fn stl_and(a: &[f64], nu: f64) -> f64 {
    if a.is_empty() {
        return 1.0;
    }
    and_t(a, nu, &mut false)
}

/// The STL disjunction, `-stl_and(-a)`. The empty disjunction is `-1`.
pub fn stl_or(a: &[f64], nu: f64) -> f64 {
    if a.is_empty() {
        return -1.0;
    }
    or_t(a, nu, &mut false)
}
