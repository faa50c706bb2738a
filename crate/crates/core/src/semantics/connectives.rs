//! Value-level connectives and comparisons for every logic, generic over
//! [`Real`] so forward-mode differentiation reuses the same formulas.

use super::backend::Backend;
use super::{stl, SemanticsError};
use crate::lang::CmpOp;
use crate::num::Real;

/// Finite value of a truth constant under `b`, or an error when the active
/// truth mode maps it to an infinity.
pub(crate) fn truth_finite<T: Real>(b: Backend, value: bool) -> Result<T, SemanticsError> {
    b.truth(value).finite().map(T::constant).ok_or(SemanticsError::ExtendedConstant)
}

/// n-ary conjunction. The empty conjunction is the truth constant `True`.
pub fn and_values<T: Real>(b: Backend, a: &[T], clamped: &mut bool) -> Result<T, SemanticsError> {
    if a.is_empty() {
        return truth_finite(b, true);
    }
    let n = a.len() as f64;
    Ok(match b {
        Backend::Godel => fold_checked(a, T::min_checked)?,
        Backend::Lukasiewicz => {
            let s = sum(a);
            (s - T::constant(n) + T::one()).max_checked(T::zero())?
        }
        Backend::Yager { p } => {
            let mut s = T::zero();
            for &x in a {
                s = s + (T::one() - x).powf(p)?;
            }
            (T::one() - s.powf(1.0 / p)?).max_checked(T::zero())?
        }
        Backend::Product => a.iter().fold(T::one(), |acc, &x| acc * x),
        Backend::Dl2 { .. } => sum(a),
        Backend::Stl { nu, .. } => stl::and_t(a, nu, clamped),
    })
}

/// n-ary disjunction. The empty disjunction is the truth constant `False`.
pub fn or_values<T: Real>(b: Backend, a: &[T], clamped: &mut bool) -> Result<T, SemanticsError> {
    if a.is_empty() {
        return truth_finite(b, false);
    }
    Ok(match b {
        Backend::Godel => fold_checked(a, T::max_checked)?,
        Backend::Lukasiewicz => sum(a).min_checked(T::one())?,
        Backend::Yager { p } => {
            let mut s = T::zero();
            for &x in a {
                s = s + x.powf(p)?;
            }
            s.powf(1.0 / p)?.min_checked(T::one())?
        }
        Backend::Product => a.iter().fold(T::zero(), |acc, &x| acc + x - acc * x),
        Backend::Dl2 { .. } => {
            let sign = if a.len() % 2 == 1 { 1.0 } else { -1.0 };
            a.iter().fold(T::constant(sign), |acc, &x| acc * x)
        }
        Backend::Stl { nu, .. } => stl::or_t(a, nu, clamped),
    })
}

pub fn not_value<T: Real>(b: Backend, x: T) -> Result<T, SemanticsError> {
    match b {
        Backend::Dl2 { .. } => Err(SemanticsError::NegationUndefined),
        Backend::Stl { .. } => Ok(-x),
        _ => Ok(T::one() - x),
    }
}

pub fn cmp_value<T: Real>(b: Backend, op: CmpOp, x: T, y: T) -> Result<T, SemanticsError> {
    Ok(match (b, op) {
        (Backend::Dl2 { .. }, CmpOp::Le) => -(x - y).max_checked(T::zero())?,
        (Backend::Dl2 { .. } | Backend::Stl { .. }, CmpOp::Eq) => -(y - x).abs_checked()?,
        (Backend::Stl { .. }, CmpOp::Le) => y - x,
        _ => fuzzy_cmp_t(op, x, y)?,
    })
}

pub(crate) fn fuzzy_cmp_t<T: Real>(op: CmpOp, x: T, y: T) -> Result<T, SemanticsError> {
    if x.value() == -y.value() {
        let holds = match op {
            CmpOp::Le => x.value() <= y.value(),
            CmpOp::Eq => x.value() == y.value(),
        };
        return Ok(T::constant(if holds { 1.0 } else { 0.0 }));
    }
    let q = (x - y) / (x + y);
    Ok(match op {
        CmpOp::Le => (T::one() - q.max_checked(T::zero())?).max_checked(T::zero())?,
        CmpOp::Eq => (T::one() - q.abs_checked()?).max_checked(T::zero())?,
    })
}

/// Fuzzy comparison shared by the four fuzzy logics. When `x = -y` exactly
/// the boolean comparison is returned as `1.0` / `0.0`.
pub fn fuzzy_cmp(op: CmpOp, x: f64, y: f64) -> f64 {
    fuzzy_cmp_t(op, x, y).expect("f64 operations never kink")
}

fn sum<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |acc, &x| acc + x)
}

fn fold_checked<T: Real>(
    a: &[T],
    f: impl Fn(T, T) -> Result<T, crate::num::Kink>,
) -> Result<T, SemanticsError> {
    let mut acc = a[0];
    for &x in &a[1..] {
        acc = f(acc, x)?;
    }
    Ok(acc)
}

/// Conjunction of plain values.
pub fn and_f64(b: Backend, a: &[f64]) -> Result<f64, SemanticsError> {
    and_values(b, a, &mut false)
}

/// Disjunction of plain values.
pub fn or_f64(b: Backend, a: &[f64]) -> Result<f64, SemanticsError> {
    or_values(b, a, &mut false)
}
