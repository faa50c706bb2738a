use serde::Serialize;

use super::backend::{Backend, TruthMode};
use super::connectives::{and_values, cmp_value, not_value, or_values, truth_finite};
use super::ereal::ExtScalar;
use super::{stl, SemanticsError};
use crate::lang::{eval_real, EvalCtx, Expr, ExprKind, FunRegistry, LdlType};
use crate::num::Real;

/// Result of interpreting an expression, with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interpretation {
    pub value: f64,
    /// The value lies in the logic's interpretation domain.
    pub domain_ok: bool,
    /// An exponent was clamped while evaluating the STL conjunction.
    pub clamped: bool,
}

/// Interpret a boolean or real expression under `b`.
///
/// Fails with [`SemanticsError::DomainViolation`] if a fuzzy or DL2 result
/// leaves its domain.
pub fn interpret(e: &Expr, b: Backend, reg: &FunRegistry) -> Result<f64, SemanticsError> {
    let report = interpret_report(e, b, reg)?;
    if !report.domain_ok {
        return Err(SemanticsError::DomainViolation { backend: b.to_string(), value: report.value });
    }
    Ok(report.value)
}

/// Like [`interpret`] but reports domain membership instead of failing.
pub fn interpret_report(e: &Expr, b: Backend, reg: &FunRegistry) -> Result<Interpretation, SemanticsError> {
    let ctx = EvalCtx::new(reg);
    let mut clamped = false;
    match e.ty() {
        LdlType::Bool(_) => {
            let value: f64 = interpret_with(e, b, &ctx, &mut clamped)?;
            Ok(Interpretation { value, domain_ok: b.domain_contains(value), clamped })
        }
        LdlType::Real => {
            let value: f64 = eval_real(e, &ctx)?;
            Ok(Interpretation { value, domain_ok: true, clamped })
        }
        other => Err(SemanticsError::Lang(crate::lang::LangError::NonBooleanRoot(other))),
    }
}

/// Generic interpretation of a boolean expression.
pub fn interpret_with<T: Real>(
    e: &Expr,
    b: Backend,
    ctx: &EvalCtx<'_>,
    clamped: &mut bool,
) -> Result<T, SemanticsError> {
    match e.kind() {
        ExprKind::BoolConst { value, .. } => {
            if b.mode() == Some(TruthMode::ExtendedReal) {
                return Err(SemanticsError::ExtendedConstant);
            }
            truth_finite(b, *value)
        }
        ExprKind::And { children, .. } => {
            let vals = children
                .iter()
                .map(|c| interpret_with(c, b, ctx, clamped))
                .collect::<Result<Vec<T>, _>>()?;
            and_values(b, &vals, clamped)
        }
        ExprKind::Or { children, .. } => {
            let vals = children
                .iter()
                .map(|c| interpret_with(c, b, ctx, clamped))
                .collect::<Result<Vec<T>, _>>()?;
            or_values(b, &vals, clamped)
        }
        ExprKind::Not(c) => {
            if !b.has_negation() {
                return Err(SemanticsError::NegationUndefined);
            }
            not_value(b, interpret_with(c, b, ctx, clamped)?)
        }
        ExprKind::Cmp { op, lhs, rhs, .. } => {
            let x: T = eval_real(lhs, ctx)?;
            let y: T = eval_real(rhs, ctx)?;
            cmp_value(b, *op, x, y)
        }
        _ => Err(SemanticsError::Lang(crate::lang::LangError::NonBooleanRoot(e.ty()))),
    }
}

/// Interpretation on the extended real line, for DL2 and STL. Truth
/// constants map to the top and bottom of the domain.
pub fn interpret_ereal(e: &Expr, b: Backend, reg: &FunRegistry) -> Result<ExtScalar, SemanticsError> {
    let b = match b {
        Backend::Dl2 { .. } | Backend::Stl { .. } => b.with_mode(TruthMode::ExtendedReal),
        other => return Err(SemanticsError::UnsupportedBackend(other.to_string())),
    };
    if !e.ty().is_bool() {
        return Err(SemanticsError::Lang(crate::lang::LangError::NonBooleanRoot(e.ty())));
    }
    ereal(e, b, &EvalCtx::new(reg))
}

fn ereal(e: &Expr, b: Backend, ctx: &EvalCtx<'_>) -> Result<ExtScalar, SemanticsError> {
    match e.kind() {
        ExprKind::BoolConst { value, .. } => Ok(b.truth(*value)),
        ExprKind::And { children, .. } | ExprKind::Or { children, .. } => {
            let is_and = matches!(e.kind(), ExprKind::And { .. });
            let vals = children.iter().map(|c| ereal(c, b, ctx)).collect::<Result<Vec<_>, _>>()?;
            if vals.is_empty() {
                return Ok(b.truth(is_and));
            }
            match b {
                Backend::Dl2 { .. } if is_and => {
                    vals.into_iter().try_fold(ExtScalar::Finite(0.0), |acc, x| acc.add(x))
                }
                Backend::Dl2 { .. } => {
                    let sign = if vals.len() % 2 == 1 { 1.0 } else { -1.0 };
                    Ok(vals.into_iter().fold(ExtScalar::Finite(sign), |acc, x| acc.mul(x)))
                }
                Backend::Stl { nu, .. } => Ok(stl_ereal(&vals, nu, is_and)),
                _ => unreachable!("extended-real semantics only exists for DL2 and STL"),
            }
        }
        ExprKind::Not(c) => match b {
            Backend::Stl { .. } => Ok(-ereal(c, b, ctx)?),
            _ => Err(SemanticsError::NegationUndefined),
        },
        ExprKind::Cmp { op, lhs, rhs, .. } => {
            let x: f64 = eval_real(lhs, ctx)?;
            let y: f64 = eval_real(rhs, ctx)?;
            Ok(ExtScalar::Finite(cmp_value(b, *op, x, y)?))
        }
        _ => Err(SemanticsError::Lang(crate::lang::LangError::NonBooleanRoot(e.ty()))),
    }
}

/// STL connectives with infinite operands: for conjunction the bottom is
/// absorbing and the top is neutral (mirrored for disjunction), which
/// agrees with the limits of the finite formula.
fn stl_ereal(vals: &[ExtScalar], nu: f64, is_and: bool) -> ExtScalar {
    let (absorbing, neutral) = if is_and {
        (ExtScalar::NegInf, ExtScalar::PosInf)
    } else {
        (ExtScalar::PosInf, ExtScalar::NegInf)
    };
    if vals.contains(&absorbing) {
        return absorbing;
    }
    let finite: Vec<f64> = vals.iter().filter_map(|v| v.finite()).collect();
    if finite.is_empty() {
        return neutral;
    }
    let v = if is_and { stl::stl_and(&finite, nu) } else { stl::stl_or(&finite, nu) };
    ExtScalar::Finite(v)
}
