//! Evaluation of the real- and vector-valued fragment, shared by every
//! semantics. Generic over [`Real`] so the same walk serves plain values and
//! dual numbers.

use super::expr::{Expr, ExprKind};
use super::registry::FunRegistry;
use super::types::LdlType;
use super::LangError;
use crate::num::Real;

/// Evaluation context: the function registry and, for forward-mode
/// differentiation, the leaf coordinate that carries unit tangent.
#[derive(Debug, Clone, Copy)]
pub struct EvalCtx<'a> {
    pub reg: &'a FunRegistry,
    pub seed: Option<(&'a str, usize)>,
}

impl<'a> EvalCtx<'a> {
    pub fn new(reg: &'a FunRegistry) -> Self {
        EvalCtx { reg, seed: None }
    }

    pub fn seeded(reg: &'a FunRegistry, leaf: &'a str, coord: usize) -> Self {
        EvalCtx { reg, seed: Some((leaf, coord)) }
    }
}

pub fn eval_real<T: Real>(e: &Expr, ctx: &EvalCtx<'_>) -> Result<T, LangError> {
    match e.kind() {
        ExprKind::RealConst(r) => Ok(T::constant(*r)),
        ExprKind::Lookup { vec, idx } => {
            let i = match idx.kind() {
                ExprKind::IdxConst { i, .. } => *i,
                _ => unreachable!("only index constants have index type"),
            };
            let v = eval_vector::<T>(vec, ctx)?;
            Ok(v[i])
        }
        _ => Err(LangError::TypeMismatch { context: "real evaluation", expected: "Real".into(), found: e.ty() }),
    }
}

pub fn eval_vector<T: Real>(e: &Expr, ctx: &EvalCtx<'_>) -> Result<Vec<T>, LangError> {
    match e.kind() {
        ExprKind::VecConst { name, entries } => {
            let seeded = match (name, ctx.seed) {
                (Some(name), Some((leaf, coord))) if name == leaf => Some(coord),
                _ => None,
            };
            Ok(entries
                .iter()
                .enumerate()
                .map(|(j, &x)| if seeded == Some(j) { T::seeded(x) } else { T::constant(x) })
                .collect())
        }
        ExprKind::App { fun, args } => {
            let name = match fun.kind() {
                ExprKind::FunSym { name, .. } => name,
                _ => unreachable!("only function symbols have function type"),
            };
            let mut input = Vec::new();
            for a in args {
                input.extend(eval_vector::<T>(a, ctx)?);
            }
            ctx.reg.apply(name, &input)
        }
        _ => Err(LangError::TypeMismatch {
            context: "vector evaluation",
            expected: "Vector[n]".into(),
            found: e.ty(),
        }),
    }
}

/// Numeric value of a non-boolean expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Vector(Vec<f64>),
    Index(usize),
}

/// Evaluate a `Real`, `Vector` or `Index` typed expression.
pub fn eval_value(e: &Expr, reg: &FunRegistry) -> Result<Value, LangError> {
    let ctx = EvalCtx::new(reg);
    match e.ty() {
        LdlType::Real => eval_real(e, &ctx).map(Value::Real),
        LdlType::Vector(_) => eval_vector(e, &ctx).map(Value::Vector),
        LdlType::Index(_) => match e.kind() {
            ExprKind::IdxConst { i, .. } => Ok(Value::Index(*i)),
            _ => unreachable!("only index constants have index type"),
        },
        found => Err(LangError::TypeMismatch { context: "value evaluation", expected: "Real or Vector".into(), found }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::NegFlag;

    #[test]
    fn lookup_through_application() {
        let reg = FunRegistry::standard(&[2]);
        let x = Expr::vector(vec![3.0, -4.0]).unwrap();
        let v = Expr::vector(vec![1.0, 1.0]).unwrap();
        let diff = Expr::app(Expr::fun(&reg, "vec_sub2").unwrap(), vec![x, v]).unwrap();
        let norm = Expr::app(Expr::fun(&reg, "norm_inf2").unwrap(), vec![diff]).unwrap();
        let e = Expr::lookup(norm, Expr::index(1, 0).unwrap()).unwrap();
        assert_eq!(eval_value(&e, &reg).unwrap(), Value::Real(5.0));
    }

    #[test]
    fn boolean_root_is_not_a_value() {
        let reg = FunRegistry::new();
        let b = Expr::boolean(NegFlag::Defined, true);
        assert!(eval_value(&b, &reg).is_err());
    }
}
