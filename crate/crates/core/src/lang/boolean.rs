use super::eval::{eval_real, EvalCtx};
use super::expr::{CmpOp, Expr, ExprKind};
use super::registry::FunRegistry;
use super::LangError;

/// Classical truth value of a boolean expression.
///
/// Empty conjunction is true, empty disjunction false. Real equality is
/// exact floating-point equality.
pub fn bool_semantics(e: &Expr, reg: &FunRegistry) -> Result<bool, LangError> {
    if !e.ty().is_bool() {
        return Err(LangError::NonBooleanRoot(e.ty()));
    }
    eval(e, &EvalCtx::new(reg))
}

fn eval(e: &Expr, ctx: &EvalCtx<'_>) -> Result<bool, LangError> {
    match e.kind() {
        ExprKind::BoolConst { value, .. } => Ok(*value),
        ExprKind::And { children, .. } => {
            for c in children {
                if !eval(c, ctx)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ExprKind::Or { children, .. } => {
            for c in children {
                if eval(c, ctx)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        ExprKind::Not(c) => Ok(!eval(c, ctx)?),
        ExprKind::Cmp { op, lhs, rhs, .. } => {
            let x: f64 = eval_real(lhs, ctx)?;
            let y: f64 = eval_real(rhs, ctx)?;
            Ok(match op {
                CmpOp::Le => x <= y,
                CmpOp::Eq => x == y,
            })
        }
        _ => Err(LangError::NonBooleanRoot(e.ty())),
    }
}
