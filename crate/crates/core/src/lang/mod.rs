//! The expression language: types, typed expression trees, the function
//! registry and the classical boolean semantics.

mod boolean;
mod eval;
mod expr;
pub mod json;
mod registry;
mod types;

use thiserror::Error;

pub use boolean::bool_semantics;
pub use eval::{eval_real, eval_value, eval_vector, EvalCtx, Value};
pub use expr::{CmpOp, Expr, ExprKind};
pub use registry::{Builtin, FunEntry, FunRegistry};
pub use types::{LdlType, NegFlag};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LangError {
    #[error("type mismatch in {context}: expected {expected}, found {found}")]
    TypeMismatch { context: &'static str, expected: String, found: LdlType },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("negation is not allowed in the negation-free fragment")]
    NegationInUndefFragment,

    #[error("dimensions must be at least 1")]
    ZeroDimension,

    #[error("constant {0} is not finite")]
    NonFiniteConstant(f64),

    #[error("invalid leaf name `{0}`")]
    InvalidLeafName(String),

    #[error("function `{name}` expected {expected} values, got {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },

    #[error("function `{0}` is already registered")]
    DuplicateFunction(String),

    #[error("invalid function `{name}`: {reason}")]
    InvalidFunction { name: String, reason: String },

    #[error("function `{0}` is not differentiable")]
    NonDifferentiableFunction(String),

    #[error("non-differentiable point (tie between branches with different slopes)")]
    NonDifferentiablePoint,

    #[error("expected a boolean expression, found {0}")]
    NonBooleanRoot(LdlType),

    #[error("malformed expression JSON: {0}")]
    Json(String),
}
