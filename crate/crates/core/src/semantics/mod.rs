//! Interpretation of expressions under the six differentiable logics
//! (Gödel, Łukasiewicz, Yager, product, DL2, STL).

mod backend;
mod connectives;
mod ereal;
mod interpret;
pub mod stl;

use thiserror::Error;

pub use backend::{Backend, TruthMode};
pub use connectives::{and_f64, and_values, cmp_value, fuzzy_cmp, not_value, or_f64, or_values};
pub use ereal::ExtScalar;
pub use interpret::{interpret, interpret_ereal, interpret_report, interpret_with, Interpretation};
pub use stl::{min_dev, stl_and, stl_and_gt0, stl_and_lt0, stl_or};

use crate::lang::LangError;
use crate::num::Kink;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Lang(#[from] LangError),

    #[error("negation is undefined in DL2")]
    NegationUndefined,

    #[error("undefined extended-real arithmetic (inf - inf)")]
    InfinityArithmetic,

    #[error("{backend} produced {value}, outside its interpretation domain")]
    DomainViolation { backend: String, value: f64 },

    #[error("truth constant is infinite in extended-real mode; use the extended-real interpretation")]
    ExtendedConstant,

    #[error("extended-real interpretation is only defined for DL2 and STL, not {0}")]
    UnsupportedBackend(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty argument list")]
    EmptyList,

    #[error("minimum is zero")]
    ZeroMinimum,

    #[error("non-differentiable point (tie between branches with different slopes)")]
    NonDifferentiablePoint,
}

impl From<Kink> for SemanticsError {
    fn from(_: Kink) -> Self {
        SemanticsError::NonDifferentiablePoint
    }
}
