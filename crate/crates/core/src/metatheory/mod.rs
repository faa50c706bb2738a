//! Executable versions of the logical and geometric properties of the
//! differentiable logics: soundness, compositionality and shadow-lifting.
//!
//! Properties that hold are validated by bounded, seeded fuzzing; failures
//! come with a concrete [`Witness`] that [`Verdict::replay`] re-checks from
//! scratch.

mod algebra;
mod gen;
mod shadow;
mod soundness;
mod table2;
mod verdict;

use thiserror::Error;

pub use algebra::{
    check_associativity, check_commutativity, check_idempotence, check_negation, fuzz_associativity,
    fuzz_commutativity, fuzz_idempotence, fuzz_negation, sample_value, stl_associativity_search,
    STL_ASSOCIATIVITY_THRESHOLD,
};
pub use gen::{bool_depth, gen_ground_expr, gen_with_leaf, gen_with_rng, trial_rng, ExprGenConfig};
pub use shadow::{
    check_shadow_grid, check_shadow_lifting, check_stl_branch_partials, expected_shadow_partial, shadow_grid, shadow_tolerance, shadow_partials, BRANCH_TOL,
    POSITIVE_THRESHOLD,
};
pub use soundness::{
    check_inversion_and, check_soundness_closed, check_soundness_ereal_vacuous, check_soundness_stl,
    fuzz_inversion_and, fuzz_range, fuzz_soundness, TruthPredicate,
};
pub use table2::{run_table2, table2_registry, CellDiff, PatternRow, Table2, Table2Pattern, Table2Row, MIN_BUDGET, TABLE2_SCHEMA_VERSION};
pub use verdict::{Branch, Connective, Property, Status, Verdict, Witness};

use crate::diff::DiffError;
use crate::lang::LangError;
use crate::semantics::SemanticsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetaError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),

    #[error(transparent)]
    Diff(#[from] DiffError),

    #[error("expression contains a negation; this check covers the negation-free fragment")]
    NegationPresent,

    #[error("check needs {expected}, got {found}")]
    WrongBackend { expected: &'static str, found: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl From<LangError> for MetaError {
    fn from(e: LangError) -> Self {
        MetaError::Semantics(e.into())
    }
}
