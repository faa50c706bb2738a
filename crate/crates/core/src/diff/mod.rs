//! Derivatives of compiled losses: forward-mode dual numbers, and one-sided
//! finite-difference limits used both as an oracle and where the loss has a
//! kink.

mod dual;
mod fd;

use thiserror::Error;

pub use dual::Dual;
pub use fd::{partial_fd, ErrVec, PartialEstimate, DEFAULT_TOL, H_SCHEDULE};

use crate::lang::{eval_real, EvalCtx, Expr, FunRegistry, LdlType};
use crate::num::Real;
use crate::semantics::{and_f64, and_values, interpret_with, Backend, SemanticsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiffError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),

    #[error("function is not finite at step h = {h}")]
    NonFinite { h: f64 },

    #[error("difference quotients for coordinate {coord} did not settle (best residual {residual})")]
    NoConvergence { coord: usize, residual: f64 },

    #[error("coordinate {coord} out of range for dimension {dim}")]
    CoordinateOutOfRange { coord: usize, dim: usize },

    #[error("no vector leaf named `{0}` in the expression")]
    UnknownLeaf(String),

    #[error("leaf `{name}` has dimension {found}, expected {expected}")]
    LeafDimension { name: String, expected: usize, found: usize },
}

impl From<crate::lang::LangError> for DiffError {
    fn from(e: crate::lang::LangError) -> Self {
        DiffError::Semantics(e.into())
    }
}

fn leaf_dim(e: &Expr, leaf: &str) -> Option<usize> {
    e.leaves().into_iter().find(|(name, _)| name == leaf).map(|(_, n)| n)
}

fn dual_value(e: &Expr, b: Backend, ctx: &EvalCtx<'_>) -> Result<Dual, SemanticsError> {
    match e.ty() {
        LdlType::Real => Ok(eval_real::<Dual>(e, ctx)?),
        _ => interpret_with::<Dual>(e, b, ctx, &mut false),
    }
}

/// Forward-mode partial of the interpretation of `e` with respect to
/// coordinate `wrt.1` of the vector leaf named `wrt.0`.
///
/// Ties between `min`/`max` branches with different slopes are reported as
/// [`SemanticsError::NonDifferentiablePoint`], never resolved silently.
pub fn partial_dual(e: &Expr, b: Backend, reg: &FunRegistry, wrt: (&str, usize)) -> Result<f64, DiffError> {
    let (leaf, coord) = wrt;
    let dim = leaf_dim(e, leaf).ok_or_else(|| DiffError::UnknownLeaf(leaf.to_string()))?;
    if coord >= dim {
        return Err(DiffError::CoordinateOutOfRange { coord, dim });
    }
    Ok(dual_value(e, b, &EvalCtx::seeded(reg, leaf, coord))?.tangent)
}

/// Gradient of the interpretation with respect to the `n`-dimensional leaf
/// `leaf`. An expression that never mentions the leaf has zero gradient.
pub fn grad_input(e: &Expr, b: Backend, reg: &FunRegistry, leaf: &str, n: usize) -> Result<Vec<f64>, DiffError> {
    match leaf_dim(e, leaf) {
        None => {
            // Still surface errors such as undefined negation.
            dual_value(e, b, &EvalCtx::new(reg))?;
            Ok(vec![0.0; n])
        }
        Some(found) if found != n => Err(DiffError::LeafDimension { name: leaf.to_string(), expected: n, found }),
        Some(_) => (0..n).map(|i| Ok(dual_value(e, b, &EvalCtx::seeded(reg, leaf, i))?.tangent)).collect(),
    }
}

/// The interpretation of `e` as a function of the values of one leaf.
/// Interpretation errors map to NaN so that [`partial_fd`] reports them as
/// non-finite.
pub fn leaf_function<'a>(e: &'a Expr, b: Backend, reg: &'a FunRegistry, leaf: &'a str) -> impl Fn(&[f64]) -> f64 + 'a {
    move |x: &[f64]| {
        e.with_leaf(leaf, x)
            .map_err(SemanticsError::from)
            .and_then(|e| crate::semantics::interpret_report(&e, b, reg))
            .map(|r| r.value)
            .unwrap_or(f64::NAN)
    }
}

/// Finite-difference partial of the interpretation with respect to one leaf
/// coordinate.
pub fn partial_fd_expr(
    e: &Expr,
    b: Backend,
    reg: &FunRegistry,
    wrt: (&str, usize),
    tol: f64,
) -> Result<PartialEstimate, DiffError> {
    let (leaf, coord) = wrt;
    let a = e.leaf_value(leaf).ok_or_else(|| DiffError::UnknownLeaf(leaf.to_string()))?;
    partial_fd(leaf_function(e, b, reg, leaf), &a, coord, tol)
}

/// Forward-mode partial next to its finite-difference estimate.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Agreement {
    pub coord: usize,
    pub dual: f64,
    pub fd: PartialEstimate,
    /// Both finite-difference limits agree and match `dual` within
    /// `max(1e-6, 1e-4·|dual|)`.
    pub agrees: bool,
}

/// Check every forward-mode partial along `leaf` against finite
/// differences. Fails at ties, where forward mode has no answer.
pub fn compare_ad_fd(e: &Expr, b: Backend, reg: &FunRegistry, leaf: &str) -> Result<Vec<Agreement>, DiffError> {
    let at = e.leaf_value(leaf).ok_or_else(|| DiffError::UnknownLeaf(leaf.to_string()))?;
    let grad = grad_input(e, b, reg, leaf, at.len())?;
    let f = leaf_function(e, b, reg, leaf);
    grad.into_iter()
        .enumerate()
        .map(|(coord, dual)| {
            let fd = partial_fd(&f, &at, coord, DEFAULT_TOL)?;
            let agrees = fd.converged && (fd.value - dual).abs() <= f64::max(1e-6, 1e-4 * dual.abs());
            Ok(Agreement { coord, dual, fd, agrees })
        })
        .collect()
}

/// The backend's n-ary conjunction viewed as a function `ℝⁿ → ℝ`.
pub fn conjunction(b: Backend) -> impl Fn(&[f64]) -> f64 {
    move |a: &[f64]| and_f64(b, a).unwrap_or(f64::NAN)
}

/// Forward-mode partial of the n-ary conjunction at `a` along coordinate `i`.
pub fn conjunction_partial_dual(b: Backend, a: &[f64], i: usize) -> Result<f64, DiffError> {
    if i >= a.len() {
        return Err(DiffError::CoordinateOutOfRange { coord: i, dim: a.len() });
    }
    let x: Vec<Dual> = a
        .iter()
        .enumerate()
        .map(|(j, &v)| if j == i { Dual::seeded(v) } else { Dual::constant(v) })
        .collect();
    Ok(and_values(b, &x, &mut false)?.tangent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::NegFlag;
    use crate::semantics::TruthMode;

    const U: NegFlag = NegFlag::Undefined;

    fn x0_le(c: f64) -> (Expr, FunRegistry) {
        let reg = FunRegistry::new();
        let x = Expr::named_vector("x", vec![5.0]).unwrap();
        let e = Expr::le(U, Expr::lookup(x, Expr::index(1, 0).unwrap()).unwrap(), Expr::real(c).unwrap()).unwrap();
        (e, reg)
    }

    #[test]
    fn stl_comparison_is_affine() {
        let (e, reg) = x0_le(3.0);
        let stl = Backend::stl(1.0, TruthMode::FiniteAlt).unwrap();
        assert_eq!(partial_dual(&e, stl, &reg, ("x", 0)).unwrap(), -1.0);
        assert_eq!(grad_input(&e, stl, &reg, "x", 1).unwrap(), vec![-1.0]);
        assert_eq!(grad_input(&e, stl, &reg, "y", 3).unwrap(), vec![0.0; 3]);
        assert!(matches!(grad_input(&e, stl, &reg, "x", 2), Err(DiffError::LeafDimension { .. })));
        let fd = partial_fd_expr(&e, stl, &reg, ("x", 0), DEFAULT_TOL).unwrap();
        assert!((fd.value + 1.0).abs() < 1e-8);
    }

    #[test]
    fn product_rule_on_conjunction() {
        for (p, k) in [(0.5, 2), (0.3, 3), (0.9, 5)] {
            let a = vec![p; k];
            let d = conjunction_partial_dual(Backend::Product, &a, 0).unwrap();
            assert!((d - f64::powi(p, k as i32 - 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn godel_tie_is_a_kink() {
        assert_eq!(
            conjunction_partial_dual(Backend::Godel, &[0.5, 0.5], 0),
            Err(DiffError::Semantics(SemanticsError::NonDifferentiablePoint))
        );
        let est = partial_fd(conjunction(Backend::Godel), &[0.5, 0.5], 0, DEFAULT_TOL).unwrap();
        assert!(!est.converged);
        assert!((est.left_limit - 1.0).abs() < 1e-9);
        assert!(est.right_limit.abs() < 1e-9);
    }
}
