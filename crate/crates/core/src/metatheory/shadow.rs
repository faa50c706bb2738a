//! Shadow-lifting: every partial derivative of the n-ary conjunction is
//! strictly positive at a constant positive point.

use super::verdict::{Branch, Property, Verdict, Witness};
use super::MetaError;
use crate::diff::{conjunction, partial_fd, PartialEstimate, DEFAULT_TOL};
use crate::semantics::{Backend, TruthMode};

/// A partial counts as positive above this threshold.
pub const POSITIVE_THRESHOLD: f64 = 1e-6;

/// Tolerance for the STL branch limits against `1/(M+1)`.
pub const BRANCH_TOL: f64 = 1e-4;

pub(crate) fn lifts(est: &PartialEstimate) -> bool {
    est.converged && est.value > POSITIVE_THRESHOLD
}

pub(crate) fn branch_ok(est: &PartialEstimate, arity: usize) -> bool {
    let target = 1.0 / arity as f64;
    (est.left_limit - target).abs() <= BRANCH_TOL && (est.right_limit - target).abs() <= BRANCH_TOL
}

fn validate(m: usize, p: f64, min_m: usize) -> Result<(), MetaError> {
    if m < min_m {
        return Err(MetaError::InvalidParameter(format!("M must be at least {min_m}")));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(MetaError::InvalidParameter(format!("p must be positive, got {p}")));
    }
    Ok(())
}

/// Finite-difference partials of the `(M+1)`-ary conjunction at `const p`,
/// one per coordinate.
pub fn shadow_partials(b: Backend, m: usize, p: f64) -> Result<Vec<PartialEstimate>, MetaError> {
    validate(m, p, 0)?;
    let a = vec![p; m + 1];
    (0..=m).map(|i| Ok(partial_fd(conjunction(b), &a, i, DEFAULT_TOL)?)).collect()
}

/// Closed-form one-sided limits `(left, right)` of every partial of the
/// `(M+1)`-ary conjunction at `const p`. `None` for Yager outside
/// `0 < p < 1`, where its powers of `1 - p` are not real-differentiable.
pub fn expected_shadow_partial(b: Backend, m: usize, p: f64) -> Option<(f64, f64)> {
    let k = (m + 1) as f64;
    if matches!(b, Backend::Yager { .. }) && !(p > 0.0 && p < 1.0) {
        return None;
    }
    let kinked = |s: f64, slope: f64| match s.partial_cmp(&0.0)? {
        std::cmp::Ordering::Greater => Some((slope, slope)),
        std::cmp::Ordering::Less => Some((0.0, 0.0)),
        std::cmp::Ordering::Equal => Some((0.0, slope)),
    };
    match b {
        Backend::Godel if m == 0 => Some((1.0, 1.0)),
        Backend::Godel => Some((1.0, 0.0)),
        Backend::Lukasiewicz => kinked(k * p - m as f64, 1.0),
        Backend::Yager { p: q } => kinked(1.0 - k.powf(1.0 / q) * (1.0 - p), k.powf(1.0 / q - 1.0)),
        Backend::Product => Some((p.powi(m as i32), p.powi(m as i32))),
        Backend::Dl2 { .. } => Some((1.0, 1.0)),
        Backend::Stl { .. } => Some((1.0 / k, 1.0 / k)),
    }
}

/// Agreement tolerance for a shadow partial against its closed form:
/// `1e-8` absolute for DL2, `1e-6` relative for product and
/// `1e-4·max(1, |expected|)` otherwise (the finite-difference limits).
pub fn shadow_tolerance(b: Backend, expected: f64) -> f64 {
    match b {
        Backend::Dl2 { .. } => 1e-8,
        Backend::Product => 1e-6 * expected.abs(),
        _ => BRANCH_TOL * expected.abs().max(1.0),
    }
}

/// Shadow-lifting at one point: each partial converges (both one-sided
/// limits agree) and exceeds [`POSITIVE_THRESHOLD`]. The first failing
/// coordinate is the witness.
pub fn check_shadow_lifting(b: Backend, m: usize, p: f64) -> Result<Verdict, MetaError> {
    validate(m, p, 1)?;
    let mut v = Verdict::new(Property::ShadowLifting, b, 0);
    shadow_point(b, m, p, &mut v)?;
    Ok(v)
}

fn shadow_point(b: Backend, m: usize, p: f64, v: &mut Verdict) -> Result<(), MetaError> {
    for (coord, est) in shadow_partials(b, m, p)?.into_iter().enumerate() {
        let bad = !lifts(&est);
        v.record(bad.then(|| Witness::Partial {
            arity: m + 1,
            p,
            coord,
            left_limit: est.left_limit,
            right_limit: est.right_limit,
            branch: None,
        }));
    }
    Ok(())
}

/// Evaluation points used for the property matrix. The fuzzy logics live
/// on `[0, 1]` and are probed strictly inside it; DL2 and STL at the
/// points their lemmas are stated for.
pub fn shadow_grid(b: Backend) -> (Vec<usize>, Vec<f64>) {
    let ps = if b.is_fuzzy() { vec![0.25, 0.5, 0.75] } else { vec![0.5, 1.0, 2.0] };
    (vec![1, 2, 5], ps)
}

/// Shadow-lifting over every `(M, p)` of the grid.
pub fn check_shadow_grid(b: Backend, ms: &[usize], ps: &[f64]) -> Result<Verdict, MetaError> {
    let mut v = Verdict::new(Property::ShadowLifting, b, 0);
    for &m in ms {
        for &p in ps {
            validate(m, p, 1)?;
            shadow_point(b, m, p, &mut v)?;
        }
    }
    Ok(v)
}

/// Both STL branch functions, taken separately, have partials whose left
/// and right limits at `const p` each equal `1/(M+1)` within [`BRANCH_TOL`].
pub fn check_stl_branch_partials(nu: f64, m: usize, p: f64) -> Result<Verdict, MetaError> {
    validate(m, p, 0)?;
    let b = Backend::stl(nu, TruthMode::FiniteAlt)?;
    let mut v = Verdict::new(Property::ShadowLifting, b, 0);
    let a = vec![p; m + 1];
    for branch in [Branch::Gt0, Branch::Lt0] {
        for coord in 0..=m {
            let est = partial_fd(|x: &[f64]| branch.eval(x, nu), &a, coord, DEFAULT_TOL)?;
            let bad = !branch_ok(&est, m + 1);
            v.record(bad.then(|| Witness::Partial {
                arity: m + 1,
                p,
                coord,
                left_limit: est.left_limit,
                right_limit: est.right_limit,
                branch: Some(branch),
            }));
        }
    }
    Ok(v.with_note("branch functions"))
}
