//! Compositional properties of the connectives, checked on values drawn
//! from each logic's domain.

use rand::seq::SliceRandom;
use rand::Rng;

use super::gen::trial_rng;
use super::verdict::{Connective, Property, Status, Verdict, Witness};
use super::MetaError;
use crate::semantics::{and_f64, not_value, or_f64, stl_and, Backend, SemanticsError};

pub(crate) const IDEMPOTENCE_TOL: f64 = 1e-9;
pub(crate) const NEGATION_TOL: f64 = 1e-12;
/// Nesting disagreement that counts as an STL associativity failure.
pub const STL_ASSOCIATIVITY_THRESHOLD: f64 = 1e-6;

pub(crate) fn associativity_tol(b: Backend) -> f64 {
    match b {
        Backend::Stl { .. } => STL_ASSOCIATIVITY_THRESHOLD,
        _ => 1e-9,
    }
}

/// Equality up to reordering: exact for min/max, otherwise to within
/// `1e-12` relative, since reordering a sum or product changes rounding.
pub(crate) fn commutes(b: Backend, x: f64, y: f64) -> bool {
    match b {
        Backend::Godel => x == y,
        _ => (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0),
    }
}

/// A random value from the logic's domain. Domain endpoints show up with
/// small probability.
pub fn sample_value<R: Rng>(b: Backend, rng: &mut R) -> f64 {
    let special = rng.gen_bool(0.05);
    match b {
        Backend::Dl2 { .. } => {
            if special {
                0.0
            } else {
                -rng.gen_range(0.0..4.0)
            }
        }
        Backend::Stl { .. } => {
            if special {
                0.0
            } else {
                rng.gen_range(-3.0..3.0)
            }
        }
        _ => {
            if special {
                if rng.gen_bool(0.5) {
                    0.0
                } else {
                    1.0
                }
            } else {
                rng.gen_range(0.0..=1.0)
            }
        }
    }
}

/// Negation is defined and an involution. DL2 has no negation, which is
/// reported as `Undefined`.
pub fn check_negation(b: Backend, v: f64) -> Result<Verdict, MetaError> {
    let mut verdict = Verdict::new(Property::Negation, b, 0);
    negation_trial(b, v, &mut verdict)?;
    Ok(verdict)
}

fn negation_trial(b: Backend, v: f64, verdict: &mut Verdict) -> Result<(), MetaError> {
    match not_value(b, v) {
        Err(SemanticsError::NegationUndefined) => {
            verdict.status = Status::Undefined;
            verdict.trials += 1;
            Ok(())
        }
        Err(e) => Err(e.into()),
        Ok(once) => {
            let twice = not_value(b, once)?;
            let bad = (twice - v).abs() > NEGATION_TOL;
            verdict.record(bad.then_some(Witness::Negation { value: v, twice }));
            Ok(())
        }
    }
}

pub fn fuzz_negation(b: Backend, trials: u64, seed: u64) -> Result<Verdict, MetaError> {
    let mut verdict = Verdict::new(Property::Negation, b, seed);
    for t in 0..trials {
        let v = sample_value(b, &mut trial_rng(seed, t));
        negation_trial(b, v, &mut verdict)?;
        if verdict.status == Status::Undefined {
            return Ok(verdict.with_note("negation is not defined in this logic"));
        }
    }
    Ok(verdict)
}

/// Both n-ary connectives give the same value on `values` and on
/// `values` reordered by `perm` (`perm[k]` is the source index of slot `k`).
pub fn check_commutativity(b: Backend, values: &[f64], perm: &[usize]) -> Result<Verdict, MetaError> {
    let mut verdict = Verdict::new(Property::Commutativity, b, 0);
    commutativity_trial(b, values, perm, &mut verdict)?;
    Ok(verdict)
}

fn commutativity_trial(b: Backend, values: &[f64], perm: &[usize], verdict: &mut Verdict) -> Result<(), MetaError> {
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..values.len()).collect::<Vec<_>>() {
        return Err(MetaError::InvalidParameter(format!("{perm:?} is not a permutation of 0..{}", values.len())));
    }
    let permuted: Vec<f64> = perm.iter().map(|&i| values[i]).collect();
    for (connective, f) in [(Connective::And, and_f64 as fn(Backend, &[f64]) -> _), (Connective::Or, or_f64)] {
        let (original, after) = (f(b, values)?, f(b, &permuted)?);
        if !commutes(b, original, after) {
            verdict.record(Some(Witness::Permutation {
                connective,
                values: values.to_vec(),
                perm: perm.to_vec(),
                original,
                permuted: after,
            }));
            return Ok(());
        }
    }
    verdict.record(None);
    Ok(())
}

pub fn fuzz_commutativity(b: Backend, trials: u64, seed: u64) -> Result<Verdict, MetaError> {
    let mut verdict = Verdict::new(Property::Commutativity, b, seed);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let n = rng.gen_range(1..=5);
        let values: Vec<f64> = (0..n).map(|_| sample_value(b, &mut rng)).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        commutativity_trial(b, &values, &perm, &mut verdict)?;
    }
    Ok(verdict)
}

fn nestings(b: Backend, v: [f64; 3]) -> Result<(f64, f64), MetaError> {
    let left = and_f64(b, &[and_f64(b, &[v[0], v[1]])?, v[2]])?;
    let right = and_f64(b, &[v[0], and_f64(b, &[v[1], v[2]])?])?;
    Ok((left, right))
}

/// Both nestings of the binary conjunction agree: within `1e-9`, or for
/// STL within the counterexample threshold `1e-6`.
pub fn check_associativity(b: Backend, v0: f64, v1: f64, v2: f64) -> Result<Verdict, MetaError> {
    let mut verdict = Verdict::new(Property::Associativity, b, 0);
    associativity_trial(b, [v0, v1, v2], &mut verdict)?;
    Ok(verdict)
}

fn associativity_trial(b: Backend, v: [f64; 3], verdict: &mut Verdict) -> Result<(), MetaError> {
    let (left, right) = nestings(b, v)?;
    let bad = (left - right).abs() > associativity_tol(b);
    verdict.record(bad.then_some(Witness::Nesting { values: v, left_nested: left, right_nested: right }));
    Ok(())
}

/// Random triples for the closed-interval logics; the counterexample
/// search for STL.
pub fn fuzz_associativity(b: Backend, trials: u64, seed: u64) -> Result<Verdict, MetaError> {
    if let Backend::Stl { nu, .. } = b {
        let mut verdict = Verdict::new(Property::Associativity, b, seed);
        verdict.trials = GRID_POINTS as u64 + trials;
        if let Some(w) = stl_associativity_search(nu, trials, seed) {
            verdict.violations = 1;
            verdict.status = Status::No;
            verdict.witness = Some(w);
        }
        return Ok(verdict);
    }
    let mut verdict = Verdict::new(Property::Associativity, b, seed);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let v = [sample_value(b, &mut rng), sample_value(b, &mut rng), sample_value(b, &mut rng)];
        associativity_trial(b, v, &mut verdict)?;
    }
    Ok(verdict)
}

const GRID_STEPS: usize = 17;
const GRID_POINTS: usize = GRID_STEPS * GRID_STEPS * GRID_STEPS;

/// Search `[-2, 2]³` for a triple on which the two nestings of the STL
/// conjunction disagree by more than [`STL_ASSOCIATIVITY_THRESHOLD`].
///
/// A grid of step 0.25 locates the largest disagreement; `refine` random
/// perturbations within half a grid step then try to enlarge it.
pub fn stl_associativity_search(nu: f64, refine: u64, seed: u64) -> Option<Witness> {
    let gap = |v: [f64; 3]| {
        let left = stl_and(&[stl_and(&[v[0], v[1]], nu), v[2]], nu);
        let right = stl_and(&[v[0], stl_and(&[v[1], v[2]], nu)], nu);
        ((left - right).abs(), left, right)
    };
    let coord = |k: usize| -2.0 + 0.25 * k as f64;
    let mut best: Option<([f64; 3], f64)> = None;
    for i in 0..GRID_STEPS {
        for j in 0..GRID_STEPS {
            for k in 0..GRID_STEPS {
                let v = [coord(i), coord(j), coord(k)];
                let (d, ..) = gap(v);
                if d > best.map_or(0.0, |b| b.1) {
                    best = Some((v, d));
                }
            }
        }
    }
    let (mut v, mut d) = best?;
    for t in 0..refine {
        let mut rng = trial_rng(seed, t);
        let cand = v.map(|x| (x + rng.gen_range(-0.125..0.125)).clamp(-2.0, 2.0));
        let (dc, ..) = gap(cand);
        if dc > d {
            v = cand;
            d = dc;
        }
    }
    let (d, left, right) = gap(v);
    (d > STL_ASSOCIATIVITY_THRESHOLD).then_some(Witness::Nesting { values: v, left_nested: left, right_nested: right })
}

/// The conjunction of `k` copies of `v` is `v` (to within `1e-9`).
pub fn check_idempotence(b: Backend, v: f64, k: usize) -> Result<Verdict, MetaError> {
    if k == 0 {
        return Err(MetaError::InvalidParameter("idempotence needs at least one copy".into()));
    }
    let mut verdict = Verdict::new(Property::Idempotence, b, 0);
    idempotence_trial(b, v, k, &mut verdict)?;
    Ok(verdict)
}

fn idempotence_trial(b: Backend, v: f64, k: usize, verdict: &mut Verdict) -> Result<(), MetaError> {
    let result = and_f64(b, &vec![v; k])?;
    let bad = (result - v).abs() > IDEMPOTENCE_TOL;
    verdict.record(bad.then_some(Witness::Repetition { value: v, copies: k, result }));
    Ok(())
}

/// Random `(v, k)` with `k` in `2..=4`.
pub fn fuzz_idempotence(b: Backend, trials: u64, seed: u64) -> Result<Verdict, MetaError> {
    let mut verdict = Verdict::new(Property::Idempotence, b, seed);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let v = sample_value(b, &mut rng);
        let k = rng.gen_range(2..=4);
        idempotence_trial(b, v, k, &mut verdict)?;
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::TruthMode;

    fn stl(nu: f64) -> Backend {
        Backend::stl(nu, TruthMode::FiniteAlt).unwrap()
    }

    #[test]
    fn commutativity_examples() {
        let dl2 = Backend::dl2(TruthMode::FiniteAlt);
        assert!(check_commutativity(dl2, &[-1.0, -2.0], &[1, 0]).unwrap().holds());
        assert!(check_commutativity(Backend::Godel, &[0.3], &[0]).unwrap().holds());
        assert!(check_commutativity(Backend::Godel, &[0.3, 0.1], &[0, 0]).is_err());
        assert!(fuzz_commutativity(stl(1.0), 10_000, 0).unwrap().holds());
    }

    #[test]
    fn associativity_examples() {
        assert!(fuzz_associativity(Backend::Yager { p: 2.0 }, 10_000, 0).unwrap().holds());
        assert!(check_associativity(Backend::Godel, 0.4, 0.4, 0.4).unwrap().holds());
        for nu in [0.5, 1.0, 2.0] {
            let w = stl_associativity_search(nu, 200, 0).expect("counterexample");
            let Witness::Nesting { values, left_nested, right_nested } = w else { panic!() };
            assert!((left_nested - right_nested).abs() > STL_ASSOCIATIVITY_THRESHOLD);
            let v = check_associativity(stl(nu), values[0], values[1], values[2]).unwrap();
            assert_eq!(v.status, Status::No);
        }
    }

    #[test]
    fn idempotence_examples() {
        for k in 1..5 {
            assert!(check_idempotence(Backend::Godel, 0.37, k).unwrap().holds());
        }
        assert!(check_idempotence(stl(1.0), -1.0, 2).unwrap().holds());
        let v = check_idempotence(Backend::Product, 0.5, 2).unwrap();
        assert!(matches!(v.witness, Some(Witness::Repetition { result, .. }) if result == 0.25));
        assert!(fuzz_idempotence(stl(1.0), 5000, 0).unwrap().holds());
        assert_eq!(fuzz_idempotence(Backend::dl2(TruthMode::FiniteAlt), 100, 0).unwrap().status, Status::No);
    }

    #[test]
    fn negation_examples() {
        assert!(fuzz_negation(Backend::Lukasiewicz, 1000, 0).unwrap().holds());
        assert!(fuzz_negation(stl(1.0), 1000, 0).unwrap().holds());
        let v = fuzz_negation(Backend::dl2(TruthMode::FiniteAlt), 1000, 0).unwrap();
        assert_eq!(v.status, Status::Undefined);
        assert!(v.witness.is_none());
    }
}
