use super::gen::{gen_with_rng, trial_rng, ExprGenConfig};
use super::verdict::{expr_witness, Property, Status, Verdict, Witness};
use super::MetaError;
use crate::lang::{bool_semantics, Expr, FunRegistry, NegFlag};
use crate::semantics::{interpret, interpret_ereal, interpret_report, Backend, SemanticsError};

/// How a logic reads a truth value off a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruthPredicate {
    /// Closed-interval logics: only the exact images of the truth constants
    /// carry a verdict.
    Closed { top: f64, bottom: f64 },
    /// STL: nonnegative is true, negative is false.
    Stl,
}

impl TruthPredicate {
    pub fn for_backend(b: Backend) -> Self {
        match b {
            Backend::Stl { .. } => TruthPredicate::Stl,
            _ => TruthPredicate::Closed { top: b.finite_truth(true), bottom: b.finite_truth(false) },
        }
    }

    /// The boolean the logic assigns to `x`, if any.
    pub fn classify(&self, x: f64) -> Option<bool> {
        match *self {
            TruthPredicate::Stl => Some(x >= 0.0),
            TruthPredicate::Closed { top, .. } if x == top => Some(true),
            TruthPredicate::Closed { bottom, .. } if x == bottom => Some(false),
            TruthPredicate::Closed { .. } => None,
        }
    }

    /// `x` is the logic's rendering of `b`.
    pub fn holds(&self, b: bool, x: f64) -> bool {
        self.classify(x) == Some(b)
    }
}

fn ground_bool(e: &Expr, reg: &FunRegistry) -> Result<bool, MetaError> {
    bool_semantics(e, reg).map_err(|e| SemanticsError::from(e).into())
}

/// Outcome of one soundness trial: the witness if it is a violation.
fn soundness_trial(e: &Expr, b: Backend, reg: &FunRegistry) -> Result<Option<Witness>, MetaError> {
    let value = interpret(e, b, reg)?;
    let truth = ground_bool(e, reg)?;
    Ok(match TruthPredicate::for_backend(b).classify(value) {
        Some(c) if c != truth => Some(expr_witness(e, value, truth)),
        _ => None,
    })
}

/// Soundness in the closed-interval form: if `e` interprets exactly to the
/// image of a truth constant, its boolean value is that constant. Applies
/// to the fuzzy logics and to DL2 (negation-free).
pub fn check_soundness_closed(e: &Expr, b: Backend, reg: &FunRegistry) -> Result<Verdict, MetaError> {
    if matches!(b, Backend::Stl { .. }) {
        return Err(MetaError::WrongBackend { expected: "a closed-interval logic", found: b.to_string() });
    }
    if !b.has_negation() && e.contains_not() {
        return Err(MetaError::NegationPresent);
    }
    let mut v = Verdict::new(Property::Soundness, b, 0);
    v.record(soundness_trial(e, b, reg)?);
    Ok(v)
}

/// STL soundness: the sign of the interpretation matches the boolean value.
/// Only the negation-free fragment is sound.
pub fn check_soundness_stl(e: &Expr, b: Backend, reg: &FunRegistry) -> Result<Verdict, MetaError> {
    if !matches!(b, Backend::Stl { .. }) {
        return Err(MetaError::WrongBackend { expected: "stl", found: b.to_string() });
    }
    if e.contains_not() {
        return Err(MetaError::NegationPresent);
    }
    let mut v = Verdict::new(Property::Soundness, b, 0);
    v.record(soundness_trial(e, b, reg)?);
    Ok(v)
}

/// The extended-real soundness statement for DL2 and STL. Its premise
/// `⟦e⟧ = ⟦b⟧` with `⟦false⟧ = -∞` (and `⟦true⟧ = +∞` for STL) cannot be
/// met by any expression built from finite comparisons, so it holds
/// vacuously; the interpretation is still computed so errors surface.
pub fn check_soundness_ereal_vacuous(e: &Expr, b: Backend, reg: &FunRegistry) -> Result<Verdict, MetaError> {
    interpret_ereal(e, b, reg)?;
    let mut v = Verdict::new(Property::Soundness, b.with_mode(crate::semantics::TruthMode::ExtendedReal), 0);
    v.trials = 1;
    Ok(v.with_note("vacuous: infinite truth constants are unreachable from finite comparisons"))
}

/// Fuzz soundness with `budget` random ground expressions.
///
/// Among violations, one where the logic claims truth for a false
/// expression is preferred as the witness; otherwise the first.
pub fn fuzz_soundness(b: Backend, budget: u64, seed: u64, reg: &FunRegistry) -> Result<Verdict, MetaError> {
    let cfg = ExprGenConfig::for_soundness(b, seed);
    let mut v = Verdict::new(Property::Soundness, b, seed);
    let mut first: Option<Witness> = None;
    let mut first_true_claim: Option<Witness> = None;
    for t in 0..budget {
        let e = gen_with_rng(&cfg, reg, &mut trial_rng(seed, t))?;
        v.trials += 1;
        if let Some(w) = soundness_trial(&e, b, reg)? {
            v.violations += 1;
            if let Witness::Expr { boolean: false, .. } = w {
                first_true_claim.get_or_insert_with(|| w.clone());
            }
            first.get_or_insert(w);
        }
    }
    if v.violations > 0 {
        v.status = Status::No;
        v.witness = first_true_claim.or(first);
    }
    if !b.is_fuzzy() {
        v = v.with_note("negation-free fragment");
    }
    Ok(v)
}

/// And-inversion for STL: if the conjunction of `s` is classified true,
/// so is every conjunct.
pub fn check_inversion_and(s: &[Expr], b: Backend, reg: &FunRegistry) -> Result<Verdict, MetaError> {
    if !matches!(b, Backend::Stl { .. }) {
        return Err(MetaError::WrongBackend { expected: "stl", found: b.to_string() });
    }
    if s.iter().any(|e| e.contains_not()) {
        return Err(MetaError::NegationPresent);
    }
    let mut v = Verdict::new(Property::InversionAnd, b, 0);
    v.record(inversion_trial(s, b, reg)?);
    Ok(v)
}

fn inversion_trial(s: &[Expr], b: Backend, reg: &FunRegistry) -> Result<Option<Witness>, MetaError> {
    let and = Expr::and(NegFlag::Undefined, s.to_vec()).map_err(SemanticsError::from)?;
    let total = interpret(&and, b, reg)?;
    if total < 0.0 {
        return Ok(None);
    }
    for (i, e) in s.iter().enumerate() {
        let x = interpret(e, b, reg)?;
        if x < 0.0 {
            return Ok(Some(Witness::Conjuncts {
                text: s.iter().map(crate::speclang::to_text).collect(),
                exprs: s.to_vec(),
                conjunction: total,
                failing: i,
                conjunct: x,
            }));
        }
    }
    Ok(None)
}

pub fn fuzz_inversion_and(b: Backend, trials: u64, seed: u64, reg: &FunRegistry) -> Result<Verdict, MetaError> {
    use rand::Rng;
    let mut cfg = ExprGenConfig::for_soundness(b, seed);
    cfg.max_depth = 2;
    let mut v = Verdict::new(Property::InversionAnd, b, seed);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let k = rng.gen_range(1..=4);
        let s = (0..k).map(|_| gen_with_rng(&cfg, reg, &mut rng)).collect::<Result<Vec<_>, _>>()?;
        v.record(inversion_trial(&s, b, reg)?);
    }
    Ok(v)
}

/// Every random ground expression interprets into the logic's domain.
pub fn fuzz_range(b: Backend, trials: u64, seed: u64, reg: &FunRegistry) -> Result<Verdict, MetaError> {
    let cfg = ExprGenConfig::for_range(b, seed);
    let mut v = Verdict::new(Property::Range, b, seed);
    for t in 0..trials {
        let e = gen_with_rng(&cfg, reg, &mut trial_rng(seed, t))?;
        let r = interpret_report(&e, b, reg)?;
        let violation = if r.domain_ok { None } else { Some(expr_witness(&e, r.value, ground_bool(&e, reg)?)) };
        v.record(violation);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::TruthMode;
    use crate::speclang::{parse_expr, ParseOptions};

    fn parse(s: &str, flag: NegFlag) -> Expr {
        parse_expr(s, &FunRegistry::new(), ParseOptions { flag, ..ParseOptions::default() }).unwrap()
    }

    fn stl() -> Backend {
        Backend::stl(1.0, TruthMode::FiniteAlt).unwrap()
    }

    #[test]
    fn truth_predicates() {
        let p = TruthPredicate::Stl;
        assert!(p.holds(true, 0.0) && p.holds(false, -1e-300) && !p.holds(true, -2.0));
        let c = TruthPredicate::for_backend(Backend::Godel);
        assert_eq!(c.classify(0.5), None);
        assert!(c.holds(true, 1.0) && c.holds(false, 0.0));
    }

    #[test]
    fn closed_examples() {
        let reg = FunRegistry::new();
        let e = parse("2 == 2", NegFlag::Defined);
        assert!(check_soundness_closed(&e, Backend::Godel, &reg).unwrap().holds());
        let e = parse("1 == 3 \\/ 1 == 3", NegFlag::Defined);
        let v = check_soundness_closed(&e, Backend::Lukasiewicz, &reg).unwrap();
        assert_eq!(v.status, Status::No);
        assert!(matches!(v.witness, Some(Witness::Expr { interpreted, boolean: false, .. }) if interpreted == 1.0));
        assert!(v.replay(&reg).unwrap());
    }

    #[test]
    fn stl_examples() {
        let reg = FunRegistry::new();
        assert!(check_soundness_stl(&parse("1 <= 3", NegFlag::Undefined), stl(), &reg).unwrap().holds());
        assert!(check_soundness_stl(&parse("3 <= 1", NegFlag::Undefined), stl(), &reg).unwrap().holds());
        let neg = parse("!(3 <= 1)", NegFlag::Defined);
        assert_eq!(check_soundness_stl(&neg, stl(), &reg).unwrap_err(), MetaError::NegationPresent);
    }

    #[test]
    fn inversion_examples() {
        let reg = FunRegistry::new();
        let s = [parse("1 <= 3", NegFlag::Undefined), parse("2 <= 5", NegFlag::Undefined)];
        assert!(check_inversion_and(&s, stl(), &reg).unwrap().holds());
        let s = [parse("3 <= 1", NegFlag::Undefined)];
        assert!(check_inversion_and(&s, stl(), &reg).unwrap().holds());
    }

    #[test]
    fn vacuous_extended_real_variant() {
        let reg = FunRegistry::new();
        let e = parse("1 <= 3 /\\ false", NegFlag::Undefined);
        let v = check_soundness_ereal_vacuous(&e, Backend::dl2(TruthMode::ExtendedReal), &reg).unwrap();
        assert!(v.holds());
        assert!(v.note.unwrap().starts_with("vacuous"));
    }

    #[test]
    fn small_fuzz_budgets() {
        let reg = FunRegistry::standard(&[1, 2]);
        for b in [Backend::Godel, Backend::Product, Backend::dl2(TruthMode::FiniteAlt), stl()] {
            let v = fuzz_soundness(b, 2000, 0, &reg).unwrap();
            assert!(v.holds(), "{b}: {:?}", v.witness);
        }
        let v = fuzz_soundness(Backend::Lukasiewicz, 2000, 0, &reg).unwrap();
        assert_eq!(v.status, Status::No);
        assert!(matches!(v.witness, Some(Witness::Expr { interpreted, boolean: false, .. }) if interpreted == 1.0));
        assert!(v.replay(&reg).unwrap());
        assert!(fuzz_inversion_and(stl(), 1000, 0, &reg).unwrap().holds());
    }
}
