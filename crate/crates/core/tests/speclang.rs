use ldl::lang::{Expr, ExprKind, FunRegistry, NegFlag};
use ldl::metatheory::{gen_with_leaf, gen_with_rng, trial_rng, ExprGenConfig};
use ldl::semantics::{interpret, Backend, TruthMode};
use ldl::speclang::{parse, parse_expr, parse_with, robustness_spec, to_source, to_text, ParseOptions, SpecError};
use proptest::prelude::*;

fn config(seed: u64) -> ExprGenConfig {
    let mut cfg = ExprGenConfig::for_range(Backend::Godel, seed);
    cfg.max_depth = 3;
    cfg
}

/// Re-nest every And/Or with more than two children into a left-leaning
/// binary chain.
fn renest(e: &Expr) -> Expr {
    let nest = |children: &[Expr], and: bool, flag: NegFlag| -> Expr {
        let kids: Vec<Expr> = children.iter().map(renest).collect();
        if kids.len() <= 2 {
            return if and { Expr::and(flag, kids) } else { Expr::or(flag, kids) }.unwrap();
        }
        let mut acc = kids[0].clone();
        for k in &kids[1..] {
            let pair = vec![acc, k.clone()];
            acc = if and { Expr::and(flag, pair) } else { Expr::or(flag, pair) }.unwrap();
        }
        acc
    };
    match e.kind() {
        ExprKind::And { flag, children } => nest(children, true, *flag),
        ExprKind::Or { flag, children } => nest(children, false, *flag),
        ExprKind::Not(c) => Expr::not(renest(c)).unwrap(),
        _ => e.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_specs_reparse_to_the_same_expression(seed in any::<u64>(), with_leaf in any::<bool>()) {
        let reg = FunRegistry::standard(&[1, 2, 3]);
        let mut rng = trial_rng(seed, 0);
        let e = if with_leaf {
            gen_with_leaf(&config(seed), &reg, ("x", &[0.5, -1.0]), &mut rng).unwrap()
        } else {
            gen_with_rng(&config(seed), &reg, &mut rng).unwrap()
        };
        let src = to_source(&e, &reg);
        let spec = parse(&src, &FunRegistry::new()).unwrap();
        prop_assert_eq!(&spec.goal, &e, "source:\n{}", src);
        let unflat = parse_with(&src, &FunRegistry::new(), ParseOptions { flatten: false, ..Default::default() }).unwrap();
        prop_assert_eq!(&unflat.goal, &e);
    }

    #[test]
    fn flattening_preserves_meaning_under_associative_logics(seed in any::<u64>()) {
        let reg = FunRegistry::standard(&[1, 2, 3]);
        let mut cfg = ExprGenConfig::for_soundness(Backend::dl2(TruthMode::FiniteAlt), seed);
        cfg.max_arity = 4;
        let e = gen_with_rng(&cfg, &reg, &mut trial_rng(seed, 1)).unwrap();
        let nested = renest(&e);
        for b in [Backend::Godel, Backend::Product, Backend::dl2(TruthMode::FiniteAlt)] {
            let (Ok(flat), Ok(deep)) = (interpret(&e, b, &reg), interpret(&nested, b, &reg)) else { continue };
            prop_assert!((flat - deep).abs() <= 1e-9 * flat.abs().max(1.0), "{b}: {flat} vs {deep}");
        }
    }
}

#[test]
fn chains_flatten_unless_asked_not_to() {
    let reg = FunRegistry::new();
    let text = "1 <= 2 /\\ (2 <= 3 /\\ 3 <= 4)";
    let flat = parse_expr(text, &reg, ParseOptions::default()).unwrap();
    assert!(matches!(flat.kind(), ExprKind::And { children, .. } if children.len() == 3));
    let nested = parse_expr(text, &reg, ParseOptions { flatten: false, ..Default::default() }).unwrap();
    assert!(matches!(nested.kind(), ExprKind::And { children, .. } if children.len() == 2));
    assert_eq!(to_text(&nested), "1 <= 2 /\\ and(2 <= 3, 3 <= 4)");
}

#[test]
fn nesting_matters_for_stl_only_without_flattening() {
    let reg = FunRegistry::new();
    let stl = Backend::stl(1.0, TruthMode::FiniteAlt).unwrap();
    let text = "(0 <= -2 /\\ 0 <= -0.2) /\\ 0 <= -0.18";
    let flat = parse_expr(text, &reg, ParseOptions::default()).unwrap();
    let nested = parse_expr(text, &reg, ParseOptions { flatten: false, ..Default::default() }).unwrap();
    let gap = interpret(&flat, stl, &reg).unwrap() - interpret(&nested, stl, &reg).unwrap();
    assert!(gap.abs() > 1e-6);
}

#[test]
fn errors_carry_positions() {
    let reg = FunRegistry::new();
    let err = parse("vec x = [1]\ngoal:\nx[0] <= y", &reg).unwrap_err();
    assert_eq!(err.position(), Some((3, 9)));
    assert!(matches!(err, SpecError::Undeclared { .. }));
    let err = parse_expr("!(1 <= 2)", &reg, ParseOptions::default()).unwrap_err();
    assert!(matches!(err, SpecError::Type { .. }), "{err:?}");
}

#[test]
fn robustness_examples() {
    let stl = Backend::stl(1.0, TruthMode::FiniteAlt).unwrap();
    let mut reg = FunRegistry::standard(&[1]);
    let at_v = robustness_spec(&mut reg, "identity1", &[0.0], &[0.0], 1.0, 0.1).unwrap();
    assert!((interpret(&at_v, stl, &reg).unwrap() - 0.1).abs() < 1e-15);
    let off = robustness_spec(&mut reg, "identity1", &[0.0], &[1.0], 1.0, 0.1).unwrap();
    assert!((interpret(&off, stl, &reg).unwrap() + 0.9).abs() < 1e-15);
    assert!(ldl::lang::bool_semantics(&at_v, &reg).unwrap());
    let src = to_source(&off, &reg);
    assert_eq!(parse(&src, &FunRegistry::new()).unwrap().goal, off);
}
