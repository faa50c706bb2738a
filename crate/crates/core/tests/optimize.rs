use ldl::lang::{Builtin, Expr, FunRegistry, NegFlag};
use ldl::metatheory::{gen_with_leaf, trial_rng, ExprGenConfig};
use ldl::optimize::{ascend, BoxConstraint, Direction};
use ldl::semantics::{Backend, TruthMode};
use ldl::speclang::to_text;
use rand::Rng;

fn stl() -> Backend {
    Backend::stl(1.0, TruthMode::FiniteAlt).unwrap()
}

#[test]
fn every_iterate_stays_in_the_box() {
    let reg = FunRegistry::standard(&[2]);
    let mut cfg = ExprGenConfig::for_soundness(stl(), 0);
    cfg.bool_constants = false;
    for seed in 0..50 {
        let mut rng = trial_rng(11, seed);
        let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let e = gen_with_leaf(&cfg, &reg, ("x", &x), &mut rng).unwrap();
        if e.leaf_value("x").is_none() {
            continue;
        }
        let bx = BoxConstraint::new(vec![0.0, 0.0], 0.75).unwrap();
        let Ok(t) = ascend(&e, stl(), &reg, "x", &bx, 0.1, 50, Direction::Maximize) else { continue };
        assert!(t.iterates.iter().all(|it| bx.contains(&it.x)));
        assert_eq!(t.iterates.len(), t.steps + 1);
    }
}

#[test]
fn affine_objective_gains_lr_times_squared_gradient() {
    // x0 <= x1 under STL has value x1 - x0: gradient (-1, 1), |∇|² = 2.
    let reg = FunRegistry::new();
    let x = Expr::named_vector("x", vec![0.0, 0.0]).unwrap();
    let at = |i| Expr::lookup(x.clone(), Expr::index(2, i).unwrap()).unwrap();
    let lhs = Expr::le(NegFlag::Undefined, at(0), at(1)).unwrap();
    let both = Expr::and(NegFlag::Undefined, vec![lhs]).unwrap();
    let bx = BoxConstraint::new(vec![0.0, 0.0], 100.0).unwrap();
    let lr = 0.05;
    let t = ascend(&both, stl(), &reg, "x", &bx, lr, 20, Direction::Maximize).unwrap();
    for w in t.iterates.windows(2) {
        assert!((w[1].loss - w[0].loss - lr * 2.0).abs() < 1e-9);
    }
}

#[test]
fn small_steps_give_monotone_losses_on_smooth_stl_objectives() {
    // Smooth building blocks only: `<=` under STL is affine, identity and
    // vec_sub are linear. `==` (|y - x|), relu and norm_inf have kinks that
    // a fixed-step trajectory can zigzag across.
    let mut reg = FunRegistry::new();
    for n in [1, 2] {
        reg.register_builtin(format!("identity{n}"), Builtin::Identity, n).unwrap();
        reg.register_builtin(format!("vec_sub{n}"), Builtin::VecSub, 2 * n).unwrap();
    }
    let mut cfg = ExprGenConfig::for_soundness(stl(), 0);
    cfg.bool_constants = false;
    let mut runs = 0;
    for seed in 0..2000u64 {
        if runs == 100 {
            break;
        }
        let mut rng = trial_rng(23, seed);
        let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let e = gen_with_leaf(&cfg, &reg, ("x", &x), &mut rng).unwrap();
        if e.leaf_value("x").is_none() || to_text(&e).contains("==") {
            continue;
        }
        let direction = if seed % 2 == 0 { Direction::Maximize } else { Direction::Minimize };
        let bx = BoxConstraint::new(x.clone(), 0.5).unwrap();
        // Objectives that hit a tie along the way are not smooth there.
        let Ok(t) = ascend(&e, stl(), &reg, "x", &bx, 1e-3, 100, direction) else { continue };
        runs += 1;
        let sign = if direction == Direction::Maximize { 1.0 } else { -1.0 };
        for w in t.iterates.windows(2) {
            assert!(sign * (w[1].loss - w[0].loss) >= -1e-9, "seed {seed}: {} -> {}", w[0].loss, w[1].loss);
        }
    }
    assert_eq!(runs, 100);
}
