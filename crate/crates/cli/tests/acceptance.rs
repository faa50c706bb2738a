//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::process::Command;
use std::time::Instant;

use ldl::diff::{compare_ad_fd, conjunction, conjunction_partial_dual, partial_fd, DiffError, DEFAULT_TOL};
use ldl::lang::FunRegistry;
use ldl::metatheory::{
    check_stl_branch_partials, fuzz_range, fuzz_soundness, gen_with_leaf, shadow_partials, table2_registry,
    trial_rng, ExprGenConfig, Status, Table2Pattern, TABLE2_SCHEMA_VERSION,
};
use ldl::optimize::{ascend, BoxConstraint, Direction};
use ldl::semantics::{Backend, SemanticsError, TruthMode};
use ldl::speclang::robustness_spec;
use rand::Rng;
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn dl2() -> Backend {
    Backend::dl2(TruthMode::FiniteAlt)
}

fn stl(nu: f64) -> Backend {
    Backend::Stl { nu, mode: TruthMode::FiniteAlt }
}

/// Forward-mode and finite-difference partials of the (M+1)-ary
/// conjunction at `const p`, checked against `target` with `ok`.
fn conjunction_partials(b: Backend, m: usize, p: f64, ok: impl Fn(f64) -> bool) -> Result<usize, String> {
    let a = vec![p; m + 1];
    let mut checked = 0;
    for i in 0..=m {
        let dual = conjunction_partial_dual(b, &a, i).map_err(|e| format!("{b} M={m} p={p}: {e}"))?;
        let fd = partial_fd(conjunction(b), &a, i, DEFAULT_TOL).map_err(|e| format!("{b} M={m} p={p}: {e}"))?;
        for (what, v) in [("dual", dual), ("left", fd.left_limit), ("right", fd.right_limit)] {
            if !ok(v) {
                return Err(format!("{b} M={m} p={p} coord {i}: {what} partial {v}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn criterion_1() -> Check {
    let mut n = 0;
    for m in [1, 2, 5, 10] {
        for p in [0.5, 1.0, 2.0] {
            n += conjunction_partials(dl2(), m, p, |v| (v - 1.0).abs() <= 1e-8)?;
        }
    }
    Ok(format!("{n} DL2 partials equal 1 within 1e-8"))
}

fn criterion_2() -> Check {
    let mut n = 0;
    for m in [1, 2, 5, 10] {
        for p in [0.5, 1.0, 2.0] {
            let target = f64::powi(p, m as i32);
            n += conjunction_partials(Backend::Product, m, p, |v| (v - target).abs() <= 1e-6 * target)?;
        }
    }
    Ok(format!("{n} product partials equal p^M within 1e-6 relative"))
}

fn criterion_3() -> Check {
    let mut n = 0;
    for nu in [0.5, 1.0, 2.0] {
        for m in [1, 2, 5] {
            for p in [0.5, 1.0, 2.0] {
                let target = 1.0 / (m + 1) as f64;
                let ests = shadow_partials(stl(nu), m, p).map_err(|e| e.to_string())?;
                for (i, est) in ests.iter().enumerate() {
                    for v in [est.left_limit, est.right_limit] {
                        if (v - target).abs() > 1e-4 {
                            return Err(format!("stl_and nu={nu} M={m} p={p} coord {i}: limit {v}, want {target}"));
                        }
                        n += 1;
                    }
                }
                let branches = check_stl_branch_partials(nu, m, p).map_err(|e| e.to_string())?;
                if branches.status != Status::Yes {
                    let w = branches.witness.map(|w| w.describe()).unwrap_or_default();
                    return Err(format!("branch partials nu={nu} M={m} p={p}: {w}"));
                }
                n += 4 * (m + 1);
            }
        }
    }
    Ok(format!("{n} one-sided limits equal 1/(M+1) within 1e-4"))
}

fn find_cell<'a>(table: &'a Value, logic: &str, property: &str) -> Option<&'a Value> {
    table["rows"]
        .as_array()?
        .iter()
        .find(|r| r["logic"] == logic)?["cells"]
        .as_array()?
        .iter()
        .find(|c| c["property"] == property)
}

fn criterion_4() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_dlc"))
        .args(["table2", "--budget", "10000", "--seed", "0", "--json"])
        .output()
        .map_err(|e| format!("cannot run dlc: {e}"))?;
    if !out.status.success() {
        return Err(format!("dlc exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("bad JSON: {e}"))?;
    let table = &v["table"];
    if v["matches_golden"] != true || table["schema_version"] != TABLE2_SCHEMA_VERSION {
        return Err("output does not match the golden pattern".into());
    }

    let expected = Table2Pattern::expected();
    for row in &expected.rows {
        for (col, want) in expected.columns.iter().zip(&row.cells) {
            let name = serde_json::to_value(col).expect("serialisable");
            let cell = find_cell(table, &row.logic, name.as_str().expect("string"))
                .ok_or_else(|| format!("missing cell {}/{col}", row.logic))?;
            if cell["status"] != serde_json::to_value(want).expect("serialisable") {
                return Err(format!("{} / {col}: got {}, want {want}", row.logic, cell["status"]));
            }
            if *want == Status::No && cell["witness"].is_null() {
                return Err(format!("{} / {col} has no witness", row.logic));
            }
        }
    }
    if v["replays"].as_array().is_none_or(|r| r.iter().any(|x| x["reproduces"] != true)) {
        return Err("a witness did not replay".into());
    }

    let luk = &find_cell(table, "lukasiewicz", "soundness").ok_or("missing Łukasiewicz soundness")?["witness"];
    if !(luk["boolean"] == false && luk["interpreted"].as_f64() == Some(1.0)) {
        return Err(format!("Łukasiewicz soundness witness is not true-valued and false: {luk}"));
    }
    let assoc = &find_cell(table, "stl", "associativity").ok_or("missing STL associativity")?["witness"];
    let gap = (assoc["left_nested"].as_f64().unwrap_or(0.0) - assoc["right_nested"].as_f64().unwrap_or(0.0)).abs();
    if gap.is_nan() || gap <= 1e-6 {
        return Err(format!("STL associativity witness gap {gap}"));
    }
    Ok(format!("pattern matches; Łukasiewicz witness interprets to 1 but is false; STL nesting gap {gap:.3e}"))
}

fn criterion_5() -> Check {
    let reg = table2_registry();
    let mut parts = Vec::new();
    for b in [Backend::Godel, Backend::Product, stl(1.0)] {
        let v = fuzz_soundness(b, 100_000, 0, &reg).map_err(|e| e.to_string())?;
        if v.violations != 0 {
            let w = v.witness.map(|w| w.describe()).unwrap_or_default();
            return Err(format!("{b}: {} violations, e.g. {w}", v.violations));
        }
        parts.push(format!("{b} {}", v.trials));
    }
    Ok(format!("zero violations ({})", parts.join(", ")))
}

fn criterion_6() -> Check {
    let reg = table2_registry();
    let backends = [Backend::Godel, Backend::Lukasiewicz, Backend::Yager { p: 2.0 }, Backend::Product, dl2()];
    for b in backends {
        let v = fuzz_range(b, 100_000, 0, &reg).map_err(|e| e.to_string())?;
        if v.violations != 0 {
            let w = v.witness.map(|w| w.describe()).unwrap_or_default();
            return Err(format!("{b}: {} out-of-domain values, e.g. {w}", v.violations));
        }
    }
    Ok("1e5 expressions per backend stay in [0, 1] (fuzzy) and (-inf, 0] (DL2)".into())
}

/// Instances where forward mode meets a tie or finite differences straddle
/// a kink are not smooth and are redrawn.
fn is_non_smooth(e: &DiffError) -> bool {
    matches!(
        e,
        DiffError::Semantics(SemanticsError::NonDifferentiablePoint)
            | DiffError::Semantics(SemanticsError::Lang(ldl::lang::LangError::NonDifferentiablePoint))
            | DiffError::NoConvergence { .. }
            | DiffError::NonFinite { .. }
    )
}

fn criterion_7() -> Check {
    let reg = FunRegistry::standard(&[1, 2, 3]);
    let mut summary = Vec::new();
    for b in Backend::standard_six() {
        let mut cfg = ExprGenConfig::for_range(b, 0);
        cfg.max_depth = 2;
        cfg.max_arity = 3;
        cfg.bool_constants = false;
        let (lo, hi) = if b.is_fuzzy() { (0.1, 4.0) } else { (-3.0, 3.0) };
        let (mut accepted, mut drawn, mut partials, mut nonzero) = (0, 0u64, 0, 0);
        while accepted < 100 {
            if drawn >= 20_000 {
                return Err(format!("{b}: only {accepted} smooth instances in {drawn} draws"));
            }
            let mut rng = trial_rng(7, drawn);
            drawn += 1;
            let n = rng.gen_range(1..=3);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
            let e = gen_with_leaf(&cfg, &reg, ("x", &x), &mut rng).map_err(|e| e.to_string())?;
            if e.leaf_value("x").is_none() {
                continue;
            }
            let agreements = match compare_ad_fd(&e, b, &reg, "x") {
                Ok(a) => a,
                Err(err) if is_non_smooth(&err) => continue,
                Err(err) => return Err(format!("{b}: {err}")),
            };
            // Constant instances (flat regions, saturated comparisons) say
            // nothing about the derivative code.
            if agreements.iter().any(|a| !a.fd.converged) || agreements.iter().all(|a| a.dual == 0.0) {
                continue;
            }
            if let Some(bad) = agreements.iter().find(|a| !a.agrees) {
                return Err(format!(
                    "{b}: dual {} vs fd {} at coord {} of {}",
                    bad.dual,
                    bad.fd.value,
                    bad.coord,
                    ldl::speclang::to_text(&e)
                ));
            }
            accepted += 1;
            partials += agreements.len();
            nonzero += agreements.iter().filter(|a| a.dual != 0.0).count();
        }
        summary.push(format!("{} {nonzero}/{partials}/{drawn}", b.family()));
    }
    Ok(format!("partials agree on 100 instances per backend (nonzero/partials/draws: {})", summary.join(", ")))
}

fn criterion_8() -> Check {
    let mut parts = Vec::new();
    for n in [1, 2, 3] {
        let mut reg = FunRegistry::standard(&[n]);
        let zero = vec![0.0; n];
        let e = robustness_spec(&mut reg, &format!("identity{n}"), &zero, &zero, 1.0, 0.1).map_err(|e| e.to_string())?;
        let bounds = BoxConstraint::new(zero.clone(), 1.0).map_err(|e| e.to_string())?;
        let trace = ascend(&e, stl(1.0), &reg, "x", &bounds, 0.01, 1000, Direction::Minimize).map_err(|e| e.to_string())?;
        let last = trace.last();
        let dist = last.x.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if (last.loss + 0.9).abs() > 1e-6 || (dist - 1.0).abs() > 1e-12 {
            return Err(format!("n={n}: ended at {:?} with loss {}", last.x, last.loss));
        }
        parts.push(format!("n={n} in {} steps", trace.steps));
    }
    Ok(format!("loss -0.9 on the box boundary ({})", parts.join(", ")))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("DL2 shadow-lifting partials", criterion_1),
        ("product shadow-lifting partials", criterion_2),
        ("STL shadow-lifting limits", criterion_3),
        ("property matrix reproduction", criterion_4),
        ("soundness fuzzing", criterion_5),
        ("range invariant", criterion_6),
        ("AD/FD agreement", criterion_7),
        ("robustness demo", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
