use std::fmt::Write;

use ldl::diff::{compare_ad_fd, conjunction_partial_dual, grad_input, leaf_function, partial_fd, DEFAULT_TOL};
use ldl::lang::json::{to_json, type_to_json};
use ldl::lang::{Expr, FunRegistry};
use ldl::metatheory::{
    expected_shadow_partial, fuzz_range, fuzz_soundness, run_table2, shadow_partials, shadow_tolerance,
    table2_registry, Branch, Verdict,
};
use ldl::optimize::{ascend, BoxConstraint, Direction};
use ldl::semantics::{interpret_ereal, interpret_report, Backend, SemanticsError, TruthMode};
use ldl::speclang::{parse_expr, parse_with, to_source, to_text, ParseOptions};
use serde::Serialize;
use serde_json::json;

use crate::args::{
    CompileArgs, Emit, EvalArgs, FuzzArgs, GradArgs, OptimizeArgs, ShadowArgs, SourceArgs, Table2Args,
};
use crate::error::CliError;
use crate::golden::{self, Golden, ShadowGrid, ShadowPoint};
use crate::output::{json, num, vector, SCHEMA_VERSION};

/// Standard output of a command and whether all of its checks passed.
pub struct Outcome {
    pub stdout: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn pass(stdout: String) -> Self {
        Outcome { stdout, failure: None }
    }

    fn check(stdout: String, failure: Option<CliError>) -> Self {
        Outcome { stdout, failure }
    }
}

/// Registry available to every specification before its own declarations.
fn base_registry() -> FunRegistry {
    FunRegistry::standard(&[1, 2, 3, 4])
}

fn load(src: &SourceArgs) -> Result<(Expr, FunRegistry), CliError> {
    let text = match (&src.file, &src.expr) {
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| CliError::usage("io", format!("cannot read {}: {e}", path.display())))?,
        (None, Some(text)) => text.clone(),
        _ => return Err(CliError::usage("usage", "give either a specification file or --expr")),
    };
    let opts = ParseOptions { flatten: !src.no_flatten, flag: src.flag.into() };
    let reg = base_registry();
    if src.file.is_some() || text.contains("goal:") {
        let spec = parse_with(&text, &reg, opts)?;
        Ok((spec.goal, spec.registry))
    } else {
        Ok((parse_expr(&text, &reg, opts)?, reg))
    }
}

fn pick_leaf(e: &Expr, wrt: Option<&str>) -> Result<(String, usize), CliError> {
    let leaves = e.leaves();
    match wrt {
        Some(name) => leaves
            .into_iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| CliError::usage("leaf", format!("no vector leaf named `{name}`"))),
        None => match leaves.as_slice() {
            [one] => Ok(one.clone()),
            [] => Err(CliError::usage("leaf", "the specification has no vector leaf to differentiate")),
            _ => Err(CliError::usage("leaf", "several vector leaves; choose one with --wrt")),
        },
    }
}

fn is_extended(b: Backend) -> bool {
    b.mode() == Some(TruthMode::ExtendedReal)
}

/// Value of the goal under `b`, with its domain flag.
fn evaluate(e: &Expr, b: Backend, reg: &FunRegistry) -> Result<(f64, bool), CliError> {
    if is_extended(b) && e.ty().is_bool() {
        let v = interpret_ereal(e, b, reg)?.to_f64();
        return Ok((v, b.domain_contains(v)));
    }
    let r = interpret_report(e, b, reg)?;
    Ok((r.value, r.domain_ok))
}

fn domain_failure(b: Backend, value: f64) -> CliError {
    CliError::check("domain_violation", format!("{b} produced {}, outside its domain", num(value)))
}

pub fn compile(args: &CompileArgs) -> Result<Outcome, CliError> {
    let (e, reg) = load(&args.source)?;
    let b = args.logic.backend();
    let (value, domain_ok) = evaluate(&e, b, &reg)?;
    let stdout = match args.emit {
        Emit::Json => {
            json(&json!({
                "schema_version": SCHEMA_VERSION,
                "logic": b,
                "mode": b.mode().map(|m| if m == TruthMode::ExtendedReal { "ereal" } else { "finite" }),
                "type": type_to_json(e.ty()),
                "goal": to_text(&e),
                "expr": to_json(&e),
                "value": value,
                "domain_ok": domain_ok,
            })) + "\n"
        }
        Emit::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "# logic: {b}");
            let _ = writeln!(s, "# type: {}", e.ty());
            let _ = writeln!(s, "# value: {}", num(value));
            s.push_str(&to_source(&e, &reg));
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome::check(stdout, (!domain_ok).then(|| domain_failure(b, value))))
}

pub fn eval(args: &EvalArgs) -> Result<Outcome, CliError> {
    let (e, reg) = load(&args.source)?;
    let b = args.logic.backend();
    let (value, domain_ok) = evaluate(&e, b, &reg)?;
    let stdout = if args.json {
        let value_json = if value.is_finite() { json!(value) } else { json!(num(value)) };
        json(&json!({ "schema_version": SCHEMA_VERSION, "logic": b, "value": value_json, "domain_ok": domain_ok })) + "\n"
    } else {
        format!("{}\ndomain: {}\n", num(value), if domain_ok { "ok" } else { "violated" })
    };
    Ok(Outcome::check(stdout, (!domain_ok).then(|| domain_failure(b, value))))
}

pub fn grad(args: &GradArgs) -> Result<Outcome, CliError> {
    let (e, reg) = load(&args.source)?;
    let b = args.logic.backend();
    let (leaf, n) = pick_leaf(&e, args.wrt.as_deref())?;
    let g = match grad_input(&e, b, &reg, &leaf, n) {
        Ok(g) => g,
        Err(err) if is_kink(&err) => return kink_report(&e, b, &reg, &leaf, n, args.json),
        Err(err) => return Err(err.into()),
    };
    let checks = if args.check { compare_ad_fd(&e, b, &reg, &leaf)? } else { Vec::new() };
    let failed = checks.iter().filter(|c| !c.agrees).count();
    let stdout = if args.json {
        let mut v = json!({ "schema_version": SCHEMA_VERSION, "logic": b, "leaf": leaf, "gradient": g });
        if args.check {
            v["check"] = json!(checks);
        }
        json(&v) + "\n"
    } else {
        let mut s = vector(&g) + "\n";
        for c in &checks {
            let _ = writeln!(
                s,
                "coord {}: dual {}, fd {} ({})",
                c.coord,
                num(c.dual),
                num(c.fd.value),
                if c.agrees { "ok" } else { "MISMATCH" }
            );
        }
        s
    };
    let failure = (failed > 0)
        .then(|| CliError::check("ad_fd_mismatch", format!("{failed} partial(s) disagree with finite differences")));
    Ok(Outcome::check(stdout, failure))
}

fn is_kink(e: &ldl::diff::DiffError) -> bool {
    matches!(
        e,
        ldl::diff::DiffError::Semantics(SemanticsError::NonDifferentiablePoint)
            | ldl::diff::DiffError::Semantics(SemanticsError::Lang(ldl::lang::LangError::NonDifferentiablePoint))
    )
}

/// At a tie the gradient does not exist; report the one-sided limits.
fn kink_report(e: &Expr, b: Backend, reg: &FunRegistry, leaf: &str, n: usize, as_json: bool) -> Result<Outcome, CliError> {
    let f = leaf_function(e, b, reg, leaf);
    let at = e.leaf_value(leaf).expect("leaf exists");
    let mut limits = Vec::new();
    for i in 0..n {
        let est = partial_fd(&f, &at, i, DEFAULT_TOL)?;
        limits.push((est.left_limit, est.right_limit));
    }
    let stdout = if as_json {
        let rows: Vec<_> = limits.iter().map(|(l, r)| json!({ "left_limit": l, "right_limit": r })).collect();
        json(&json!({ "schema_version": SCHEMA_VERSION, "logic": b, "leaf": leaf, "gradient": null, "one_sided": rows })) + "\n"
    } else {
        let mut s = String::from("gradient undefined at a tie; one-sided limits:\n");
        for (i, (l, r)) in limits.iter().enumerate() {
            let _ = writeln!(s, "coord {i}: left {}, right {}", num(*l), num(*r));
        }
        s
    };
    Ok(Outcome::check(stdout, Some(CliError::check("non_differentiable", "the goal is not differentiable at this point"))))
}

pub fn table2(args: &Table2Args) -> Result<Outcome, CliError> {
    let table = run_table2(args.budget, args.seed)?;
    let pattern = table.pattern();
    let mut s = String::new();
    if args.update_golden {
        let path = args.golden.clone().unwrap_or_else(golden::table2_path);
        let note = format!("regenerated by `dlc table2 --budget {} --seed {} --update-golden`", args.budget, args.seed);
        golden::write(&path, &Golden { note, body: pattern.clone() })?;
        let _ = writeln!(s, "golden updated: {}", path.display());
    }
    let expected = if args.update_golden {
        pattern.clone()
    } else {
        golden::load_table2(args.golden.as_deref())?.body
    };
    let mismatches = pattern.diff(&expected);
    let replays = table.replay_witnesses()?;
    let unreplayed: Vec<_> = replays.iter().filter(|r| !r.2).collect();

    let stdout = if args.json {
        let replay_rows: Vec<_> =
            replays.iter().map(|(l, p, ok)| json!({ "logic": l, "property": p, "reproduces": ok })).collect();
        json(&json!({
            "schema_version": SCHEMA_VERSION,
            "table": table,
            "matches_golden": mismatches.is_empty(),
            "mismatches": mismatches,
            "replays": replay_rows,
        })) + "\n"
    } else {
        s.push_str(&table.render_text());
        s.push('\n');
        if mismatches.is_empty() {
            let _ = writeln!(s, "pattern: matches golden");
        } else {
            let show = |st: Option<ldl::metatheory::Status>| st.map_or("missing".to_string(), |st| st.to_string());
            for d in &mismatches {
                let _ = writeln!(s, "pattern: {} / {}: computed {}, golden {}", d.logic, d.property, show(d.computed), show(d.golden));
            }
        }
        let _ = writeln!(s, "witnesses replayed: {}/{}", replays.len() - unreplayed.len(), replays.len());
        s
    };
    let failure = if !mismatches.is_empty() {
        Some(CliError::check("table2_mismatch", format!("{} cell(s) differ from the golden pattern", mismatches.len())))
    } else if !unreplayed.is_empty() {
        Some(CliError::check("witness_replay", format!("{} witness(es) did not reproduce", unreplayed.len())))
    } else {
        None
    };
    Ok(Outcome::check(stdout, failure))
}

#[derive(Debug, Serialize)]
struct CoordReport {
    coord: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual: Option<f64>,
    left_limit: f64,
    right_limit: f64,
    ok: bool,
}

#[derive(Debug, Serialize)]
struct BranchReport {
    branch: Branch,
    coord: usize,
    left_limit: f64,
    right_limit: f64,
    ok: bool,
}

#[derive(Debug, Serialize)]
struct ShadowReport {
    logic: Backend,
    arity: usize,
    p: f64,
    expected_left: Option<f64>,
    expected_right: Option<f64>,
    coords: Vec<CoordReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    branches: Vec<BranchReport>,
    ok: bool,
}

impl ShadowReport {
    fn limits(&self) -> impl Iterator<Item = f64> + '_ {
        let coords = self.coords.iter().flat_map(|c| [c.left_limit, c.right_limit]);
        coords.chain(self.branches.iter().flat_map(|c| [c.left_limit, c.right_limit]))
    }
}

fn within(b: Backend, x: f64, expected: f64) -> bool {
    (x - expected).abs() <= shadow_tolerance(b, expected)
}

fn shadow_point(b: Backend, arity: usize, p: f64) -> Result<ShadowReport, CliError> {
    if arity == 0 {
        return Err(CliError::usage("invalid_parameter", "arity must be at least 1"));
    }
    let m = arity - 1;
    let expected = expected_shadow_partial(b, m, p);
    let a = vec![p; arity];
    let mut coords = Vec::new();
    for (i, est) in shadow_partials(b, m, p)?.into_iter().enumerate() {
        let dual = conjunction_partial_dual(b, &a, i).ok();
        let ok = match expected {
            None => true,
            Some((l, r)) => {
                within(b, est.left_limit, l)
                    && within(b, est.right_limit, r)
                    && dual.is_none_or(|d| l != r || within(b, d, l))
            }
        };
        coords.push(CoordReport { coord: i, dual, left_limit: est.left_limit, right_limit: est.right_limit, ok });
    }
    let mut branches = Vec::new();
    if let Backend::Stl { nu, .. } = b {
        let target = 1.0 / arity as f64;
        for branch in [Branch::Gt0, Branch::Lt0] {
            for i in 0..arity {
                let est = partial_fd(|x: &[f64]| branch.eval(x, nu), &a, i, DEFAULT_TOL)?;
                let ok = within(b, est.left_limit, target) && within(b, est.right_limit, target);
                branches.push(BranchReport { branch, coord: i, left_limit: est.left_limit, right_limit: est.right_limit, ok });
            }
        }
    }
    let ok = coords.iter().all(|c| c.ok) && branches.iter().all(|c| c.ok);
    Ok(ShadowReport {
        logic: b,
        arity,
        p,
        expected_left: expected.map(|e| e.0),
        expected_right: expected.map(|e| e.1),
        coords,
        branches,
        ok,
    })
}

fn render_shadow(r: &ShadowReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}  arity {}  p = {}", r.logic, r.arity, num(r.p));
    let expected = match (r.expected_left, r.expected_right) {
        (Some(l), Some(rr)) if l == rr => num(l),
        (Some(l), Some(rr)) => format!("left {}, right {}", num(l), num(rr)),
        _ => "no closed form".to_string(),
    };
    let _ = writeln!(s, "expected: {expected}");
    for c in &r.coords {
        let dual = c.dual.map(num).unwrap_or_else(|| "tie".to_string());
        let _ = writeln!(
            s,
            "coord {}: dual {}, left {:.10}, right {:.10}{}",
            c.coord,
            dual,
            c.left_limit,
            c.right_limit,
            if c.ok { "" } else { "  MISMATCH" }
        );
    }
    for br in &r.branches {
        let _ = writeln!(
            s,
            "branch {:?} coord {}: left {:.10}, right {:.10}{}",
            br.branch,
            br.coord,
            br.left_limit,
            br.right_limit,
            if br.ok { "" } else { "  MISMATCH" }
        );
    }
    s
}

/// The reference points: DL2 and product over `M ∈ {1,2,5,10}`, STL over
/// `ν ∈ {0.5,1,2}` and `M ∈ {1,2,5}`, all at `p ∈ {0.5,1,2}`.
fn shadow_reference_grid() -> Vec<(Backend, usize, f64)> {
    let ps = [0.5, 1.0, 2.0];
    let mut out = Vec::new();
    for b in [Backend::dl2(TruthMode::FiniteAlt), Backend::Product] {
        for m in [1, 2, 5, 10] {
            out.extend(ps.iter().map(|&p| (b, m + 1, p)));
        }
    }
    for nu in [0.5, 1.0, 2.0] {
        let b = Backend::Stl { nu, mode: TruthMode::FiniteAlt };
        for m in [1, 2, 5] {
            out.extend(ps.iter().map(|&p| (b, m + 1, p)));
        }
    }
    out
}

fn round9(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn shadow(args: &ShadowArgs) -> Result<Outcome, CliError> {
    if !args.grid {
        let b = args.logic.expect("clap requires --logic without --grid");
        let report = shadow_point(b, args.arity, args.p)?;
        let stdout = if args.json {
            let mut v = serde_json::to_value(&report).expect("report serialises");
            v["schema_version"] = json!(SCHEMA_VERSION);
            json(&v) + "\n"
        } else {
            render_shadow(&report)
        };
        let failure = (!report.ok).then(|| CliError::check("shadow_mismatch", "partials differ from the closed form"));
        return Ok(Outcome::check(stdout, failure));
    }

    let mut reports = Vec::new();
    for (b, arity, p) in shadow_reference_grid() {
        reports.push(shadow_point(b, arity, p)?);
    }
    let points: Vec<ShadowPoint> = reports
        .iter()
        .map(|r| ShadowPoint {
            logic: r.logic.to_string(),
            arity: r.arity,
            p: r.p,
            expected: r.expected_left.expect("reference logics have closed forms"),
            min_limit: round9(r.limits().fold(f64::INFINITY, f64::min)),
            max_limit: round9(r.limits().fold(f64::NEG_INFINITY, f64::max)),
        })
        .collect();
    let computed = ShadowGrid { schema_version: SCHEMA_VERSION, points };
    let mut s = String::new();
    if args.update_golden {
        let path = args.golden.clone().unwrap_or_else(golden::shadow_path);
        golden::write(&path, &Golden { note: "regenerated by `dlc shadow --grid --update-golden`".into(), body: computed.clone() })?;
        let _ = writeln!(s, "golden updated: {}", path.display());
    }
    let expected = if args.update_golden {
        computed.clone()
    } else {
        golden::load_shadow(args.golden.as_deref())?.body
    };
    let golden_ok = expected.points.len() == computed.points.len()
        && expected.points.iter().zip(&computed.points).all(|(g, c)| {
            g.logic == c.logic
                && g.arity == c.arity
                && g.p == c.p
                && g.expected == c.expected
                && (g.min_limit - c.min_limit).abs() <= 1e-7
                && (g.max_limit - c.max_limit).abs() <= 1e-7
        });
    let failing = reports.iter().filter(|r| !r.ok).count();
    let stdout = if args.json {
        json(&json!({
            "schema_version": SCHEMA_VERSION,
            "points": computed.points,
            "closed_form_ok": failing == 0,
            "matches_golden": golden_ok,
        })) + "\n"
    } else {
        for pt in &computed.points {
            let _ = writeln!(
                s,
                "{:<12} arity {:>2}  p = {:<4} expected {:<12} limits [{:.9}, {:.9}]",
                pt.logic,
                pt.arity,
                num(pt.p),
                num(pt.expected),
                pt.min_limit,
                pt.max_limit
            );
        }
        let _ = writeln!(s, "closed form: {}/{} points agree", reports.len() - failing, reports.len());
        let _ = writeln!(s, "golden: {}", if golden_ok { "matches" } else { "differs" });
        s
    };
    let failure = if failing > 0 {
        Some(CliError::check("shadow_mismatch", format!("{failing} grid point(s) differ from the closed form")))
    } else if !golden_ok {
        Some(CliError::check("golden_mismatch", "shadow grid differs from the golden file"))
    } else {
        None
    };
    Ok(Outcome::check(stdout, failure))
}

pub fn soundness_fuzz(args: &FuzzArgs) -> Result<Outcome, CliError> {
    let b = args.logic.backend();
    if args.budget == 0 {
        return Err(CliError::usage("invalid_parameter", "budget must be positive"));
    }
    let reg = table2_registry();
    let mut checks: Vec<Verdict> = vec![fuzz_soundness(b, args.budget, args.seed, &reg)?];
    if args.range {
        checks.push(fuzz_range(b, args.budget, args.seed, &reg)?);
    }
    let violations: u64 = checks.iter().map(|v| v.violations).sum();
    let stdout = if args.json {
        json(&json!({ "schema_version": SCHEMA_VERSION, "logic": b, "checks": checks })) + "\n"
    } else {
        let mut s = format!("logic: {b}\n");
        for v in &checks {
            let _ = writeln!(s, "{}: {} trials, {} violations", v.property, v.trials, v.violations);
            if let Some(w) = &v.witness {
                let _ = writeln!(s, "  witness: {}", w.describe());
            }
        }
        s
    };
    let failure = (violations > 0).then(|| CliError::check("violations", format!("{violations} violation(s) found")));
    Ok(Outcome::check(stdout, failure))
}

fn parse_box(spec: &str, n: usize) -> Result<BoxConstraint, CliError> {
    let values = spec
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|_| CliError::usage("invalid_parameter", format!("--box expects numbers, got `{spec}`")))?;
    let Some((&radius, center)) = values.split_last() else {
        return Err(CliError::usage("invalid_parameter", "--box needs a centre and a radius"));
    };
    let center = match center.len() {
        1 => vec![center[0]; n],
        k if k == n => center.to_vec(),
        k => {
            return Err(CliError::usage(
                "invalid_parameter",
                format!("--box centre has {k} values but the leaf has dimension {n}"),
            ))
        }
    };
    Ok(BoxConstraint::new(center, radius)?)
}

pub fn optimize(args: &OptimizeArgs) -> Result<Outcome, CliError> {
    let (e, reg) = load(&args.source)?;
    let b = args.logic.backend();
    let (leaf, n) = pick_leaf(&e, args.wrt.as_deref())?;
    let bounds = parse_box(&args.bounds, n)?;
    let direction: Direction = args.direction.into();
    let trace = ascend(&e, b, &reg, &leaf, &bounds, args.lr, args.steps, direction)?;
    let mut s = String::new();
    for (step, it) in trace.iterates.iter().enumerate() {
        let _ = writeln!(s, "{}", json(&json!({ "schema_version": SCHEMA_VERSION, "step": step, "x": it.x, "loss": it.loss })));
    }
    let last = trace.last();
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "summary": { "logic": b, "direction": direction, "converged": trace.converged, "steps": trace.steps, "x": last.x, "loss": last.loss },
    });
    let _ = writeln!(s, "{}", json(&summary));
    Ok(Outcome::pass(s))
}

/// One-line JSON diagnostic for a failure.
pub fn diagnostic(err: &CliError) -> String {
    let mut v = serde_json::to_value(err).expect("errors serialise");
    v["schema_version"] = json!(SCHEMA_VERSION);
    v["status"] = json!("error");
    json(&v)
}
