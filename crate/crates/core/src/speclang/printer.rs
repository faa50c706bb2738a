use std::collections::BTreeSet;
use std::fmt::Write;

use crate::lang::{Builtin, CmpOp, Expr, ExprKind, FunRegistry, NegFlag};

/// Surface syntax of a boolean, real or vector expression.
///
/// Chains of two or more children print infix. Empty and singleton
/// connectives, and a connective directly nested in one of the same kind,
/// print in the explicit `and(...)` / `or(...)` form so the text re-parses
/// to the same tree with or without flattening.
pub fn to_text(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, &mut out);
    out
}

/// A complete spec file for `e`: flag, `fun` declarations for every
/// builtin function it applies, `vec` declarations for its named leaves,
/// and the goal.
pub fn to_source(e: &Expr, reg: &FunRegistry) -> String {
    let mut out = String::new();
    if e.ty().flag() == Some(NegFlag::Defined) {
        out.push_str("flag: defined\n");
    }
    let mut funs = BTreeSet::new();
    collect_funs(e, &mut funs);
    for name in funs {
        match reg.get(&name).and_then(|entry| entry.builtin().map(|b| (b, entry.n))) {
            Some((b, n)) => {
                let _ = writeln!(out, "fun {name}: {}", builtin_decl(b, n));
            }
            None => {
                let _ = writeln!(out, "# `{name}` is a host function and must be registered before parsing");
            }
        }
    }
    for (name, _) in e.leaves() {
        let values = e.leaf_value(&name).unwrap_or_default();
        let _ = writeln!(out, "vec {name} = {}", number_list(&values));
    }
    let _ = writeln!(out, "goal: {}", to_text(e));
    out
}

fn builtin_decl(b: &Builtin, n: usize) -> String {
    match b {
        Builtin::Affine { weights, bias } => {
            let rows: Vec<String> = weights.iter().map(|r| number_list(r)).collect();
            format!("affine [{}] {}", rows.join(", "), number_list(bias))
        }
        other => format!("{} {n}", other.keyword()),
    }
}

fn collect_funs(e: &Expr, out: &mut BTreeSet<String>) {
    if let ExprKind::FunSym { name, .. } = e.kind() {
        out.insert(name.clone());
    }
    for c in e.children() {
        collect_funs(c, out);
    }
}

fn number(x: f64) -> String {
    // Display is the shortest representation that round-trips.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

fn number_list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| number(x)).collect();
    format!("[{}]", items.join(", "))
}

fn write_expr(e: &Expr, out: &mut String) {
    match e.kind() {
        ExprKind::BoolConst { value, .. } => out.push_str(if *value { "true" } else { "false" }),
        ExprKind::And { children, .. } | ExprKind::Or { children, .. } => {
            let is_and = matches!(e.kind(), ExprKind::And { .. });
            if children.len() < 2 {
                write_explicit(is_and, children, out);
                return;
            }
            let sep = if is_and { " /\\ " } else { " \\/ " };
            for (k, c) in children.iter().enumerate() {
                if k > 0 {
                    out.push_str(sep);
                }
                match c.kind() {
                    ExprKind::And { children: cc, .. } if is_and && cc.len() >= 2 => write_explicit(true, cc, out),
                    ExprKind::Or { children: cc, .. } if !is_and && cc.len() >= 2 => write_explicit(false, cc, out),
                    ExprKind::And { children: cc, .. } | ExprKind::Or { children: cc, .. } if cc.len() >= 2 => {
                        out.push('(');
                        write_expr(c, out);
                        out.push(')');
                    }
                    _ => write_expr(c, out),
                }
            }
        }
        ExprKind::Not(c) => {
            out.push('!');
            match c.kind() {
                ExprKind::BoolConst { .. } | ExprKind::Not(_) => write_expr(c, out),
                ExprKind::And { children, .. } | ExprKind::Or { children, .. } if children.len() < 2 => {
                    write_expr(c, out)
                }
                _ => {
                    out.push('(');
                    write_expr(c, out);
                    out.push(')');
                }
            }
        }
        ExprKind::Cmp { op, lhs, rhs, .. } => {
            write_expr(lhs, out);
            out.push_str(match op {
                CmpOp::Le => " <= ",
                CmpOp::Eq => " == ",
            });
            write_expr(rhs, out);
        }
        ExprKind::RealConst(x) => out.push_str(&number(*x)),
        ExprKind::IdxConst { i, .. } => out.push_str(&i.to_string()),
        ExprKind::VecConst { name: Some(name), .. } => out.push_str(name),
        ExprKind::VecConst { name: None, entries } => out.push_str(&number_list(entries)),
        ExprKind::FunSym { name, .. } => out.push_str(name),
        ExprKind::App { fun, args } => {
            write_expr(fun, out);
            out.push('(');
            for (k, a) in args.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_expr(a, out);
            }
            out.push(')');
        }
        ExprKind::Lookup { vec, idx } => {
            write_expr(vec, out);
            out.push('[');
            write_expr(idx, out);
            out.push(']');
        }
    }
}

fn write_explicit(is_and: bool, children: &[Expr], out: &mut String) {
    out.push_str(if is_and { "and(" } else { "or(" });
    for (k, c) in children.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write_expr(c, out);
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speclang::{parse, parse_expr, ParseOptions};

    #[test]
    fn round_trips() {
        let reg = FunRegistry::standard(&[1, 2]);
        for src in [
            "1 <= 3",
            "1 <= 2 /\\ (2 == 3 \\/ [1, 2][1] <= -0.5) /\\ true",
            "and(1 <= 2, and(2 <= 3, 3 <= 4))",
            "or() \\/ and(false)",
            "norm_inf2(vec_sub2([1, 2], relu2([0, -3])))[0] <= 1e-7",
        ] {
            let e = parse_expr(src, &reg, ParseOptions::default()).unwrap();
            let again = parse_expr(&to_text(&e), &reg, ParseOptions::default()).unwrap();
            assert_eq!(again, e, "{src} -> {}", to_text(&e));
        }
    }

    #[test]
    fn nested_same_connective_survives_flattening() {
        let reg = FunRegistry::new();
        let opts = ParseOptions { flatten: false, ..ParseOptions::default() };
        let nested = parse_expr("(1 <= 2 /\\ 2 <= 3) /\\ 3 <= 4", &reg, opts).unwrap();
        let text = to_text(&nested);
        assert_eq!(text, "and(1 <= 2, 2 <= 3) /\\ 3 <= 4");
        assert_eq!(parse_expr(&text, &reg, ParseOptions::default()).unwrap(), nested);
    }

    #[test]
    fn full_source_round_trips() {
        let reg = FunRegistry::standard(&[2]);
        let src = "flag: defined\nfun net: affine [[1, 0], [0, 2]] [0.5, 0]\nvec x = [1, 2]\n\
                   goal: !(net(x)[1] <= 3) /\\ identity2(x)[0] == 1";
        let spec = parse(src, &reg).unwrap();
        let printed = to_source(&spec.goal, &spec.registry);
        assert!(printed.starts_with("flag: defined\nfun identity2: identity 2\nfun net: affine"));
        let again = parse(&printed, &reg).unwrap();
        assert_eq!(again.goal, spec.goal);
    }
}
