//! Canonical JSON form of expressions.
//!
//! Every node is an object with a `kind`, its `type` annotation and, where
//! applicable, a payload and ordered `children`:
//!
//! | kind         | payload                                  | children          |
//! |--------------|------------------------------------------|-------------------|
//! | `real_const` | `value: number`                          |                   |
//! | `bool_const` | `value: bool`                            |                   |
//! | `idx_const`  | `index: integer`                         |                   |
//! | `vec_const`  | `entries: [number]`, optional `name`     |                   |
//! | `and`, `or`  |                                          | operands          |
//! | `not`        |                                          | `[operand]`       |
//! | `cmp`        | `op: "le" \| "eq"`                        | `[lhs, rhs]`      |
//! | `fun_sym`    | `name: string`                           |                   |
//! | `app`        |                                          | `[fun, args...]`  |
//! | `lookup`     |                                          | `[vector, index]` |
//!
//! Types are `{"kind": "bool", "flag": "defined" | "undefined"}`,
//! `{"kind": "index", "n": _}`, `{"kind": "real"}`, `{"kind": "vector", "n": _}`
//! and `{"kind": "fun", "n": _, "m": _}`. Numbers are IEEE-754 doubles
//! printed in shortest round-trip form.

use serde_json::{json, Map, Value};

use super::expr::{CmpOp, Expr, ExprKind};
use super::registry::FunRegistry;
use super::types::{LdlType, NegFlag};
use super::LangError;

pub fn type_to_json(ty: LdlType) -> Value {
    match ty {
        LdlType::Bool(flag) => json!({"kind": "bool", "flag": flag}),
        LdlType::Index(n) => json!({"kind": "index", "n": n}),
        LdlType::Real => json!({"kind": "real"}),
        LdlType::Vector(n) => json!({"kind": "vector", "n": n}),
        LdlType::Fun(n, m) => json!({"kind": "fun", "n": n, "m": m}),
    }
}

pub fn to_json(e: &Expr) -> Value {
    let mut obj = Map::new();
    let kind = match e.kind() {
        ExprKind::RealConst(r) => {
            obj.insert("value".into(), json!(r));
            "real_const"
        }
        ExprKind::BoolConst { value, .. } => {
            obj.insert("value".into(), json!(value));
            "bool_const"
        }
        ExprKind::IdxConst { i, .. } => {
            obj.insert("index".into(), json!(i));
            "idx_const"
        }
        ExprKind::VecConst { name, entries } => {
            obj.insert("entries".into(), json!(entries));
            if let Some(name) = name {
                obj.insert("name".into(), json!(name));
            }
            "vec_const"
        }
        ExprKind::And { .. } => "and",
        ExprKind::Or { .. } => "or",
        ExprKind::Not(_) => "not",
        ExprKind::Cmp { op, .. } => {
            obj.insert("op".into(), json!(if *op == CmpOp::Le { "le" } else { "eq" }));
            "cmp"
        }
        ExprKind::FunSym { name, .. } => {
            obj.insert("name".into(), json!(name));
            "fun_sym"
        }
        ExprKind::App { .. } => "app",
        ExprKind::Lookup { .. } => "lookup",
    };
    obj.insert("kind".into(), json!(kind));
    obj.insert("type".into(), type_to_json(e.ty()));
    let children = e.children();
    if !children.is_empty() || matches!(e.kind(), ExprKind::And { .. } | ExprKind::Or { .. }) {
        obj.insert("children".into(), Value::Array(children.into_iter().map(to_json).collect()));
    }
    Value::Object(obj)
}

fn bad(msg: impl Into<String>) -> LangError {
    LangError::Json(msg.into())
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value, LangError> {
    obj.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize, LangError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| bad(format!("`{what}` must be a non-negative integer")))
}

fn as_f64(v: &Value, what: &str) -> Result<f64, LangError> {
    v.as_f64().ok_or_else(|| bad(format!("`{what}` must be a number")))
}

pub fn type_from_json(v: &Value) -> Result<LdlType, LangError> {
    let obj = v.as_object().ok_or_else(|| bad("type must be an object"))?;
    let kind = field(obj, "kind")?.as_str().ok_or_else(|| bad("type kind must be a string"))?;
    Ok(match kind {
        "bool" => {
            let flag: NegFlag =
                serde_json::from_value(field(obj, "flag")?.clone()).map_err(|e| bad(format!("bad flag: {e}")))?;
            LdlType::Bool(flag)
        }
        "index" => LdlType::Index(as_usize(field(obj, "n")?, "n")?),
        "real" => LdlType::Real,
        "vector" => LdlType::Vector(as_usize(field(obj, "n")?, "n")?),
        "fun" => LdlType::Fun(as_usize(field(obj, "n")?, "n")?, as_usize(field(obj, "m")?, "m")?),
        other => return Err(bad(format!("unknown type kind `{other}`"))),
    })
}

/// Rebuild an expression from its JSON form, re-checking every typing rule
/// and the stored type annotations.
pub fn from_json(v: &Value, reg: &FunRegistry) -> Result<Expr, LangError> {
    let obj = v.as_object().ok_or_else(|| bad("node must be an object"))?;
    let ty = type_from_json(field(obj, "type")?)?;
    let kind = field(obj, "kind")?.as_str().ok_or_else(|| bad("node kind must be a string"))?;
    let children = match obj.get("children") {
        Some(Value::Array(items)) => items.iter().map(|c| from_json(c, reg)).collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(bad("`children` must be an array")),
        None => Vec::new(),
    };
    let arity = |n: usize| -> Result<(), LangError> {
        if children.len() == n {
            Ok(())
        } else {
            Err(bad(format!("`{kind}` needs {n} children, got {}", children.len())))
        }
    };
    let flag = || ty.flag().ok_or_else(|| bad(format!("`{kind}` must carry a bool type")));
    let node = match kind {
        "real_const" => ExprKind::RealConst(as_f64(field(obj, "value")?, "value")?),
        "bool_const" => ExprKind::BoolConst {
            flag: flag()?,
            value: field(obj, "value")?.as_bool().ok_or_else(|| bad("`value` must be a bool"))?,
        },
        "idx_const" => match ty {
            LdlType::Index(n) => ExprKind::IdxConst { n, i: as_usize(field(obj, "index")?, "index")? },
            _ => return Err(bad("`idx_const` must carry an index type")),
        },
        "vec_const" => {
            let entries = field(obj, "entries")?
                .as_array()
                .ok_or_else(|| bad("`entries` must be an array"))?
                .iter()
                .map(|x| as_f64(x, "entries"))
                .collect::<Result<Vec<_>, _>>()?;
            let name = match obj.get("name") {
                Some(n) => Some(n.as_str().ok_or_else(|| bad("`name` must be a string"))?.to_string()),
                None => None,
            };
            ExprKind::VecConst { name, entries }
        }
        "and" => ExprKind::And { flag: flag()?, children },
        "or" => ExprKind::Or { flag: flag()?, children },
        "not" => {
            arity(1)?;
            ExprKind::Not(children.into_iter().next().expect("checked arity"))
        }
        "cmp" => {
            arity(2)?;
            let op = match field(obj, "op")?.as_str() {
                Some("le") => CmpOp::Le,
                Some("eq") => CmpOp::Eq,
                _ => return Err(bad("`op` must be \"le\" or \"eq\"")),
            };
            let mut it = children.into_iter();
            ExprKind::Cmp { flag: flag()?, op, lhs: it.next().expect("checked"), rhs: it.next().expect("checked") }
        }
        "fun_sym" => match ty {
            LdlType::Fun(n, m) => ExprKind::FunSym {
                name: field(obj, "name")?.as_str().ok_or_else(|| bad("`name` must be a string"))?.to_string(),
                n,
                m,
            },
            _ => return Err(bad("`fun_sym` must carry a function type")),
        },
        "app" => {
            if children.is_empty() {
                return Err(bad("`app` needs a function child"));
            }
            let mut it = children.into_iter();
            let fun = it.next().expect("nonempty");
            ExprKind::App { fun, args: it.collect() }
        }
        "lookup" => {
            arity(2)?;
            let mut it = children.into_iter();
            ExprKind::Lookup { vec: it.next().expect("checked"), idx: it.next().expect("checked") }
        }
        other => return Err(bad(format!("unknown node kind `{other}`"))),
    };
    let e = Expr::build(node, reg)?;
    if e.ty() != ty {
        return Err(bad(format!("type annotation {ty} disagrees with computed type {}", e.ty())));
    }
    Ok(e)
}
