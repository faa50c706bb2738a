use std::sync::Arc;

use super::registry::{is_identifier, FunRegistry};
use super::types::{LdlType, NegFlag};
use super::LangError;

/// Comparison operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Le,
    Eq,
}

/// Node payload. Children are already-typed [`Expr`]s; [`Expr::build`]
/// checks that they fit together.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    RealConst(f64),
    BoolConst { flag: NegFlag, value: bool },
    IdxConst { n: usize, i: usize },
    /// A vector constant. Named vectors are the leaves that differentiation
    /// and optimization address.
    VecConst { name: Option<String>, entries: Vec<f64> },
    And { flag: NegFlag, children: Vec<Expr> },
    Or { flag: NegFlag, children: Vec<Expr> },
    Not(Expr),
    Cmp { flag: NegFlag, op: CmpOp, lhs: Expr, rhs: Expr },
    FunSym { name: String, n: usize, m: usize },
    /// Application to the concatenation of `args`.
    App { fun: Expr, args: Vec<Expr> },
    Lookup { vec: Expr, idx: Expr },
}

#[derive(Debug, PartialEq)]
struct Node {
    ty: LdlType,
    kind: ExprKind,
}

/// An immutable, well-typed expression. Cloning is cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl Expr {
    /// Type-check `kind` and wrap it. This is the only way to obtain an
    /// `Expr`, so every value of this type is well-typed.
    pub fn build(kind: ExprKind, reg: &FunRegistry) -> Result<Expr, LangError> {
        let ty = check(&kind, Some(reg))?;
        Ok(Expr(Arc::new(Node { ty, kind })))
    }

    /// Build without a registry: function symbols are trusted to carry the
    /// arity they were created with.
    fn build_unregistered(kind: ExprKind) -> Result<Expr, LangError> {
        let ty = check(&kind, None)?;
        Ok(Expr(Arc::new(Node { ty, kind })))
    }

    pub fn ty(&self) -> LdlType {
        self.0.ty
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0.kind
    }

    pub fn real(r: f64) -> Result<Expr, LangError> {
        Self::build_unregistered(ExprKind::RealConst(r))
    }

    pub fn boolean(flag: NegFlag, value: bool) -> Expr {
        Self::build_unregistered(ExprKind::BoolConst { flag, value }).expect("boolean constants are well-typed")
    }

    pub fn index(n: usize, i: usize) -> Result<Expr, LangError> {
        Self::build_unregistered(ExprKind::IdxConst { n, i })
    }

    pub fn vector(entries: Vec<f64>) -> Result<Expr, LangError> {
        Self::build_unregistered(ExprKind::VecConst { name: None, entries })
    }

    pub fn named_vector(name: impl Into<String>, entries: Vec<f64>) -> Result<Expr, LangError> {
        Self::build_unregistered(ExprKind::VecConst { name: Some(name.into()), entries })
    }

    pub fn and(flag: NegFlag, children: Vec<Expr>) -> Result<Expr, LangError> {
        Self::build_unregistered(ExprKind::And { flag, children })
    }

    pub fn or(flag: NegFlag, children: Vec<Expr>) -> Result<Expr, LangError> {
        Self::build_unregistered(ExprKind::Or { flag, children })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(child: Expr) -> Result<Expr, LangError> {
        Self::build_unregistered(ExprKind::Not(child))
    }

    pub fn cmp(flag: NegFlag, op: CmpOp, lhs: Expr, rhs: Expr) -> Result<Expr, LangError> {
        Self::build_unregistered(ExprKind::Cmp { flag, op, lhs, rhs })
    }

    pub fn le(flag: NegFlag, lhs: Expr, rhs: Expr) -> Result<Expr, LangError> {
        Self::cmp(flag, CmpOp::Le, lhs, rhs)
    }

    pub fn eq(flag: NegFlag, lhs: Expr, rhs: Expr) -> Result<Expr, LangError> {
        Self::cmp(flag, CmpOp::Eq, lhs, rhs)
    }

    /// Reference a registered function.
    pub fn fun(reg: &FunRegistry, name: &str) -> Result<Expr, LangError> {
        let entry = reg.get(name).ok_or_else(|| LangError::UnknownFunction(name.to_string()))?;
        Self::build(ExprKind::FunSym { name: name.to_string(), n: entry.n, m: entry.m }, reg)
    }

    pub fn app(fun: Expr, args: Vec<Expr>) -> Result<Expr, LangError> {
        Self::build_unregistered(ExprKind::App { fun, args })
    }

    pub fn lookup(vec: Expr, idx: Expr) -> Result<Expr, LangError> {
        Self::build_unregistered(ExprKind::Lookup { vec, idx })
    }

    /// Re-run the typing rules on this node. Always agrees with [`Expr::ty`].
    pub fn recheck(&self) -> Result<LdlType, LangError> {
        check(self.kind(), None)
    }

    /// Direct children, in order.
    pub fn children(&self) -> Vec<&Expr> {
        match self.kind() {
            ExprKind::RealConst(_)
            | ExprKind::BoolConst { .. }
            | ExprKind::IdxConst { .. }
            | ExprKind::VecConst { .. }
            | ExprKind::FunSym { .. } => Vec::new(),
            ExprKind::And { children, .. } | ExprKind::Or { children, .. } => children.iter().collect(),
            ExprKind::Not(c) => vec![c],
            ExprKind::Cmp { lhs, rhs, .. } => vec![lhs, rhs],
            ExprKind::App { fun, args } => std::iter::once(fun).chain(args).collect(),
            ExprKind::Lookup { vec, idx } => vec![vec, idx],
        }
    }

    /// Height of the tree; constants have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn contains_not(&self) -> bool {
        matches!(self.kind(), ExprKind::Not(_)) || self.children().iter().any(|c| c.contains_not())
    }

    pub fn contains_bool_const(&self) -> bool {
        matches!(self.kind(), ExprKind::BoolConst { .. }) || self.children().iter().any(|c| c.contains_bool_const())
    }

    /// Named vector leaves with their dimension, in first-occurrence order.
    pub fn leaves(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<(String, usize)>) {
        if let ExprKind::VecConst { name: Some(name), entries } = self.kind() {
            if !out.iter().any(|(n, _)| n == name) {
                out.push((name.clone(), entries.len()));
            }
        }
        for c in self.children() {
            c.collect_leaves(out);
        }
    }

    /// Current value of a named vector leaf.
    pub fn leaf_value(&self, leaf: &str) -> Option<Vec<f64>> {
        if let ExprKind::VecConst { name: Some(name), entries } = self.kind() {
            if name == leaf {
                return Some(entries.clone());
            }
        }
        self.children().into_iter().find_map(|c| c.leaf_value(leaf))
    }

    /// Copy of this expression with every occurrence of the named leaf
    /// replaced by `values`.
    pub fn with_leaf(&self, leaf: &str, values: &[f64]) -> Result<Expr, LangError> {
        self.rebuild(&mut |e| match e.kind() {
            ExprKind::VecConst { name: Some(name), entries } if name == leaf => {
                if entries.len() != values.len() {
                    return Some(Err(LangError::TypeMismatch {
                        context: "leaf replacement",
                        expected: format!("Vector[{}]", entries.len()),
                        found: LdlType::Vector(values.len()),
                    }));
                }
                Some(Expr::named_vector(leaf, values.to_vec()))
            }
            _ => None,
        })
    }

    /// Copy of this expression with every boolean node relabelled to
    /// `flag`. Relabelling to `Undefined` fails if a negation is present.
    pub fn with_flag(&self, flag: NegFlag) -> Result<Expr, LangError> {
        let relabel = |cs: &[Expr]| cs.iter().map(|c| c.with_flag(flag)).collect::<Result<Vec<_>, _>>();
        let kind = match self.kind() {
            ExprKind::BoolConst { value, .. } => ExprKind::BoolConst { flag, value: *value },
            ExprKind::Cmp { op, lhs, rhs, .. } => ExprKind::Cmp { flag, op: *op, lhs: lhs.clone(), rhs: rhs.clone() },
            ExprKind::And { children, .. } => ExprKind::And { flag, children: relabel(children)? },
            ExprKind::Or { children, .. } => ExprKind::Or { flag, children: relabel(children)? },
            ExprKind::Not(c) => ExprKind::Not(c.with_flag(flag)?),
            _ => return Ok(self.clone()),
        };
        Expr::build_unregistered(kind)
    }

    /// Bottom-up rebuild. `f` may replace a node (returning `Some`);
    /// otherwise the node is rebuilt from its rebuilt children.
    fn rebuild(
        &self,
        f: &mut dyn FnMut(&Expr) -> Option<Result<Expr, LangError>>,
    ) -> Result<Expr, LangError> {
        if let Some(replaced) = f(self) {
            return replaced;
        }
        let mut go = |c: &Expr| c.rebuild(f);
        let kind = match self.kind() {
            ExprKind::RealConst(_)
            | ExprKind::BoolConst { .. }
            | ExprKind::IdxConst { .. }
            | ExprKind::VecConst { .. }
            | ExprKind::FunSym { .. } => return Ok(self.clone()),
            ExprKind::And { flag, children } => ExprKind::And {
                flag: *flag,
                children: children.iter().map(&mut go).collect::<Result<_, _>>()?,
            },
            ExprKind::Or { flag, children } => ExprKind::Or {
                flag: *flag,
                children: children.iter().map(&mut go).collect::<Result<_, _>>()?,
            },
            ExprKind::Not(c) => ExprKind::Not(go(c)?),
            ExprKind::Cmp { flag, op, lhs, rhs } => ExprKind::Cmp { flag: *flag, op: *op, lhs: go(lhs)?, rhs: go(rhs)? },
            ExprKind::App { fun, args } => ExprKind::App {
                fun: go(fun)?,
                args: args.iter().map(&mut go).collect::<Result<_, _>>()?,
            },
            ExprKind::Lookup { vec, idx } => ExprKind::Lookup { vec: go(vec)?, idx: go(idx)? },
        };
        Expr::build_unregistered(kind)
    }
}

fn expect_bool(context: &'static str, flag: NegFlag, e: &Expr) -> Result<(), LangError> {
    match e.ty() {
        LdlType::Bool(f) if f == flag => Ok(()),
        LdlType::Bool(NegFlag::Defined) if flag == NegFlag::Undefined && e.contains_not() => {
            Err(LangError::NegationInUndefFragment)
        }
        found => Err(LangError::TypeMismatch { context, expected: LdlType::Bool(flag).to_string(), found }),
    }
}

fn check(kind: &ExprKind, reg: Option<&FunRegistry>) -> Result<LdlType, LangError> {
    match kind {
        ExprKind::RealConst(r) => {
            if !r.is_finite() {
                return Err(LangError::NonFiniteConstant(*r));
            }
            Ok(LdlType::Real)
        }
        ExprKind::BoolConst { flag, .. } => Ok(LdlType::Bool(*flag)),
        ExprKind::IdxConst { n, i } => {
            if *n == 0 {
                return Err(LangError::ZeroDimension);
            }
            if i >= n {
                return Err(LangError::IndexOutOfRange { index: *i, dim: *n });
            }
            Ok(LdlType::Index(*n))
        }
        ExprKind::VecConst { name, entries } => {
            if entries.is_empty() {
                return Err(LangError::ZeroDimension);
            }
            if let Some(r) = entries.iter().find(|r| !r.is_finite()) {
                return Err(LangError::NonFiniteConstant(*r));
            }
            if let Some(name) = name {
                if !is_identifier(name) {
                    return Err(LangError::InvalidLeafName(name.clone()));
                }
            }
            Ok(LdlType::Vector(entries.len()))
        }
        ExprKind::And { flag, children } | ExprKind::Or { flag, children } => {
            for c in children {
                expect_bool("connective operand", *flag, c)?;
            }
            Ok(LdlType::Bool(*flag))
        }
        ExprKind::Not(child) => match child.ty() {
            LdlType::Bool(NegFlag::Defined) => Ok(LdlType::Bool(NegFlag::Defined)),
            LdlType::Bool(NegFlag::Undefined) => Err(LangError::NegationInUndefFragment),
            found => Err(LangError::TypeMismatch {
                context: "negation operand",
                expected: LdlType::Bool(NegFlag::Defined).to_string(),
                found,
            }),
        },
        ExprKind::Cmp { flag, lhs, rhs, .. } => {
            for side in [lhs, rhs] {
                if side.ty() != LdlType::Real {
                    return Err(LangError::TypeMismatch {
                        context: "comparison operand",
                        expected: LdlType::Real.to_string(),
                        found: side.ty(),
                    });
                }
            }
            Ok(LdlType::Bool(*flag))
        }
        ExprKind::FunSym { name, n, m } => {
            if *n == 0 || *m == 0 {
                return Err(LangError::ZeroDimension);
            }
            if let Some(reg) = reg {
                let entry = reg.get(name).ok_or_else(|| LangError::UnknownFunction(name.clone()))?;
                if (entry.n, entry.m) != (*n, *m) {
                    return Err(LangError::TypeMismatch {
                        context: "function symbol",
                        expected: LdlType::Fun(entry.n, entry.m).to_string(),
                        found: LdlType::Fun(*n, *m),
                    });
                }
            }
            Ok(LdlType::Fun(*n, *m))
        }
        ExprKind::App { fun, args } => {
            let (n, m) = match fun.ty() {
                LdlType::Fun(n, m) => (n, m),
                found => {
                    return Err(LangError::TypeMismatch {
                        context: "applied function",
                        expected: "Fun[n -> m]".into(),
                        found,
                    })
                }
            };
            let mut total = 0;
            for a in args {
                match a.ty() {
                    LdlType::Vector(k) => total += k,
                    found => {
                        return Err(LangError::TypeMismatch {
                            context: "function argument",
                            expected: "Vector[k]".into(),
                            found,
                        })
                    }
                }
            }
            if total != n {
                return Err(LangError::TypeMismatch {
                    context: "function argument",
                    expected: LdlType::Vector(n).to_string(),
                    found: LdlType::Vector(total),
                });
            }
            Ok(LdlType::Vector(m))
        }
        ExprKind::Lookup { vec, idx } => {
            let n = vec.ty().vector_dim().ok_or_else(|| LangError::TypeMismatch {
                context: "lookup target",
                expected: "Vector[n]".into(),
                found: vec.ty(),
            })?;
            if idx.ty() != LdlType::Index(n) {
                return Err(LangError::TypeMismatch {
                    context: "lookup index",
                    expected: LdlType::Index(n).to_string(),
                    found: idx.ty(),
                });
            }
            Ok(LdlType::Real)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Expr {
        Expr::real(x).unwrap()
    }

    #[test]
    fn comparison_takes_either_flag() {
        for flag in [NegFlag::Defined, NegFlag::Undefined] {
            let e = Expr::le(flag, r(3.0), r(1.0)).unwrap();
            assert_eq!(e.ty(), LdlType::Bool(flag));
        }
    }

    #[test]
    fn negation_rejected_in_undefined_fragment() {
        let atom = Expr::le(NegFlag::Undefined, r(3.0), r(1.0)).unwrap();
        assert_eq!(Expr::not(atom), Err(LangError::NegationInUndefFragment));
        let neg = Expr::not(Expr::boolean(NegFlag::Defined, true)).unwrap();
        assert_eq!(Expr::and(NegFlag::Undefined, vec![neg]), Err(LangError::NegationInUndefFragment));
    }

    #[test]
    fn lookup_types_to_real() {
        let v = Expr::vector(vec![1.0, 2.0]).unwrap();
        let e = Expr::lookup(v, Expr::index(2, 1).unwrap()).unwrap();
        assert_eq!(e.ty(), LdlType::Real);
        assert_eq!(Expr::index(2, 2), Err(LangError::IndexOutOfRange { index: 2, dim: 2 }));
    }

    #[test]
    fn lookup_index_dimension_must_match() {
        let v = Expr::vector(vec![1.0, 2.0]).unwrap();
        assert!(matches!(Expr::lookup(v, Expr::index(3, 0).unwrap()), Err(LangError::TypeMismatch { .. })));
    }

    #[test]
    fn application_types() {
        let mut reg = FunRegistry::new();
        reg.register_host("f", 3, 2, |x| vec![x[0], x[1]]).unwrap();
        let f = Expr::fun(&reg, "f").unwrap();
        assert_eq!(f.ty(), LdlType::Fun(3, 2));
        let app = Expr::app(f.clone(), vec![Expr::vector(vec![1.0, 2.0, 3.0]).unwrap()]).unwrap();
        assert_eq!(app.ty(), LdlType::Vector(2));
        let split = Expr::app(f.clone(), vec![Expr::vector(vec![1.0]).unwrap(), Expr::vector(vec![2.0, 3.0]).unwrap()]);
        assert_eq!(split.unwrap().ty(), LdlType::Vector(2));
        assert!(Expr::app(f, vec![Expr::vector(vec![1.0]).unwrap()]).is_err());
        assert_eq!(Expr::fun(&reg, "g"), Err(LangError::UnknownFunction("g".into())));
    }

    #[test]
    fn connective_types() {
        let a = Expr::eq(NegFlag::Defined, r(1.0), r(1.0)).unwrap();
        let and = Expr::and(NegFlag::Defined, vec![a.clone(), a.clone()]).unwrap();
        assert_eq!(and.ty(), LdlType::Bool(NegFlag::Defined));
        assert!(Expr::and(NegFlag::Undefined, vec![a]).is_err());
        assert!(Expr::or(NegFlag::Defined, vec![r(1.0)]).is_err());
    }

    #[test]
    fn zero_dimension_and_non_finite_rejected() {
        assert_eq!(Expr::vector(vec![]), Err(LangError::ZeroDimension));
        assert!(matches!(Expr::real(f64::NAN), Err(LangError::NonFiniteConstant(_))));
        assert_eq!(Expr::index(0, 0), Err(LangError::ZeroDimension));
    }

    #[test]
    fn leaf_replacement_and_relabelling() {
        let x = Expr::named_vector("x", vec![1.0, 2.0]).unwrap();
        let e = Expr::le(NegFlag::Undefined, Expr::lookup(x, Expr::index(2, 0).unwrap()).unwrap(), r(3.0)).unwrap();
        assert_eq!(e.leaves(), vec![("x".to_string(), 2)]);
        let moved = e.with_leaf("x", &[5.0, 6.0]).unwrap();
        assert_eq!(moved.leaf_value("x"), Some(vec![5.0, 6.0]));
        assert!(e.with_leaf("x", &[1.0]).is_err());
        let defined = e.with_flag(NegFlag::Defined).unwrap();
        assert_eq!(defined.ty(), LdlType::Bool(NegFlag::Defined));
        let neg = Expr::not(defined).unwrap();
        assert_eq!(neg.with_flag(NegFlag::Undefined), Err(LangError::NegationInUndefFragment));
    }
}
