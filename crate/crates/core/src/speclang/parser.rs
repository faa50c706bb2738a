use std::collections::HashMap;

use super::lexer::{lex, Tok, Token};
use super::{ParseError, SpecError};
use crate::lang::{Builtin, CmpOp, Expr, ExprKind, FunRegistry, LangError, NegFlag};

const RESERVED: [&str; 9] = ["true", "false", "and", "or", "vec", "real", "fun", "flag", "goal"];

/// Parser settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    /// Merge nested chains of the same connective into one n-ary node,
    /// including chains split by parentheses.
    pub flatten: bool,
    /// Negation flag for inline expressions (spec files set it with
    /// `flag:`). Defaults to the negation-free fragment.
    pub flag: NegFlag,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { flatten: true, flag: NegFlag::Undefined }
    }
}

/// A parsed specification file.
#[derive(Debug, Clone)]
pub struct Spec {
    pub goal: Expr,
    /// The input registry extended with the file's `fun` declarations.
    pub registry: FunRegistry,
    pub flag: NegFlag,
}

/// Parse a specification file: declarations followed by a `goal:` line.
pub fn parse(src: &str, reg: &FunRegistry) -> Result<Spec, SpecError> {
    parse_with(src, reg, ParseOptions::default())
}

pub fn parse_with(src: &str, reg: &FunRegistry, opts: ParseOptions) -> Result<Spec, SpecError> {
    let mut p = Parser::new(src, reg, opts)?;
    p.declarations()?;
    let goal = p.expr()?;
    p.expect(Tok::Eof, &["`/\\`", "`\\/`", "end of input"])?;
    Ok(Spec { goal, registry: p.reg, flag: p.flag })
}

/// Parse a bare goal expression against `reg`, without declarations.
pub fn parse_expr(text: &str, reg: &FunRegistry, opts: ParseOptions) -> Result<Expr, SpecError> {
    let mut p = Parser::new(text, reg, opts)?;
    let e = p.expr()?;
    p.expect(Tok::Eof, &["`/\\`", "`\\/`", "end of input"])?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    reg: FunRegistry,
    vecs: HashMap<String, Vec<f64>>,
    reals: HashMap<String, f64>,
    flag: NegFlag,
    flatten: bool,
}

impl Parser {
    fn new(src: &str, reg: &FunRegistry, opts: ParseOptions) -> Result<Self, SpecError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            reg: reg.clone(),
            vecs: HashMap::new(),
            reals: HashMap::new(),
            flag: opts.flag,
            flatten: opts.flatten,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> SpecError {
        let t = self.peek();
        SpecError::Parse(ParseError::new(t.line, t.col, expected, t.tok.to_string()))
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<Token, SpecError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.error(expected))
        }
    }

    fn ident(&mut self) -> Result<(String, Token), SpecError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump()))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn number(&mut self) -> Result<f64, SpecError> {
        match self.peek().tok {
            Tok::Number(x) => {
                self.bump();
                Ok(x)
            }
            _ => Err(self.error(&["number"])),
        }
    }

    fn type_err(t: &Token, source: LangError) -> SpecError {
        SpecError::Type { line: t.line, col: t.col, source }
    }

    // ---- declarations ----

    fn declarations(&mut self) -> Result<(), SpecError> {
        loop {
            let keyword = match &self.peek().tok {
                Tok::Ident(s) if self.peek_at(1) == &Tok::Colon || matches!(s.as_str(), "vec" | "real" | "fun") => {
                    s.clone()
                }
                _ => return Err(self.error(&["`vec`", "`real`", "`fun`", "`flag`", "`goal`"])),
            };
            match keyword.as_str() {
                "goal" => {
                    self.bump();
                    self.bump();
                    return Ok(());
                }
                "flag" => {
                    self.bump();
                    self.bump();
                    self.flag = match self.ident()?.0.as_str() {
                        "defined" => NegFlag::Defined,
                        "undefined" => NegFlag::Undefined,
                        _ => {
                            self.pos -= 1;
                            return Err(self.error(&["`defined`", "`undefined`"]));
                        }
                    };
                }
                "vec" => {
                    self.bump();
                    let (name, at) = self.declared_name()?;
                    self.expect(Tok::Assign, &["`=`"])?;
                    let entries = self.number_list()?;
                    if entries.is_empty() {
                        return Err(Self::type_err(&at, LangError::ZeroDimension));
                    }
                    self.vecs.insert(name, entries);
                }
                "real" => {
                    self.bump();
                    let (name, _) = self.declared_name()?;
                    self.expect(Tok::Assign, &["`=`"])?;
                    let x = self.number()?;
                    self.reals.insert(name, x);
                }
                "fun" => {
                    self.bump();
                    self.fun_decl()?;
                }
                _ => return Err(self.error(&["`vec`", "`real`", "`fun`", "`flag`", "`goal`"])),
            }
        }
    }

    fn declared_name(&mut self) -> Result<(String, Token), SpecError> {
        let (name, at) = self.ident()?;
        if RESERVED.contains(&name.as_str()) {
            return Err(SpecError::Parse(ParseError::new(at.line, at.col, &["identifier"], at.tok.to_string())));
        }
        if self.vecs.contains_key(&name) || self.reals.contains_key(&name) {
            return Err(SpecError::Duplicate { name, line: at.line, col: at.col });
        }
        Ok((name, at))
    }

    fn fun_decl(&mut self) -> Result<(), SpecError> {
        let (name, at) = self.declared_name()?;
        self.expect(Tok::Colon, &["`:`"])?;
        let (family, fam_at) = self.ident()?;
        let (builtin, n) = match family.as_str() {
            "identity" | "relu" | "norm_inf" | "vec_sub" => {
                let n = self.index()?;
                let b = match family.as_str() {
                    "identity" => Builtin::Identity,
                    "relu" => Builtin::Relu,
                    "norm_inf" => Builtin::NormInf,
                    _ => Builtin::VecSub,
                };
                (b, n)
            }
            "affine" => {
                self.expect(Tok::LBracket, &["`[`"])?;
                let mut weights = Vec::new();
                loop {
                    weights.push(self.number_list()?);
                    if self.peek().tok == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(Tok::RBracket, &["`,`", "`]`"])?;
                let bias = self.number_list()?;
                let n = weights[0].len();
                (Builtin::Affine { weights, bias }, n)
            }
            _ => {
                return Err(SpecError::Parse(ParseError::new(
                    fam_at.line,
                    fam_at.col,
                    &["`identity`", "`relu`", "`norm_inf`", "`vec_sub`", "`affine`"],
                    fam_at.tok.to_string(),
                )))
            }
        };
        if let Some(existing) = self.reg.get(&name) {
            // Re-declaring an identical function is allowed so that printed
            // specs re-parse against the registry they came from.
            if existing.builtin() == Some(&builtin) && existing.n == n {
                return Ok(());
            }
            return Err(SpecError::Duplicate { name, line: at.line, col: at.col });
        }
        self.reg.register_builtin(name, builtin, n).map_err(|e| Self::type_err(&fam_at, e))
    }

    fn number_list(&mut self) -> Result<Vec<f64>, SpecError> {
        self.expect(Tok::LBracket, &["`[`"])?;
        let mut out = Vec::new();
        if self.peek().tok == Tok::RBracket {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            match self.peek().tok {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBracket => {
                    self.bump();
                    return Ok(out);
                }
                _ => return Err(self.error(&["`,`", "`]`"])),
            }
        }
    }

    fn index(&mut self) -> Result<usize, SpecError> {
        match self.peek().tok {
            Tok::Number(x) if x >= 0.0 && x.fract() == 0.0 && x < 1e15 => {
                self.bump();
                Ok(x as usize)
            }
            _ => Err(self.error(&["index"])),
        }
    }

    // ---- boolean expressions ----

    fn expr(&mut self) -> Result<Expr, SpecError> {
        Ok(self.disj()?.0)
    }

    // Each production also reports whether its node came from infix syntax
    // and may be merged into an enclosing chain; explicit `and(...)` /
    // `or(...)` nodes never are.

    fn disj(&mut self) -> Result<(Expr, bool), SpecError> {
        let start = self.peek().clone();
        let mut items = vec![self.conj()?];
        while self.peek().tok == Tok::Or {
            self.bump();
            items.push(self.conj()?);
        }
        if items.len() == 1 {
            return Ok(items.pop().unwrap());
        }
        let children = self.splice(items, false);
        Ok((Expr::or(self.flag, children).map_err(|e| Self::type_err(&start, e))?, true))
    }

    fn conj(&mut self) -> Result<(Expr, bool), SpecError> {
        let start = self.peek().clone();
        let mut items = vec![self.atom()?];
        while self.peek().tok == Tok::And {
            self.bump();
            items.push(self.atom()?);
        }
        if items.len() == 1 {
            return Ok(items.pop().unwrap());
        }
        let children = self.splice(items, true);
        Ok((Expr::and(self.flag, children).map_err(|e| Self::type_err(&start, e))?, true))
    }

    fn splice(&self, items: Vec<(Expr, bool)>, is_and: bool) -> Vec<Expr> {
        let mut out = Vec::new();
        for (e, spliceable) in items {
            match e.kind() {
                ExprKind::And { children, .. } if self.flatten && spliceable && is_and => {
                    out.extend(children.iter().cloned())
                }
                ExprKind::Or { children, .. } if self.flatten && spliceable && !is_and => {
                    out.extend(children.iter().cloned())
                }
                _ => out.push(e),
            }
        }
        out
    }

    fn atom(&mut self) -> Result<(Expr, bool), SpecError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(w) if w == "true" || w == "false" => {
                self.bump();
                Ok((Expr::boolean(self.flag, w == "true"), false))
            }
            Tok::Ident(w) if (w == "and" || w == "or") && self.peek_at(1) == &Tok::LParen => {
                let is_and = w == "and";
                self.bump();
                self.bump();
                let mut children = Vec::new();
                if self.peek().tok != Tok::RParen {
                    loop {
                        children.push(self.expr()?);
                        if self.peek().tok == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, &["`,`", "`)`"])?;
                let built = if is_and { Expr::and(self.flag, children) } else { Expr::or(self.flag, children) };
                Ok((built.map_err(|e| Self::type_err(&t, e))?, false))
            }
            Tok::Bang => {
                self.bump();
                let inner = self.atom()?.0;
                Ok((Expr::not(inner).map_err(|e| Self::type_err(&t, e))?, false))
            }
            Tok::LParen => {
                self.bump();
                let e = self.disj()?;
                self.expect(Tok::RParen, &["`/\\`", "`\\/`", "`)`"])?;
                Ok(e)
            }
            _ => {
                let lhs = self.rexpr()?;
                let op_tok = self.peek().clone();
                let op = match op_tok.tok {
                    Tok::Le => CmpOp::Le,
                    Tok::EqEq => CmpOp::Eq,
                    _ => return Err(self.error(&["`<=`", "`==`"])),
                };
                self.bump();
                let rhs = self.rexpr()?;
                Ok((Expr::cmp(self.flag, op, lhs, rhs).map_err(|e| Self::type_err(&op_tok, e))?, false))
            }
        }
    }

    // ---- real and vector expressions ----

    fn rexpr(&mut self) -> Result<Expr, SpecError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Number(x) => {
                self.bump();
                Expr::real(*x).map_err(|e| Self::type_err(&t, e))
            }
            Tok::LBracket => {
                let v = self.vexpr()?;
                self.lookup(v)
            }
            Tok::Ident(name) if !RESERVED.contains(&name.as_str()) => {
                if matches!(self.peek_at(1), Tok::LParen | Tok::LBracket) {
                    let v = self.vexpr()?;
                    return self.lookup(v);
                }
                if let Some(&x) = self.reals.get(name) {
                    self.bump();
                    return Expr::real(x).map_err(|e| Self::type_err(&t, e));
                }
                if self.vecs.contains_key(name) {
                    self.bump();
                    return Err(self.error(&["`[`"]));
                }
                Err(SpecError::Undeclared { name: name.clone(), line: t.line, col: t.col })
            }
            _ => Err(self.error(&["number", "identifier", "`[`", "`true`", "`false`", "`!`", "`(`"])),
        }
    }

    fn lookup(&mut self, v: Expr) -> Result<Expr, SpecError> {
        self.expect(Tok::LBracket, &["`[`"])?;
        let at = self.peek().clone();
        let i = self.index()?;
        self.expect(Tok::RBracket, &["`]`"])?;
        let dim = v.ty().vector_dim().unwrap_or(0);
        let idx = Expr::index(dim, i).map_err(|e| Self::type_err(&at, e))?;
        Expr::lookup(v, idx).map_err(|e| Self::type_err(&at, e))
    }

    fn vexpr(&mut self) -> Result<Expr, SpecError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::LBracket => {
                let entries = self.number_list()?;
                Expr::vector(entries).map_err(|e| Self::type_err(&t, e))
            }
            Tok::Ident(name) if self.peek_at(1) == &Tok::LParen => {
                let name = name.clone();
                self.bump();
                self.bump();
                let fun = Expr::fun(&self.reg, &name).map_err(|e| Self::type_err(&t, e))?;
                let mut args = Vec::new();
                if self.peek().tok != Tok::RParen {
                    loop {
                        args.push(self.vexpr()?);
                        if self.peek().tok == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, &["`,`", "`)`"])?;
                Expr::app(fun, args).map_err(|e| Self::type_err(&t, e))
            }
            Tok::Ident(name) => match self.vecs.get(name) {
                Some(entries) => {
                    let e = Expr::named_vector(name.clone(), entries.clone()).map_err(|e| Self::type_err(&t, e))?;
                    self.bump();
                    Ok(e)
                }
                None => Err(SpecError::Undeclared { name: name.clone(), line: t.line, col: t.col }),
            },
            _ => Err(self.error(&["vector", "identifier", "`[`"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::LdlType;

    fn reg() -> FunRegistry {
        FunRegistry::standard(&[1, 2])
    }

    fn inline(s: &str) -> Expr {
        parse_expr(s, &reg(), ParseOptions::default()).unwrap()
    }

    #[test]
    fn comparison() {
        let e = inline("1 <= 3");
        let expected = Expr::le(NegFlag::Undefined, Expr::real(1.0).unwrap(), Expr::real(3.0).unwrap()).unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn chains_flatten() {
        let e = inline("1 <= 2 /\\ 2 <= 3 /\\ 3 <= 4");
        match e.kind() {
            ExprKind::And { children, .. } => assert_eq!(children.len(), 3),
            other => panic!("expected And, got {other:?}"),
        }
        let nested = inline("(1 <= 2 /\\ 2 <= 3) /\\ 3 <= 4");
        assert_eq!(nested, e);
        let opts = ParseOptions { flatten: false, ..ParseOptions::default() };
        let kept = parse_expr("(1 <= 2 /\\ 2 <= 3) /\\ 3 <= 4", &reg(), opts).unwrap();
        assert_ne!(kept, e);
        assert_eq!(kept.children().len(), 2);
    }

    #[test]
    fn precedence_and_negation() {
        let src = "flag: defined\nvec x = [1, 2]\ngoal: !(x[0] == 1)";
        let spec = parse(src, &reg()).unwrap();
        let x = Expr::named_vector("x", vec![1.0, 2.0]).unwrap();
        let lookup = Expr::lookup(x, Expr::index(2, 0).unwrap()).unwrap();
        let expected = Expr::not(Expr::eq(NegFlag::Defined, lookup, Expr::real(1.0).unwrap()).unwrap()).unwrap();
        assert_eq!(spec.goal, expected);

        let e = inline("1 <= 2 \\/ 2 <= 3 /\\ 3 <= 4");
        assert!(matches!(e.kind(), ExprKind::Or { children, .. } if children.len() == 2));
    }

    #[test]
    fn declarations_and_applications() {
        let src = "fun net: relu 2\nvec v = [0, -1]\nreal d = 0.5\ngoal: norm_inf2(vec_sub2(net(v), [1, 1]))[0] <= d";
        let spec = parse(src, &reg()).unwrap();
        assert_eq!(spec.goal.ty(), LdlType::Bool(NegFlag::Undefined));
        assert!(spec.registry.get("net").is_some());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("1 <= ", &reg(), ParseOptions::default()) {
            Err(SpecError::Parse(e)) => assert_eq!((e.line, e.col), (1, 6)),
            other => panic!("{other:?}"),
        }
        match parse("goal:\n  !(1 <= 2)", &reg()) {
            Err(SpecError::Type { line, col, source }) => {
                assert_eq!((line, col), (2, 3));
                assert_eq!(source, LangError::NegationInUndefFragment);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("y[0] <= 1", &reg(), ParseOptions::default()), Err(SpecError::Undeclared { .. })));
        assert!(matches!(
            parse_expr("[1, 2][2] <= 1", &reg(), ParseOptions::default()),
            Err(SpecError::Type { source: LangError::IndexOutOfRange { .. }, .. })
        ));
        assert!(matches!(parse("vec x = [1]\nvec x = [2]\ngoal: true", &reg()), Err(SpecError::Duplicate { .. })));
        assert!(matches!(parse("1 <= 2", &reg()), Err(SpecError::Parse(_))));
    }

    #[test]
    fn explicit_nary_forms() {
        let e = inline("and()");
        assert!(matches!(e.kind(), ExprKind::And { children, .. } if children.is_empty()));
        let e = inline("or(1 <= 2)");
        assert!(matches!(e.kind(), ExprKind::Or { children, .. } if children.len() == 1));
    }
}
