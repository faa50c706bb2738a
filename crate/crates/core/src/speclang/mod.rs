//! Text front end.
//!
//! A spec file is a list of declarations followed by a goal:
//!
//! ```text
//! # comments run to the end of the line
//! flag: defined                      # optional; default is the negation-free fragment
//! fun net: relu 2                    # identity | relu | norm_inf | vec_sub <input dim>
//! fun lin: affine [[1, 2]] [0.5]     # affine <weight rows> <bias>
//! vec x = [0.5, -1]
//! real delta = 0.1
//! goal: norm_inf1(lin(x))[0] <= delta /\ !(x[1] == 0)
//! ```
//!
//! Goal grammar:
//!
//! ```text
//! expr  := conj ('\/' conj)*
//! conj  := atom ('/\' atom)*
//! atom  := 'true' | 'false' | '!' atom | '(' expr ')'
//!        | ('and' | 'or') '(' [expr (',' expr)*] ')'
//!        | rexpr ('<=' | '==') rexpr
//! rexpr := number | ident | vexpr '[' index ']'
//! vexpr := ident | '[' numbers ']' | ident '(' [vexpr (',' vexpr)*] ')'
//! ```
//!
//! Function arguments are concatenated, so `vec_sub2(a, b)` takes two
//! 2-vectors. Chains of one connective become a single n-ary node.

mod lexer;
mod parser;
mod printer;
mod robustness;

use std::fmt;

use thiserror::Error;

pub use parser::{parse, parse_expr, parse_with, ParseOptions, Spec};
pub use printer::{to_source, to_text};
pub use robustness::robustness_spec;

use crate::lang::LangError;

/// Syntax error at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, expected: &[&str], found: String) -> Self {
        ParseError { line, col, expected: expected.iter().map(|s| s.to_string()).collect(), found }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected ", self.line, self.col)?;
        match self.expected.as_slice() {
            [] => f.write_str("something else")?,
            [one] => f.write_str(one)?,
            [init @ .., last] => write!(f, "{} or {last}", init.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("{0}")]
    Parse(#[from] ParseError),

    #[error("{line}:{col}: {source}")]
    Type { line: usize, col: usize, source: LangError },

    #[error("{line}:{col}: undeclared identifier `{name}`")]
    Undeclared { name: String, line: usize, col: usize },

    #[error("{line}:{col}: `{name}` is already declared")]
    Duplicate { name: String, line: usize, col: usize },

    #[error("{0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Lang(#[from] LangError),
}

impl SpecError {
    /// Source position, when the error has one.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            SpecError::Parse(e) => Some((e.line, e.col)),
            SpecError::Type { line, col, .. }
            | SpecError::Undeclared { line, col, .. }
            | SpecError::Duplicate { line, col, .. } => Some((*line, *col)),
            _ => None,
        }
    }
}
