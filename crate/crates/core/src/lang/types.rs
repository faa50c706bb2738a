use std::fmt;

use serde::{Deserialize, Serialize};

/// Whether an expression of boolean type may contain negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegFlag {
    /// Negation allowed.
    Defined,
    /// Negation-free fragment.
    Undefined,
}

/// The type universe of expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LdlType {
    Bool(NegFlag),
    Index(usize),
    Real,
    Vector(usize),
    Fun(usize, usize),
}

impl LdlType {
    pub fn is_bool(&self) -> bool {
        matches!(self, LdlType::Bool(_))
    }

    pub fn flag(&self) -> Option<NegFlag> {
        match self {
            LdlType::Bool(flag) => Some(*flag),
            _ => None,
        }
    }

    /// Dimension of a vector type.
    pub fn vector_dim(&self) -> Option<usize> {
        match self {
            LdlType::Vector(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for NegFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegFlag::Defined => f.write_str("defined"),
            NegFlag::Undefined => f.write_str("undefined"),
        }
    }
}

impl fmt::Display for LdlType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LdlType::Bool(flag) => write!(f, "Bool[{flag}]"),
            LdlType::Index(n) => write!(f, "Index[{n}]"),
            LdlType::Real => f.write_str("Real"),
            LdlType::Vector(n) => write!(f, "Vector[{n}]"),
            LdlType::Fun(n, m) => write!(f, "Fun[{n} -> {m}]"),
        }
    }
}
