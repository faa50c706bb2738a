use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use super::MetaError;
use crate::diff::{conjunction, partial_fd, DEFAULT_TOL};
use crate::lang::{bool_semantics, json, Expr, FunRegistry, NegFlag};
use crate::semantics::{and_f64, interpret, not_value, or_f64, stl, Backend};
use crate::speclang::to_text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Negation,
    Idempotence,
    Commutativity,
    Associativity,
    Soundness,
    ShadowLifting,
    InversionAnd,
    Range,
}

impl Property {
    /// The six columns of the property matrix, in order.
    pub const TABLE2: [Property; 6] = [
        Property::Negation,
        Property::Idempotence,
        Property::Commutativity,
        Property::Associativity,
        Property::Soundness,
        Property::ShadowLifting,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Property::Negation => "Negation",
            Property::Idempotence => "Idempotence",
            Property::Commutativity => "Commutat.",
            Property::Associativity => "Associativ.",
            Property::Soundness => "Soundness",
            Property::ShadowLifting => "Shadow-lifting",
            Property::InversionAnd => "And-inversion",
            Property::Range => "Range",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Yes,
    No,
    /// The property does not apply: the logic has no such operation.
    Undefined,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Yes => "yes",
            Status::No => "no",
            Status::Undefined => "undefined",
        })
    }
}

fn expr_json<S: Serializer>(e: &Expr, s: S) -> Result<S::Ok, S::Error> {
    json::to_json(e).serialize(s)
}

fn exprs_json<S: Serializer>(es: &[Expr], s: S) -> Result<S::Ok, S::Error> {
    es.iter().map(json::to_json).collect::<Vec<_>>().serialize(s)
}

/// A concrete input on which a property fails, with the values observed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A ground expression whose interpretation contradicts its boolean
    /// value (soundness) or leaves the logic's domain (range).
    Expr {
        text: String,
        #[serde(serialize_with = "expr_json")]
        expr: Expr,
        interpreted: f64,
        boolean: bool,
    },
    /// A conjunction classified true whose conjunct `failing` is not.
    Conjuncts {
        text: Vec<String>,
        #[serde(serialize_with = "exprs_json")]
        exprs: Vec<Expr>,
        conjunction: f64,
        failing: usize,
        conjunct: f64,
    },
    Permutation {
        connective: Connective,
        values: Vec<f64>,
        perm: Vec<usize>,
        original: f64,
        permuted: f64,
    },
    Nesting {
        values: [f64; 3],
        left_nested: f64,
        right_nested: f64,
    },
    Repetition {
        value: f64,
        copies: usize,
        result: f64,
    },
    Negation {
        value: f64,
        twice: f64,
    },
    Partial {
        arity: usize,
        p: f64,
        coord: usize,
        left_limit: f64,
        right_limit: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        branch: Option<Branch>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Connective {
    And,
    Or,
}

/// The two nontrivial pieces of the STL conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Gt0,
    Lt0,
}

impl Branch {
    pub fn eval(self, a: &[f64], nu: f64) -> f64 {
        let r = match self {
            Branch::Gt0 => stl::stl_and_gt0(a, nu),
            Branch::Lt0 => stl::stl_and_lt0(a, nu),
        };
        r.unwrap_or(f64::NAN)
    }
}

impl Witness {
    /// One-line human description.
    pub fn describe(&self) -> String {
        match self {
            Witness::Expr { text, interpreted, boolean, .. } => {
                format!("{text} interprets to {interpreted} but is {boolean}")
            }
            Witness::Conjuncts { text, conjunction, failing, conjunct, .. } => format!(
                "and({}) = {conjunction} but conjunct {failing} = {conjunct}",
                text.join(", ")
            ),
            Witness::Permutation { connective, values, perm, original, permuted } => {
                format!("{connective:?} of {values:?} = {original}, permuted by {perm:?} = {permuted}")
            }
            Witness::Nesting { values, left_nested, right_nested } => format!(
                "and(and({a}, {b}), {c}) = {left_nested} but and({a}, and({b}, {c})) = {right_nested}",
                a = values[0],
                b = values[1],
                c = values[2]
            ),
            Witness::Repetition { value, copies, result } => {
                format!("and of {copies} copies of {value} = {result}")
            }
            Witness::Negation { value, twice } => format!("not(not({value})) = {twice}"),
            Witness::Partial { arity, p, coord, left_limit, right_limit, branch } => {
                let what = match branch {
                    Some(b) => format!("{b:?} branch"),
                    None => "conjunction".into(),
                };
                format!(
                    "{arity}-ary {what} at const {p}: partial {coord} has left limit {left_limit}, right limit {right_limit}"
                )
            }
        }
    }
}

/// Outcome of checking one property for one backend.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub property: Property,
    pub backend: Backend,
    pub status: Status,
    /// Present whenever `status` is `No`.
    pub witness: Option<Witness>,
    pub trials: u64,
    pub violations: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub(crate) fn new(property: Property, backend: Backend, seed: u64) -> Self {
        Verdict { property, backend, status: Status::Yes, witness: None, trials: 0, violations: 0, seed, note: None }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Yes
    }

    /// Record a trial; the first violation supplies the witness.
    pub(crate) fn record(&mut self, violation: Option<Witness>) {
        self.trials += 1;
        if let Some(w) = violation {
            self.violations += 1;
            self.status = Status::No;
            if self.witness.is_none() {
                self.witness = Some(w);
            }
        }
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Re-evaluate the witness from scratch. `Ok(true)` means the violation
    /// reproduces; verdicts without a witness replay as `Ok(false)`.
    pub fn replay(&self, reg: &FunRegistry) -> Result<bool, MetaError> {
        let b = self.backend;
        let Some(w) = &self.witness else { return Ok(false) };
        Ok(match w {
            Witness::Expr { expr, .. } => match self.property {
                Property::Range => {
                    let r = crate::semantics::interpret_report(expr, b, reg)?;
                    !r.domain_ok
                }
                _ => {
                    let value = interpret(expr, b, reg)?;
                    let truth = bool_semantics(expr, reg).map_err(crate::semantics::SemanticsError::from)?;
                    match super::TruthPredicate::for_backend(b).classify(value) {
                        Some(c) => c != truth,
                        None => false,
                    }
                }
            },
            Witness::Conjuncts { exprs, failing, .. } => {
                let and = Expr::and(NegFlag::Undefined, exprs.clone()).map_err(crate::semantics::SemanticsError::from)?;
                interpret(&and, b, reg)? >= 0.0 && interpret(&exprs[*failing], b, reg)? < 0.0
            }
            Witness::Permutation { connective, values, perm, .. } => {
                let permuted: Vec<f64> = perm.iter().map(|&i| values[i]).collect();
                let f = |a: &[f64]| match connective {
                    Connective::And => and_f64(b, a),
                    Connective::Or => or_f64(b, a),
                };
                let (x, y) = (f(values)?, f(&permuted)?);
                !super::algebra::commutes(b, x, y)
            }
            Witness::Nesting { values: [v0, v1, v2], .. } => {
                let left = and_f64(b, &[and_f64(b, &[*v0, *v1])?, *v2])?;
                let right = and_f64(b, &[*v0, and_f64(b, &[*v1, *v2])?])?;
                (left - right).abs() > super::algebra::associativity_tol(b)
            }
            Witness::Repetition { value, copies, .. } => {
                (and_f64(b, &vec![*value; *copies])? - value).abs() > super::algebra::IDEMPOTENCE_TOL
            }
            Witness::Negation { value, .. } => {
                let twice = not_value(b, not_value(b, *value)?)?;
                (twice - value).abs() > super::algebra::NEGATION_TOL
            }
            Witness::Partial { arity, p, coord, branch, .. } => {
                let a = vec![*p; *arity];
                match (branch, b) {
                    (Some(br), Backend::Stl { nu, .. }) => {
                        let br = *br;
                        let est = partial_fd(|x: &[f64]| br.eval(x, nu), &a, *coord, DEFAULT_TOL)?;
                        !super::shadow::branch_ok(&est, *arity)
                    }
                    _ => {
                        let est = partial_fd(conjunction(b), &a, *coord, DEFAULT_TOL)?;
                        !super::shadow::lifts(&est)
                    }
                }
            }
        })
    }
}

/// Build an expression witness, recording its interpretation and boolean value.
pub(crate) fn expr_witness(e: &Expr, interpreted: f64, boolean: bool) -> Witness {
    Witness::Expr { text: to_text(e), expr: e.clone(), interpreted, boolean }
}
