//! Projected gradient search over an L∞ box: find inputs that maximise (or
//! minimise) the value a logic assigns to a formula, e.g. a worst-case
//! perturbation for a robustness property.

use serde::Serialize;
use thiserror::Error;

use crate::diff::{grad_input, leaf_function, partial_fd, DiffError, DEFAULT_TOL};
use crate::lang::{Expr, FunRegistry, LangError};
use crate::semantics::{interpret_report, Backend, SemanticsError};

/// Gradient norm below which the search stops.
pub const GRAD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptError {
    #[error(transparent)]
    Diff(#[from] DiffError),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("objective is not finite at step {step}")]
    NonFinite { step: usize },

    #[error("no usable derivative for coordinate {coord} at step {step}")]
    NonDifferentiablePoint { step: usize, coord: usize },
}

impl From<SemanticsError> for OptError {
    fn from(e: SemanticsError) -> Self {
        OptError::Diff(e.into())
    }
}

impl From<LangError> for OptError {
    fn from(e: LangError) -> Self {
        OptError::Diff(e.into())
    }
}

/// The L∞ ball `{x : |x - center|∞ <= radius}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxConstraint {
    center: Vec<f64>,
    radius: f64,
}

impl BoxConstraint {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self, OptError> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(OptError::InvalidParameter(format!("radius must be finite and non-negative, got {radius}")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(OptError::InvalidParameter("box center must be finite".into()));
        }
        Ok(BoxConstraint { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Nearest point of the box, coordinate-wise.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.center)
            .map(|(&xi, &c)| xi.clamp(c - self.radius, c + self.radius))
            .collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(&self.center).all(|(&xi, &c)| (xi - c).abs() <= self.radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Maximize => 1.0,
            Direction::Minimize => -1.0,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = OptError;

    fn from_str(s: &str) -> Result<Self, OptError> {
        match s {
            "max" | "maximize" => Ok(Direction::Maximize),
            "min" | "minimize" => Ok(Direction::Minimize),
            other => Err(OptError::InvalidParameter(format!("direction must be min or max, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Iterate {
    pub x: Vec<f64>,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptTrace {
    /// The projected start point followed by one entry per step.
    pub iterates: Vec<Iterate>,
    /// The search stopped at a stationary point: the gradient vanished or
    /// the projected step left the iterate unchanged.
    pub converged: bool,
    pub steps: usize,
}

impl OptTrace {
    pub fn last(&self) -> &Iterate {
        self.iterates.last().expect("a trace always holds the start point")
    }
}

fn is_kink(e: &DiffError) -> bool {
    matches!(
        e,
        DiffError::Semantics(SemanticsError::NonDifferentiablePoint)
            | DiffError::Semantics(SemanticsError::Lang(LangError::NonDifferentiablePoint))
    )
}

/// Ascent direction for the objective `sign * f` at a point where forward
/// mode reported a tie. Each coordinate gets its finite-difference partial;
/// where the one-sided limits disagree, the side that improves the
/// objective more is taken (ties go right), and a coordinate at which
/// neither side improves gets zero.
fn kink_gradient(
    e: &Expr,
    b: Backend,
    reg: &FunRegistry,
    leaf: &str,
    x: &[f64],
    sign: f64,
    step: usize,
) -> Result<Vec<f64>, OptError> {
    let e = e.with_leaf(leaf, x)?;
    let f = leaf_function(&e, b, reg, leaf);
    (0..x.len())
        .map(|i| {
            let est = partial_fd(&f, x, i, DEFAULT_TOL).map_err(|err| match err {
                DiffError::NonFinite { .. } => OptError::NonFinite { step },
                _ => OptError::NonDifferentiablePoint { step, coord: i },
            })?;
            if est.converged {
                return Ok(est.value);
            }
            let right_gain = sign * est.right_limit;
            let left_gain = -sign * est.left_limit;
            Ok(if right_gain <= 0.0 && left_gain <= 0.0 {
                0.0
            } else if right_gain >= left_gain {
                est.right_limit
            } else {
                est.left_limit
            })
        })
        .collect()
}

/// Projected gradient search on the value of `e` as a function of the
/// vector leaf `leaf`, starting from the leaf's current value projected onto
/// `bounds`:
///
/// `x ← Π(x ± lr·∇)`
///
/// Forward-mode gradients are used wherever defined; at a branch tie the
/// step falls back to one-sided finite differences.
#[allow(clippy::too_many_arguments)]
pub fn ascend(
    e: &Expr,
    b: Backend,
    reg: &FunRegistry,
    leaf: &str,
    bounds: &BoxConstraint,
    lr: f64,
    steps: usize,
    direction: Direction,
) -> Result<OptTrace, OptError> {
    if !(lr > 0.0 && lr.is_finite()) {
        return Err(OptError::InvalidParameter(format!("learning rate must be positive and finite, got {lr}")));
    }
    let start = e.leaf_value(leaf).ok_or_else(|| DiffError::UnknownLeaf(leaf.to_string()))?;
    if start.len() != bounds.dim() {
        return Err(DiffError::LeafDimension { name: leaf.to_string(), expected: bounds.dim(), found: start.len() }.into());
    }
    let sign = direction.sign();
    let loss_at = |x: &[f64], step: usize| -> Result<f64, OptError> {
        let v = interpret_report(&e.with_leaf(leaf, x)?, b, reg)?.value;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(OptError::NonFinite { step })
        }
    };

    let mut x = bounds.project(&start);
    let mut iterates = vec![Iterate { loss: loss_at(&x, 0)?, x: x.clone() }];
    let mut converged = false;
    let mut taken = 0;
    while taken < steps {
        let at = e.with_leaf(leaf, &x)?;
        let grad = match grad_input(&at, b, reg, leaf, x.len()) {
            Ok(g) => g,
            Err(err) if is_kink(&err) => kink_gradient(e, b, reg, leaf, &x, sign, taken)?,
            Err(err) => return Err(err.into()),
        };
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(OptError::NonFinite { step: taken });
        }
        if grad.iter().all(|g| g.abs() < GRAD_TOL) {
            converged = true;
            break;
        }
        let moved: Vec<f64> = x.iter().zip(&grad).map(|(&xi, &g)| xi + sign * lr * g).collect();
        let next = bounds.project(&moved);
        taken += 1;
        let stationary = next == x;
        x = next;
        iterates.push(Iterate { loss: loss_at(&x, taken)?, x: x.clone() });
        if stationary {
            converged = true;
            break;
        }
    }
    Ok(OptTrace { iterates, converged, steps: taken })
}
