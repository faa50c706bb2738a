use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::ereal::ExtScalar;
use super::SemanticsError;

/// How DL2 and STL interpret the truth constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TruthMode {
    /// Top and bottom of the domain, adjoining infinities where needed
    /// (DL2: `0` / `-inf`, STL: `+inf` / `-inf`).
    ExtendedReal,
    /// Finite stand-ins (DL2: `0` / `-1`, STL: `1` / `-1`).
    #[default]
    FiniteAlt,
}

impl fmt::Display for TruthMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthMode::ExtendedReal => "ereal",
            TruthMode::FiniteAlt => "finite",
        })
    }
}

impl FromStr for TruthMode {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ereal" => Ok(TruthMode::ExtendedReal),
            "finite" => Ok(TruthMode::FiniteAlt),
            other => Err(SemanticsError::InvalidParameter(format!("unknown truth mode `{other}`"))),
        }
    }
}

/// A differentiable logic together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Backend {
    Godel,
    Lukasiewicz,
    Yager { p: f64 },
    Product,
    Dl2 { mode: TruthMode },
    Stl { nu: f64, mode: TruthMode },
}

impl Backend {
    pub fn yager(p: f64) -> Result<Self, SemanticsError> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(SemanticsError::InvalidParameter(format!("Yager exponent must be positive, got {p}")));
        }
        Ok(Backend::Yager { p })
    }

    pub fn stl(nu: f64, mode: TruthMode) -> Result<Self, SemanticsError> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(SemanticsError::InvalidParameter(format!("STL softness must be positive, got {nu}")));
        }
        Ok(Backend::Stl { nu, mode })
    }

    pub fn dl2(mode: TruthMode) -> Self {
        Backend::Dl2 { mode }
    }

    /// The six logics with the parameters used for the property matrix:
    /// Yager `p = 2`, STL `nu = 1`, finite truth constants.
    pub fn standard_six() -> [Backend; 6] {
        [
            Backend::Godel,
            Backend::Lukasiewicz,
            Backend::Yager { p: 2.0 },
            Backend::Product,
            Backend::Dl2 { mode: TruthMode::FiniteAlt },
            Backend::Stl { nu: 1.0, mode: TruthMode::FiniteAlt },
        ]
    }

    /// Short family name, without parameters.
    pub fn family(&self) -> &'static str {
        match self {
            Backend::Godel => "godel",
            Backend::Lukasiewicz => "lukasiewicz",
            Backend::Yager { .. } => "yager",
            Backend::Product => "product",
            Backend::Dl2 { .. } => "dl2",
            Backend::Stl { .. } => "stl",
        }
    }

    pub fn is_fuzzy(&self) -> bool {
        matches!(self, Backend::Godel | Backend::Lukasiewicz | Backend::Yager { .. } | Backend::Product)
    }

    pub fn mode(&self) -> Option<TruthMode> {
        match self {
            Backend::Dl2 { mode } | Backend::Stl { mode, .. } => Some(*mode),
            _ => None,
        }
    }

    /// Same logic with a different truth mode; fuzzy logics are unchanged.
    pub fn with_mode(self, mode: TruthMode) -> Self {
        match self {
            Backend::Dl2 { .. } => Backend::Dl2 { mode },
            Backend::Stl { nu, .. } => Backend::Stl { nu, mode },
            other => other,
        }
    }

    /// Whether negation is a structural connective of this logic.
    pub fn has_negation(&self) -> bool {
        !matches!(self, Backend::Dl2 { .. })
    }

    /// Interpretation of a truth constant on the extended line.
    pub fn truth(&self, b: bool) -> ExtScalar {
        match (self, self.mode()) {
            (Backend::Dl2 { .. }, Some(TruthMode::ExtendedReal)) => {
                if b {
                    ExtScalar::Finite(0.0)
                } else {
                    ExtScalar::NegInf
                }
            }
            (Backend::Stl { .. }, Some(TruthMode::ExtendedReal)) => {
                if b {
                    ExtScalar::PosInf
                } else {
                    ExtScalar::NegInf
                }
            }
            _ => ExtScalar::Finite(self.finite_truth(b)),
        }
    }

    /// Finite interpretation of a truth constant (fuzzy `1`/`0`, DL2 `0`/`-1`,
    /// STL `1`/`-1`), independent of the truth mode.
    pub fn finite_truth(&self, b: bool) -> f64 {
        match (self, b) {
            (Backend::Dl2 { .. }, true) => 0.0,
            (Backend::Dl2 { .. } | Backend::Stl { .. }, false) => -1.0,
            (_, true) => 1.0,
            (_, false) => 0.0,
        }
    }

    /// Whether `x` lies in the interpretation domain: `[0,1]` for fuzzy
    /// logics, `(-inf, 0]` for DL2, the real line for STL.
    pub fn domain_contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        match self {
            Backend::Dl2 { .. } => x <= 0.0,
            Backend::Stl { .. } => true,
            _ => (0.0..=1.0).contains(&x),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Yager { p } => write!(f, "yager:p={p}"),
            Backend::Stl { nu, .. } => write!(f, "stl:nu={nu}"),
            other => f.write_str(other.family()),
        }
    }
}

impl Serialize for Backend {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.mode() {
            Some(mode) => s.serialize_str(&format!("{self}/{mode}")),
            None => s.collect_str(self),
        }
    }
}

/// Parses `godel`, `lukasiewicz`, `yager:p=2`, `product`, `dl2`, `stl:nu=1`.
/// Yager defaults to `p = 2` and STL to `nu = 1`; the truth mode is
/// `finite` unless set with [`Backend::with_mode`].
impl FromStr for Backend {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, param) = match s.split_once(':') {
            Some((f, p)) => (f, Some(p)),
            None => (s, None),
        };
        let value = |key: &str, default: f64| -> Result<f64, SemanticsError> {
            match param {
                None => Ok(default),
                Some(p) => {
                    let (k, v) = p.split_once('=').ok_or_else(|| {
                        SemanticsError::InvalidParameter(format!("expected `{key}=<value>`, got `{p}`"))
                    })?;
                    if k != key {
                        return Err(SemanticsError::InvalidParameter(format!("unknown parameter `{k}` for {family}")));
                    }
                    v.parse()
                        .map_err(|_| SemanticsError::InvalidParameter(format!("`{v}` is not a number")))
                }
            }
        };
        let no_param = |b: Backend| -> Result<Backend, SemanticsError> {
            match param {
                None => Ok(b),
                Some(p) => Err(SemanticsError::InvalidParameter(format!("{family} takes no parameter, got `{p}`"))),
            }
        };
        match family {
            "godel" => no_param(Backend::Godel),
            "lukasiewicz" => no_param(Backend::Lukasiewicz),
            "yager" => Backend::yager(value("p", 2.0)?),
            "product" => no_param(Backend::Product),
            "dl2" => no_param(Backend::dl2(TruthMode::FiniteAlt)),
            "stl" => Backend::stl(value("nu", 1.0)?, TruthMode::FiniteAlt),
            other => Err(SemanticsError::InvalidParameter(format!("unknown logic `{other}`"))),
        }
    }
}
