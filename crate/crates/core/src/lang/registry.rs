//! Named vector functions that expressions may apply.
//!
//! Expressions refer to functions by name only, so they stay serializable and
//! the text front-end can mention them. Builtins are generic over [`Real`] and
//! therefore differentiable; custom host closures are evaluated on primal
//! values only.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::LangError;
use crate::num::Real;

/// Builtin function families. Dimensions are fixed at registration.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// `n -> n`.
    Identity,
    /// `2k -> k`: the first half minus the second half. Applied to two
    /// `k`-vectors this is ordinary vector subtraction.
    VecSub,
    /// `n -> 1`: the L∞ norm as a one-element vector.
    NormInf,
    /// `n -> n`, coordinate-wise `max(x, 0)`.
    Relu,
    /// `n -> m`, `W x + b` with `W` given row-major as `m` rows of length `n`.
    Affine { weights: Vec<Vec<f64>>, bias: Vec<f64> },
}

impl Builtin {
    /// Keyword used in spec files.
    pub fn keyword(&self) -> &'static str {
        match self {
            Builtin::Identity => "identity",
            Builtin::VecSub => "vec_sub",
            Builtin::NormInf => "norm_inf",
            Builtin::Relu => "relu",
            Builtin::Affine { .. } => "affine",
        }
    }

    fn apply<T: Real>(&self, x: &[T]) -> Result<Vec<T>, LangError> {
        Ok(match self {
            Builtin::Identity => x.to_vec(),
            Builtin::VecSub => {
                let k = x.len() / 2;
                (0..k).map(|i| x[i] - x[k + i]).collect()
            }
            Builtin::NormInf => {
                let mut acc = x[0].abs_checked().map_err(|_| LangError::NonDifferentiablePoint)?;
                for &xi in &x[1..] {
                    let a = xi.abs_checked().map_err(|_| LangError::NonDifferentiablePoint)?;
                    acc = acc.max_checked(a).map_err(|_| LangError::NonDifferentiablePoint)?;
                }
                vec![acc]
            }
            Builtin::Relu => x
                .iter()
                .map(|&xi| xi.max_checked(T::zero()).map_err(|_| LangError::NonDifferentiablePoint))
                .collect::<Result<_, _>>()?,
            Builtin::Affine { weights, bias } => weights
                .iter()
                .zip(bias)
                .map(|(row, &b)| {
                    row.iter()
                        .zip(x)
                        .fold(T::constant(b), |acc, (&w, &xi)| acc + T::constant(w) * xi)
                })
                .collect(),
        })
    }
}

type HostFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
enum FunImpl {
    Builtin(Builtin),
    Host(HostFn),
}

/// A registered function with its declared arity.
#[derive(Clone)]
pub struct FunEntry {
    pub n: usize,
    pub m: usize,
    imp: FunImpl,
}

impl FunEntry {
    pub fn differentiable(&self) -> bool {
        matches!(self.imp, FunImpl::Builtin(_))
    }

    pub fn builtin(&self) -> Option<&Builtin> {
        match &self.imp {
            FunImpl::Builtin(b) => Some(b),
            FunImpl::Host(_) => None,
        }
    }
}

impl fmt::Debug for FunEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imp = match &self.imp {
            FunImpl::Builtin(b) => format!("{b:?}"),
            FunImpl::Host(_) => "<host>".to_string(),
        };
        f.debug_struct("FunEntry")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("imp", &imp)
            .finish()
    }
}

#[derive(Debug, Clone, Default)]
pub struct FunRegistry {
    entries: BTreeMap<String, FunEntry>,
}

impl FunRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding `identity{n}`, `relu{n}`, `norm_inf{n}` and
    /// `vec_sub{n}` (`2n -> n`) for every `n` in `dims`.
    pub fn standard(dims: &[usize]) -> Self {
        let mut reg = Self::new();
        for &n in dims {
            for (name, builtin) in [
                ("identity", Builtin::Identity),
                ("relu", Builtin::Relu),
                ("norm_inf", Builtin::NormInf),
                ("vec_sub", Builtin::VecSub),
            ] {
                let input = if builtin == Builtin::VecSub { 2 * n } else { n };
                reg.register_builtin(format!("{name}{n}"), builtin, input)
                    .expect("standard registry names are unique");
            }
        }
        reg
    }

    /// Register a builtin with input dimension `n`; the output dimension
    /// follows from the family.
    pub fn register_builtin(
        &mut self,
        name: impl Into<String>,
        builtin: Builtin,
        n: usize,
    ) -> Result<(), LangError> {
        let name = name.into();
        if n == 0 {
            return Err(LangError::ZeroDimension);
        }
        let m = match &builtin {
            Builtin::Identity | Builtin::Relu => n,
            Builtin::NormInf => 1,
            Builtin::VecSub => {
                if !n.is_multiple_of(2) {
                    return Err(LangError::InvalidFunction {
                        name,
                        reason: format!("vec_sub needs an even input dimension, got {n}"),
                    });
                }
                n / 2
            }
            Builtin::Affine { weights, bias } => {
                if weights.is_empty() || weights.len() != bias.len() {
                    return Err(LangError::InvalidFunction {
                        name,
                        reason: "affine needs one bias entry per weight row".into(),
                    });
                }
                if weights.iter().any(|row| row.len() != n) {
                    return Err(LangError::InvalidFunction {
                        name,
                        reason: format!("affine weight rows must have length {n}"),
                    });
                }
                if weights.iter().flatten().chain(bias).any(|w| !w.is_finite()) {
                    return Err(LangError::InvalidFunction {
                        name,
                        reason: "affine coefficients must be finite".into(),
                    });
                }
                weights.len()
            }
        };
        self.insert(name, FunEntry { n, m, imp: FunImpl::Builtin(builtin) })
    }

    /// Register a host closure `n -> m`. Host functions are not
    /// differentiable; their output length is checked on every call.
    pub fn register_host<F>(&mut self, name: impl Into<String>, n: usize, m: usize, f: F) -> Result<(), LangError>
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if n == 0 || m == 0 {
            return Err(LangError::ZeroDimension);
        }
        self.insert(name.into(), FunEntry { n, m, imp: FunImpl::Host(Arc::new(f)) })
    }

    fn insert(&mut self, name: String, entry: FunEntry) -> Result<(), LangError> {
        if !is_identifier(&name) {
            return Err(LangError::InvalidFunction { name, reason: "not an identifier".into() });
        }
        if self.entries.contains_key(&name) {
            return Err(LangError::DuplicateFunction(name));
        }
        self.entries.insert(name, entry);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&FunEntry> {
        self.entries.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FunEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Apply the named function to `x`.
    pub fn apply<T: Real>(&self, name: &str, x: &[T]) -> Result<Vec<T>, LangError> {
        let entry = self.get(name).ok_or_else(|| LangError::UnknownFunction(name.to_string()))?;
        if x.len() != entry.n {
            return Err(LangError::ArityMismatch { name: name.to_string(), expected: entry.n, found: x.len() });
        }
        let out = match &entry.imp {
            FunImpl::Builtin(b) => b.apply(x)?,
            FunImpl::Host(f) => {
                if x.iter().any(|xi| xi.tangent() != 0.0) {
                    return Err(LangError::NonDifferentiableFunction(name.to_string()));
                }
                let primal: Vec<f64> = x.iter().map(|xi| xi.value()).collect();
                f(&primal).into_iter().map(T::constant).collect()
            }
        };
        if out.len() != entry.m {
            return Err(LangError::ArityMismatch { name: name.to_string(), expected: entry.m, found: out.len() });
        }
        Ok(out)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
