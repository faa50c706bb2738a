use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::MetaError;
use crate::lang::{Builtin, CmpOp, Expr, ExprKind, FunRegistry, NegFlag};
use crate::semantics::Backend;

/// RNG for one fuzzing trial. Trials draw from independent streams of the
/// same seed, so trial `t` sees the same input whatever the budget.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Shape of randomly generated ground boolean expressions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExprGenConfig {
    /// Maximum nesting of connectives above the comparisons.
    pub max_depth: usize,
    pub max_arity: usize,
    /// Every real number in a generated expression comes from this pool,
    /// directly or through a registry function that maps the pool into
    /// itself.
    pub constant_pool: Vec<f64>,
    pub allow_negation: bool,
    pub flag: NegFlag,
    pub bool_constants: bool,
    pub seed: u64,
}

impl ExprGenConfig {
    /// Inputs for soundness fuzzing. Fuzzy comparisons only agree with
    /// boolean comparison on nonnegative operands, so fuzzy backends draw
    /// from a nonnegative pool; DL2 and STL get the negation-free fragment.
    pub fn for_soundness(b: Backend, seed: u64) -> Self {
        if b.is_fuzzy() {
            ExprGenConfig {
                max_depth: 3,
                max_arity: 3,
                constant_pool: vec![0.0, 1.0, 2.0, 4.0],
                allow_negation: true,
                flag: NegFlag::Defined,
                bool_constants: true,
                seed,
            }
        } else {
            let constant_pool = match b {
                Backend::Dl2 { .. } => vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0],
                _ => vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0],
            };
            ExprGenConfig {
                max_depth: 3,
                max_arity: 3,
                constant_pool,
                allow_negation: false,
                flag: NegFlag::Undefined,
                bool_constants: true,
                seed,
            }
        }
    }

    /// Inputs for the range invariant: signed and fractional constants,
    /// negation wherever the backend defines it.
    pub fn for_range(b: Backend, seed: u64) -> Self {
        let negation = b.has_negation();
        ExprGenConfig {
            max_depth: 4,
            max_arity: 4,
            constant_pool: vec![-3.0, -1.5, -1.0, -0.25, 0.0, 0.5, 1.0, 2.5, 4.0],
            allow_negation: negation,
            flag: if negation { NegFlag::Defined } else { NegFlag::Undefined },
            bool_constants: true,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), MetaError> {
        if self.constant_pool.is_empty() || self.constant_pool.iter().any(|x| !x.is_finite()) {
            return Err(MetaError::InvalidParameter("constant pool must be nonempty and finite".into()));
        }
        if self.max_arity == 0 {
            return Err(MetaError::InvalidParameter("max_arity must be at least 1".into()));
        }
        if self.allow_negation && self.flag == NegFlag::Undefined {
            return Err(MetaError::InvalidParameter("negation needs the defined fragment".into()));
        }
        Ok(())
    }
}

/// A random ground expression determined by `cfg` (including its seed).
pub fn gen_ground_expr(cfg: &ExprGenConfig, reg: &FunRegistry) -> Result<Expr, MetaError> {
    gen_with_rng(cfg, reg, &mut trial_rng(cfg.seed, 0))
}

/// A random ground expression drawn from `rng`; `cfg.seed` is ignored.
pub fn gen_with_rng<R: Rng>(cfg: &ExprGenConfig, reg: &FunRegistry, rng: &mut R) -> Result<Expr, MetaError> {
    cfg.validate()?;
    let g = Gen { cfg, funs: pool_preserving(reg, &cfg.constant_pool), reg, leaf: None };
    g.boolean(cfg.max_depth, rng)
}

/// A random expression over the named vector leaf `leaf`: about a third of
/// the real operands read the leaf, directly or through a registry
/// function, so the result is a non-trivial function of its values.
pub fn gen_with_leaf<R: Rng>(
    cfg: &ExprGenConfig,
    reg: &FunRegistry,
    leaf: (&str, &[f64]),
    rng: &mut R,
) -> Result<Expr, MetaError> {
    cfg.validate()?;
    let leaf = Expr::named_vector(leaf.0, leaf.1.to_vec())?;
    let g = Gen { cfg, funs: pool_preserving(reg, &cfg.constant_pool), reg, leaf: Some(leaf) };
    g.boolean(cfg.max_depth, rng)
}

/// Connective nesting depth: comparisons and constants are 0.
pub fn bool_depth(e: &Expr) -> usize {
    match e.kind() {
        ExprKind::And { children, .. } | ExprKind::Or { children, .. } => {
            1 + children.iter().map(bool_depth).max().unwrap_or(0)
        }
        ExprKind::Not(c) => 1 + bool_depth(c),
        _ => 0,
    }
}

/// Registry functions that map vectors over the pool back into the pool:
/// `vec_sub` needs a pool closed under negation, affine maps and host
/// functions are never used.
fn pool_preserving(reg: &FunRegistry, pool: &[f64]) -> Vec<String> {
    let signed = pool.iter().any(|&x| x < 0.0);
    reg.iter()
        .filter(|(_, entry)| match entry.builtin() {
            Some(Builtin::Identity | Builtin::Relu | Builtin::NormInf) => true,
            Some(Builtin::VecSub) => signed,
            _ => false,
        })
        .map(|(name, _)| name.to_string())
        .collect()
}

struct Gen<'a> {
    cfg: &'a ExprGenConfig,
    funs: Vec<String>,
    reg: &'a FunRegistry,
    leaf: Option<Expr>,
}

impl Gen<'_> {
    fn boolean<R: Rng>(&self, depth: usize, rng: &mut R) -> Result<Expr, MetaError> {
        if depth == 0 || rng.gen_bool(0.25) {
            return self.atom(rng);
        }
        let choices = if self.cfg.allow_negation { 3 } else { 2 };
        let flag = self.cfg.flag;
        Ok(match rng.gen_range(0..choices) {
            2 => Expr::not(self.boolean(depth - 1, rng)?)?,
            c => {
                let k = rng.gen_range(1..=self.cfg.max_arity);
                let children = (0..k).map(|_| self.boolean(depth - 1, rng)).collect::<Result<Vec<_>, _>>()?;
                if c == 0 {
                    Expr::and(flag, children)?
                } else {
                    Expr::or(flag, children)?
                }
            }
        })
    }

    fn atom<R: Rng>(&self, rng: &mut R) -> Result<Expr, MetaError> {
        if self.cfg.bool_constants && rng.gen_bool(0.08) {
            return Ok(Expr::boolean(self.cfg.flag, rng.gen_bool(0.5)));
        }
        let op = if rng.gen_bool(0.5) { CmpOp::Le } else { CmpOp::Eq };
        let lhs = self.real(rng)?;
        let rhs = self.real(rng)?;
        Ok(Expr::cmp(self.cfg.flag, op, lhs, rhs)?)
    }

    fn constant<R: Rng>(&self, rng: &mut R) -> f64 {
        *self.cfg.constant_pool.choose(rng).expect("pool is nonempty")
    }

    fn literal<R: Rng>(&self, n: usize, rng: &mut R) -> Result<Expr, MetaError> {
        Ok(Expr::vector((0..n).map(|_| self.constant(rng)).collect())?)
    }

    /// The leaf, or a registry function applied to it, when one fits.
    fn leaf_vector<R: Rng>(&self, leaf: &Expr, rng: &mut R) -> Result<Expr, MetaError> {
        let n = leaf.ty().vector_dim().expect("leaves are vectors");
        let fits: Vec<&String> = self
            .funs
            .iter()
            .filter(|name| {
                let entry = self.reg.get(name).expect("listed from the registry");
                match entry.builtin() {
                    Some(Builtin::VecSub) => entry.n == 2 * n,
                    _ => entry.n == n,
                }
            })
            .collect();
        if fits.is_empty() || rng.gen_bool(0.5) {
            return Ok(leaf.clone());
        }
        let name = fits.choose(rng).expect("nonempty");
        let entry = self.reg.get(name).expect("listed from the registry");
        let args = if entry.builtin() == Some(&Builtin::VecSub) {
            vec![leaf.clone(), self.literal(n, rng)?]
        } else {
            vec![leaf.clone()]
        };
        Ok(Expr::app(Expr::fun(self.reg, name)?, args)?)
    }

    fn real<R: Rng>(&self, rng: &mut R) -> Result<Expr, MetaError> {
        let roll = rng.gen_range(0..10);
        let vec = if let Some(leaf) = self.leaf.as_ref().filter(|_| roll < 4) {
            self.leaf_vector(leaf, rng)?
        } else if roll < 6 {
            return Ok(Expr::real(self.constant(rng))?);
        } else if roll < 8 || self.funs.is_empty() {
            let n = rng.gen_range(1..=3);
            self.literal(n, rng)?
        } else {
            let name = self.funs.choose(rng).expect("nonempty");
            let entry = self.reg.get(name).expect("listed from the registry");
            let args = if entry.builtin() == Some(&Builtin::VecSub) {
                vec![self.literal(entry.n / 2, rng)?, self.literal(entry.n / 2, rng)?]
            } else {
                vec![self.literal(entry.n, rng)?]
            };
            Expr::app(Expr::fun(self.reg, name)?, args)?
        };
        let n = vec.ty().vector_dim().expect("vector typed");
        let i = rng.gen_range(0..n);
        Ok(Expr::lookup(vec, Expr::index(n, i)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::TruthMode;

    #[test]
    fn deterministic_from_seed() {
        let reg = FunRegistry::standard(&[1, 2]);
        let cfg = ExprGenConfig::for_soundness(Backend::Godel, 7);
        assert_eq!(gen_ground_expr(&cfg, &reg).unwrap(), gen_ground_expr(&cfg, &reg).unwrap());
        let a = gen_with_rng(&cfg, &reg, &mut trial_rng(7, 3)).unwrap();
        let b = gen_with_rng(&cfg, &reg, &mut trial_rng(7, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn negation_free_when_disallowed() {
        let reg = FunRegistry::standard(&[1, 2]);
        let cfg = ExprGenConfig::for_soundness(Backend::stl(1.0, TruthMode::FiniteAlt).unwrap(), 1);
        for t in 0..500 {
            let e = gen_with_rng(&cfg, &reg, &mut trial_rng(1, t)).unwrap();
            assert!(!e.contains_not());
            assert_eq!(e.ty().flag(), Some(NegFlag::Undefined));
        }
    }

    #[test]
    fn every_depth_occurs() {
        let reg = FunRegistry::standard(&[1, 2]);
        let cfg = ExprGenConfig::for_soundness(Backend::Product, 0);
        let mut hist = vec![0; cfg.max_depth + 1];
        for t in 0..1000 {
            let e = gen_with_rng(&cfg, &reg, &mut trial_rng(0, t)).unwrap();
            hist[bool_depth(&e)] += 1;
        }
        assert!(hist.iter().all(|&c| c > 0), "{hist:?}");
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = ExprGenConfig::for_soundness(Backend::Godel, 0);
        cfg.flag = NegFlag::Undefined;
        assert!(cfg.validate().is_err());
        cfg.allow_negation = false;
        cfg.constant_pool.clear();
        assert!(cfg.validate().is_err());
    }
}
