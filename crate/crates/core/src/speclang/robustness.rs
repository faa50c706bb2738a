use super::SpecError;
use crate::lang::{Builtin, Expr, FunRegistry, LangError, NegFlag};

/// The conclusion of ε-δ-robustness for the network `f` around `v`,
/// evaluated at the input leaf `x`:
///
/// `norm_inf(vec_sub(f(x), f(v)))[0] <= delta`
///
/// `x` and `v` become the named vector leaves `"x"` and `"v"`. The
/// precondition `|x - v|∞ <= eps` is not part of the formula; it is the box
/// an optimizer projects onto. `vec_sub{m}` and `norm_inf{m}` are added to
/// `reg` when missing.
pub fn robustness_spec(
    reg: &mut FunRegistry,
    f: &str,
    v: &[f64],
    x: &[f64],
    eps: f64,
    delta: f64,
) -> Result<Expr, SpecError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(SpecError::InvalidParameter(format!("eps must be positive and finite, got {eps}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(SpecError::InvalidParameter(format!("delta must be positive and finite, got {delta}")));
    }
    let entry = reg.get(f).ok_or_else(|| LangError::UnknownFunction(f.to_string()))?;
    let (n, m) = (entry.n, entry.m);
    for input in [v, x] {
        if input.len() != n {
            return Err(LangError::ArityMismatch { name: f.to_string(), expected: n, found: input.len() }.into());
        }
    }
    let sub = ensure(reg, &format!("vec_sub{m}"), Builtin::VecSub, 2 * m)?;
    let norm = ensure(reg, &format!("norm_inf{m}"), Builtin::NormInf, m)?;

    let fx = Expr::app(Expr::fun(reg, f)?, vec![Expr::named_vector("x", x.to_vec())?])?;
    let fv = Expr::app(Expr::fun(reg, f)?, vec![Expr::named_vector("v", v.to_vec())?])?;
    let diff = Expr::app(Expr::fun(reg, &sub)?, vec![fx, fv])?;
    let dist = Expr::app(Expr::fun(reg, &norm)?, vec![diff])?;
    let lhs = Expr::lookup(dist, Expr::index(1, 0)?)?;
    Ok(Expr::le(NegFlag::Undefined, lhs, Expr::real(delta)?)?)
}

fn ensure(reg: &mut FunRegistry, name: &str, builtin: Builtin, n: usize) -> Result<String, SpecError> {
    match reg.get(name) {
        Some(entry) if entry.builtin() == Some(&builtin) && entry.n == n => {}
        Some(_) => {
            return Err(LangError::InvalidFunction {
                name: name.to_string(),
                reason: format!("expected the builtin {} with input dimension {n}", builtin.keyword()),
            }
            .into())
        }
        None => reg.register_builtin(name, builtin, n)?,
    }
    Ok(name.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::bool_semantics;
    use crate::semantics::{interpret, Backend, TruthMode};

    fn net(n: usize) -> FunRegistry {
        let mut reg = FunRegistry::new();
        reg.register_builtin("net", Builtin::Identity, n).unwrap();
        reg
    }

    #[test]
    fn identity_network_values() {
        let stl = Backend::stl(1.0, TruthMode::FiniteAlt).unwrap();
        let mut reg = net(1);
        let at_v = robustness_spec(&mut reg, "net", &[0.0], &[0.0], 1.0, 0.1).unwrap();
        assert!((interpret(&at_v, stl, &reg).unwrap() - 0.1).abs() < 1e-15);
        assert!(bool_semantics(&at_v, &reg).unwrap());
        let off = robustness_spec(&mut reg, "net", &[0.0], &[1.0], 1.0, 0.1).unwrap();
        assert!((interpret(&off, stl, &reg).unwrap() + 0.9).abs() < 1e-15);
        assert!(!bool_semantics(&off, &reg).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut reg = net(2);
        assert!(matches!(
            robustness_spec(&mut reg, "nope", &[0.0; 2], &[0.0; 2], 1.0, 0.1),
            Err(SpecError::Lang(LangError::UnknownFunction(_)))
        ));
        assert!(matches!(
            robustness_spec(&mut reg, "net", &[0.0], &[0.0; 2], 1.0, 0.1),
            Err(SpecError::Lang(LangError::ArityMismatch { .. }))
        ));
        assert!(matches!(
            robustness_spec(&mut reg, "net", &[0.0; 2], &[0.0; 2], 0.0, 0.1),
            Err(SpecError::InvalidParameter(_))
        ));
    }
}
