use serde::Serialize;

use super::DiffError;

/// Step sizes used on each side, largest first.
pub const H_SCHEDULE: [f64; 7] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

/// Default agreement tolerance for one-sided limits.
pub const DEFAULT_TOL: f64 = 1e-4;

/// The standard basis vector `e_i` of length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrVec {
    n: usize,
    i: usize,
}

impl ErrVec {
    pub fn new(n: usize, i: usize) -> Result<Self, DiffError> {
        if i >= n {
            return Err(DiffError::CoordinateOutOfRange { coord: i, dim: n });
        }
        Ok(ErrVec { n, i })
    }

    pub fn to_vec(self) -> Vec<f64> {
        (0..self.n).map(|j| if j == self.i { 1.0 } else { 0.0 }).collect()
    }

    /// `a + h·e_i`.
    pub fn shift(self, a: &[f64], h: f64) -> Vec<f64> {
        let mut x = a.to_vec();
        x[self.i] += h;
        x
    }
}

/// One-sided finite-difference limits of a partial derivative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialEstimate {
    /// Mean of the two one-sided limits.
    pub value: f64,
    pub left_limit: f64,
    pub right_limit: f64,
    /// Both sides settled and agree within tolerance.
    pub converged: bool,
    /// Signed steps: the right-hand schedule followed by the left-hand one.
    pub h_schedule: Vec<f64>,
    /// Successive differences of the extrapolated quotients, right side
    /// then left side.
    pub residuals: Vec<f64>,
}

struct Side {
    limit: f64,
    best_residual: f64,
    residuals: Vec<f64>,
}

/// Estimate `∂f/∂x_i` at `a` from both sides.
///
/// Each side evaluates difference quotients over [`H_SCHEDULE`], applies one
/// level of Richardson extrapolation (ratio 10) and takes the extrapolant at
/// the point where successive extrapolants agree best. A side whose best
/// residual exceeds `tol·max(1, |limit|)` has not settled and yields
/// [`DiffError::NoConvergence`]; two settled sides that disagree yield an
/// estimate with `converged = false`.
pub fn partial_fd<F>(f: F, a: &[f64], i: usize, tol: f64) -> Result<PartialEstimate, DiffError>
where
    F: Fn(&[f64]) -> f64,
{
    let e = ErrVec::new(a.len(), i)?;
    let f0 = f(a);
    if !f0.is_finite() {
        return Err(DiffError::NonFinite { h: 0.0 });
    }
    let right = one_side(&f, a, e, f0, 1.0)?;
    let left = one_side(&f, a, e, f0, -1.0)?;
    for side in [&right, &left] {
        if side.best_residual > tol * side.limit.abs().max(1.0) {
            return Err(DiffError::NoConvergence { coord: i, residual: side.best_residual });
        }
    }
    let scale = right.limit.abs().max(left.limit.abs()).max(1.0);
    let converged = (right.limit - left.limit).abs() <= tol * scale;
    let h_schedule = H_SCHEDULE.iter().copied().chain(H_SCHEDULE.iter().map(|h| -h)).collect();
    let mut residuals = right.residuals;
    residuals.extend(left.residuals);
    Ok(PartialEstimate {
        value: 0.5 * (left.limit + right.limit),
        left_limit: left.limit,
        right_limit: right.limit,
        converged,
        h_schedule,
        residuals,
    })
}

fn one_side<F>(f: &F, a: &[f64], e: ErrVec, f0: f64, sign: f64) -> Result<Side, DiffError>
where
    F: Fn(&[f64]) -> f64,
{
    let mut quotients = Vec::with_capacity(H_SCHEDULE.len());
    for &h in &H_SCHEDULE {
        let s = sign * h;
        let fh = f(&e.shift(a, s));
        if !fh.is_finite() {
            return Err(DiffError::NonFinite { h: s });
        }
        quotients.push((fh - f0) / s);
    }
    let extrapolated: Vec<f64> = quotients.windows(2).map(|w| (10.0 * w[1] - w[0]) / 9.0).collect();
    let residuals: Vec<f64> = extrapolated.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let (k, best_residual) = residuals
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, r)| if r < best.1 { (k, r) } else { best });
    Ok(Side { limit: extrapolated[k + 1], best_residual, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_quadratic() {
        let sum = |x: &[f64]| x.iter().sum::<f64>();
        let est = partial_fd(sum, &[0.3, -2.0, 7.0], 1, DEFAULT_TOL).unwrap();
        assert!(est.converged);
        assert!((est.value - 1.0).abs() < 1e-8);

        let sq = |x: &[f64]| x[0] * x[0];
        let est = partial_fd(sq, &[3.0], 0, DEFAULT_TOL).unwrap();
        assert!((est.value - 6.0).abs() < 1e-6);
        assert_eq!(est.h_schedule.len(), 14);
        assert_eq!(est.residuals.len(), 10);
    }

    #[test]
    fn constant_function_has_zero_partial() {
        let est = partial_fd(|_: &[f64]| 4.2, &[1.0, 2.0], 0, DEFAULT_TOL).unwrap();
        assert!(est.converged);
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn kink_reports_both_sides() {
        let abs = |x: &[f64]| x[0].abs();
        let est = partial_fd(abs, &[0.0], 0, DEFAULT_TOL).unwrap();
        assert!(!est.converged);
        assert!((est.right_limit - 1.0).abs() < 1e-9);
        assert!((est.left_limit + 1.0).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            partial_fd(|x: &[f64]| 1.0 / x[0], &[0.0], 0, DEFAULT_TOL),
            Err(DiffError::NonFinite { .. })
        ));
        assert!(matches!(
            partial_fd(|x: &[f64]| x[0], &[0.0], 3, DEFAULT_TOL),
            Err(DiffError::CoordinateOutOfRange { .. })
        ));
        // sin(1/x) near 0 oscillates too fast for any step to settle.
        assert!(matches!(
            partial_fd(|x: &[f64]| (1.0 / (x[0] - 1e-9)).sin(), &[0.0], 0, DEFAULT_TOL),
            Err(DiffError::NoConvergence { .. } | DiffError::NonFinite { .. })
        ));
    }

    #[test]
    fn err_vec() {
        assert_eq!(ErrVec::new(3, 1).unwrap().to_vec(), vec![0.0, 1.0, 0.0]);
        assert_eq!(ErrVec::new(2, 0).unwrap().shift(&[1.0, 1.0], 0.5), vec![1.5, 1.0]);
    }
}
