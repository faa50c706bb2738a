use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::num::{Kink, Real, EXP_CLAMP};

/// Forward-mode dual number `primal + tangent·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub primal: f64,
    pub tangent: f64,
}

impl Dual {
    pub fn new(primal: f64, tangent: f64) -> Self {
        Dual { primal, tangent }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.primal + o.primal, self.tangent + o.tangent)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.primal - o.primal, self.tangent - o.tangent)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.primal * o.primal, self.primal * o.tangent + self.tangent * o.primal)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        let q = self.primal / o.primal;
        Dual::new(q, (self.tangent - q * o.tangent) / o.primal)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.primal, -self.tangent)
    }
}

impl Real for Dual {
    fn constant(x: f64) -> Self {
        Dual::new(x, 0.0)
    }

    fn seeded(x: f64) -> Self {
        Dual::new(x, 1.0)
    }

    fn value(self) -> f64 {
        self.primal
    }

    fn tangent(self) -> f64 {
        self.tangent
    }

    fn exp_clamped(self) -> (Self, bool) {
        let c = self.primal.clamp(-EXP_CLAMP, EXP_CLAMP);
        let e = c.exp();
        if c != self.primal {
            // Outside the clamp the function is constant.
            (Dual::new(e, 0.0), true)
        } else {
            (Dual::new(e, self.tangent * e), false)
        }
    }

    fn powf(self, p: f64) -> Result<Self, Kink> {
        let v = self.primal.powf(p);
        if self.tangent == 0.0 {
            return Ok(Dual::new(v, 0.0));
        }
        if self.primal == 0.0 && p < 1.0 {
            return Err(Kink);
        }
        Ok(Dual::new(v, p * self.primal.powf(p - 1.0) * self.tangent))
    }

    fn abs_checked(self) -> Result<Self, Kink> {
        if self.primal == 0.0 {
            return if self.tangent == 0.0 { Ok(Dual::new(0.0, 0.0)) } else { Err(Kink) };
        }
        Ok(if self.primal < 0.0 { -self } else { self })
    }

    fn min_checked(self, other: Self) -> Result<Self, Kink> {
        if self.primal == other.primal {
            return if self.tangent == other.tangent { Ok(self) } else { Err(Kink) };
        }
        Ok(if other.primal < self.primal { other } else { self })
    }

    fn max_checked(self, other: Self) -> Result<Self, Kink> {
        if self.primal == other.primal {
            return if self.tangent == other.tangent { Ok(self) } else { Err(Kink) };
        }
        Ok(if other.primal > self.primal { other } else { self })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_rules() {
        let a = Dual::new(3.0, 1.0);
        let b = Dual::new(2.0, 0.5);
        assert_eq!(a * b, Dual::new(6.0, 3.0 * 0.5 + 2.0));
        assert_eq!(a / Dual::constant(2.0), Dual::new(1.5, 0.5));
        assert_eq!((a * a).tangent, 6.0);
        let (e, clamped) = Dual::new(1.0, 2.0).exp_clamped();
        assert!(!clamped);
        assert_eq!(e.tangent, 2.0 * 1.0_f64.exp());
    }

    #[test]
    fn ties_with_different_tangents_are_kinks() {
        let x = Dual::seeded(1.0);
        let c = Dual::constant(1.0);
        assert_eq!(x.min_checked(c), Err(Kink));
        assert_eq!(x.max_checked(c), Err(Kink));
        assert_eq!(c.min_checked(c), Ok(c));
        assert_eq!(Dual::seeded(0.0).abs_checked(), Err(Kink));
        assert_eq!(Dual::seeded(-2.0).abs_checked(), Ok(Dual::new(2.0, -1.0)));
        assert_eq!(x.min_first(c), x);
    }

    #[test]
    fn fractional_power_at_zero() {
        assert_eq!(Dual::seeded(0.0).powf(0.5), Err(Kink));
        assert_eq!(Dual::constant(0.0).powf(0.5), Ok(Dual::new(0.0, 0.0)));
        assert_eq!(Dual::seeded(0.0).powf(2.0), Ok(Dual::new(0.0, 0.0)));
        assert_eq!(Dual::seeded(2.0).powf(3.0), Ok(Dual::new(8.0, 12.0)));
    }
}
