use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use serde::{Serialize, Serializer};

use super::SemanticsError;

/// A real number or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtScalar {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtScalar {
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtScalar::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtScalar::NegInf
        } else {
            ExtScalar::Finite(x)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtScalar::NegInf => f64::NEG_INFINITY,
            ExtScalar::Finite(x) => x,
            ExtScalar::PosInf => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtScalar::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtScalar::Finite(_))
    }

    /// `+inf + -inf` is rejected.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Result<Self, SemanticsError> {
        use ExtScalar::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(SemanticsError::InfinityArithmetic),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => Ok(ExtScalar::from_f64(a + b)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Self) -> Result<Self, SemanticsError> {
        self.add(-other)
    }

    /// Product with the convention `0 * ±inf = 0`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Self {
        use ExtScalar::*;
        match (self, other) {
            (Finite(a), Finite(b)) => ExtScalar::from_f64(a * b),
            (Finite(a), inf) | (inf, Finite(a)) => {
                if a == 0.0 {
                    Finite(0.0)
                } else if (a > 0.0) == (inf == PosInf) {
                    PosInf
                } else {
                    NegInf
                }
            }
            (a, b) => {
                if a == b {
                    PosInf
                } else {
                    NegInf
                }
            }
        }
    }
}

impl Neg for ExtScalar {
    type Output = ExtScalar;

    fn neg(self) -> ExtScalar {
        match self {
            ExtScalar::NegInf => ExtScalar::PosInf,
            ExtScalar::Finite(x) => ExtScalar::Finite(-x),
            ExtScalar::PosInf => ExtScalar::NegInf,
        }
    }
}

impl PartialOrd for ExtScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::NegInf => f.write_str("-inf"),
            ExtScalar::PosInf => f.write_str("+inf"),
            ExtScalar::Finite(x) => write!(f, "{x}"),
        }
    }
}

/// Finite values serialize as numbers, infinities as `"-inf"` / `"+inf"`.
impl Serialize for ExtScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtScalar::Finite(x) => s.serialize_f64(*x),
            other => s.collect_str(other),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::ExtScalar::*;
    use super::*;

    #[test]
    fn infinity_minus_infinity_is_an_error() {
        assert_eq!(PosInf.sub(PosInf), Err(SemanticsError::InfinityArithmetic));
        assert_eq!(NegInf.add(PosInf), Err(SemanticsError::InfinityArithmetic));
        assert_eq!(NegInf.add(Finite(3.0)), Ok(NegInf));
        assert_eq!(Finite(1.0).sub(Finite(3.0)), Ok(Finite(-2.0)));
    }

    #[test]
    fn zero_absorbs_infinity() {
        assert_eq!(Finite(0.0).mul(NegInf), Finite(0.0));
        assert_eq!(Finite(-2.0).mul(NegInf), PosInf);
        assert_eq!(NegInf.mul(NegInf), PosInf);
        assert_eq!(PosInf.mul(NegInf), NegInf);
    }

    #[test]
    fn ordering_and_display() {
        assert!(NegInf < Finite(-1e300));
        assert!(Finite(1e300) < PosInf);
        assert_eq!(serde_json::to_string(&NegInf).unwrap(), "\"-inf\"");
        assert_eq!(serde_json::to_string(&Finite(0.5)).unwrap(), "0.5");
    }
}
