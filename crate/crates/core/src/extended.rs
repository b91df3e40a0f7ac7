//! Reals extended with `±∞`.
//!
//! Divergences are `+∞` whenever absolute continuity fails, and entropies of
//! degenerate densities may reach `−∞`. The arithmetic here follows the usual
//! measure-theoretic conventions: `ln 0 = −∞`, `ln(a/0) = +∞` for `a > 0`,
//! and `0 · (±∞) = 0`.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    /// Maps IEEE infinities onto the infinite variants.
    ///
    /// NaN has no extended-real meaning and is rejected with a panic in debug
    /// builds; release builds keep it as `Finite(NaN)`.
    pub fn from_f64(x: f64) -> Self {
        debug_assert!(!x.is_nan(), "NaN is not an extended real");
        if x == f64::INFINITY {
            ExtendedReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtendedReal::NegInf
        } else {
            ExtendedReal::Finite(x)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// Natural log of a nonnegative value; `ln 0 = −∞`.
    pub fn ln(x: f64) -> Self {
        debug_assert!(x >= 0.0, "ln of negative value {x}");
        if x == 0.0 {
            ExtendedReal::NegInf
        } else {
            ExtendedReal::from_f64(x.ln())
        }
    }

    /// `ln(a/b)` for nonnegative `a`, `b`, with `ln(a/0) = +∞` when `a > 0`
    /// and `ln(0/b) = −∞`. `ln(0/0)` is not defined and yields `−∞`; callers
    /// multiply it by a zero mass.
    pub fn ln_ratio(a: f64, b: f64) -> Self {
        if a == 0.0 {
            ExtendedReal::NegInf
        } else if b == 0.0 {
            ExtendedReal::PosInf
        } else {
            ExtendedReal::from_f64((a / b).ln())
        }
    }

    /// Multiplication by a real, with `0 · (±∞) = 0`.
    pub fn scale(self, k: f64) -> Self {
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::from_f64(k * x),
            _ if k == 0.0 => ExtendedReal::ZERO,
            ExtendedReal::PosInf if k > 0.0 => ExtendedReal::PosInf,
            ExtendedReal::PosInf => ExtendedReal::NegInf,
            ExtendedReal::NegInf if k > 0.0 => ExtendedReal::NegInf,
            ExtendedReal::NegInf => ExtendedReal::PosInf,
        }
    }

    /// Sum of two extended reals.
    ///
    /// # Panics
    ///
    /// Panics on `+∞ + (−∞)`.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => ExtendedReal::from_f64(a + b),
            (PosInf, NegInf) | (NegInf, PosInf) => panic!("+inf + -inf is undefined"),
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        }
    }

    /// Applies a finite map to the finite branch and leaves infinities alone.
    pub fn map_finite(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::from_f64(f(x)),
            other => other,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        ExtendedReal::from_f64(x)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => f.write_str("-inf"),
            ExtendedReal::PosInf => f.write_str("inf"),
            ExtendedReal::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl std::ops::Neg for ExtendedReal {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}
