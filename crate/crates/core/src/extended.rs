//! Extended nonnegative reals: finite values in nats, or +∞.
//!
//! Relative entropy between states with partially overlapping supports is
//! infinite, and the capacity per unit cost inherits that, so the infinite
//! branch is a first-class value rather than an error.

use std::fmt;

/// A finite nonnegative real (nats) or +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedReal::Infinite)
    }

    /// Finite value, or `None` on the infinite branch.
    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(*v),
            ExtendedReal::Infinite => None,
        }
    }

    /// Collapse to `f64`, mapping the infinite branch to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => *v,
            ExtendedReal::Infinite => f64::INFINITY,
        }
    }

    /// Reciprocal with 1/0 = +∞ and 1/∞ = 0.
    pub fn recip(&self) -> ExtendedReal {
        match self {
            ExtendedReal::Infinite => ExtendedReal::Finite(0.0),
            ExtendedReal::Finite(v) if *v <= 0.0 => ExtendedReal::Infinite,
            ExtendedReal::Finite(v) => ExtendedReal::Finite(1.0 / v),
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        if v.is_infinite() {
            ExtendedReal::Infinite
        } else {
            ExtendedReal::Finite(v)
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // "inf" is the literal infinity token in CSV and stdout.
            ExtendedReal::Infinite => write!(f, "inf"),
            ExtendedReal::Finite(v) => write!(f, "{}", crate::io::format_sig9(*v)),
        }
    }
}
