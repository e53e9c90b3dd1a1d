//! Number types used by every computation in the crate.
//!
//! All algorithms are generic over [`Scalar`], implemented for `f64` and for
//! arbitrary-precision rationals ([`Rational`]). Every finite `f64` is an
//! exact rational, so floating inputs can be lifted into exact mode without
//! loss and identities can then be checked with zero residual.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Exact rational number.
pub type Rational = BigRational;

pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and comparisons need no tolerance.
    const EXACT: bool;

    /// Lifts a finite `f64`. Panics on NaN or infinity.
    fn of_f64(x: f64) -> Self;

    /// Nearest `f64`.
    fn as_f64(&self) -> f64;

    /// Threshold under which pivots and reduced costs count as zero.
    fn pivot_eps() -> Self;

    /// Strictly greater than zero. (`Signed::is_positive` is true for
    /// `+0.0` on floats.)
    fn is_pos(&self) -> bool {
        *self > Self::zero()
    }

    /// Strictly less than zero.
    fn is_neg(&self) -> bool {
        *self < Self::zero()
    }

    fn of_usize(n: usize) -> Self {
        Self::of_f64(n as f64)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn of_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value {x}");
        x
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn pivot_eps() -> Self {
        1e-12
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn of_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| panic!("non-finite value {x}"))
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn pivot_eps() -> Self {
        num_traits::Zero::zero()
    }
}

/// The one comparison policy shared by all modules.
///
/// Two floating values `a`, `b` compare equal when
/// `|a - b| <= abs + rel * max(|a|, |b|)`. In exact mode every comparison is
/// exact and the policy is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    /// Primal/dual agreement of the two free-space norm solvers.
    pub const DUALITY: Tolerance = Tolerance::new(1e-7, 1e-7);

    fn slack(&self, a: f64, b: f64) -> f64 {
        self.abs + self.rel * a.abs().max(b.abs())
    }

    pub fn le<S: Scalar>(&self, a: &S, b: &S) -> bool {
        if S::EXACT {
            a <= b
        } else {
            let (x, y) = (a.as_f64(), b.as_f64());
            x <= y + self.slack(x, y)
        }
    }

    pub fn lt<S: Scalar>(&self, a: &S, b: &S) -> bool {
        !self.le(b, a)
    }

    pub fn eq<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.le(a, b) && self.le(b, a)
    }

    /// Absolute-only test against zero.
    pub fn is_zero<S: Scalar>(&self, a: &S) -> bool {
        if S::EXACT {
            a.is_zero()
        } else {
            a.as_f64().abs() <= self.abs
        }
    }

    /// `|a - b| / max(1, |a|, |b|)`, the residual reported by the checks.
    pub fn residual<S: Scalar>(a: &S, b: &S) -> f64 {
        let diff = (a.clone() - b.clone()).abs().as_f64();
        diff / 1f64.max(a.as_f64().abs()).max(b.as_f64().abs())
    }
}
