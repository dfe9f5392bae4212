//! Nonnegative extended reals `[0, +inf]`.
//!
//! The codomain of every Young function. Values are never NaN and never
//! negative; `0 * inf = 0` so that modular sums ignore infinite slices
//! evaluated at points of zero mass or zero argument.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal(0.0);
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);

    /// Builds an extended real, rejecting NaN and negative input.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::Domain { what: "extended real", value });
        }
        // -0.0 collapses to +0.0 so bit patterns stay canonical
        Ok(ExtReal(value + 0.0))
    }

    /// Clamps tiny negative rounding noise to zero; NaN becomes an error.
    pub(crate) fn from_rounded(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::Domain { what: "extended real", value });
        }
        Ok(ExtReal(if value < 0.0 { 0.0 } else { value }))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        !self.is_infinite()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    /// `self - rhs`, defined only for finite `rhs`. The result may be
    /// negative, hence the plain `f64`.
    pub fn checked_sub(self, rhs: ExtReal) -> Option<f64> {
        if rhs.is_infinite() {
            None
        } else {
            Some(self.0 - rhs.0)
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Scales by a finite nonnegative weight with the `0 * inf = 0` rule.
    pub fn scale(self, weight: f64) -> ExtReal {
        debug_assert!(weight >= 0.0 && weight.is_finite());
        self * ExtReal(weight)
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        ExtReal(self.0 + rhs.0)
    }
}

impl AddAssign for ExtReal {
    fn add_assign(&mut self, rhs: ExtReal) {
        self.0 += rhs.0;
    }
}

impl Mul for ExtReal {
    type Output = ExtReal;
    fn mul(self, rhs: ExtReal) -> ExtReal {
        if self.0 == 0.0 || rhs.0 == 0.0 {
            ExtReal::ZERO
        } else {
            ExtReal(self.0 * rhs.0)
        }
    }
}

impl core::iter::Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        iter.fold(ExtReal::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

impl TryFrom<f64> for ExtReal {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        ExtReal::new(value)
    }
}
