//! Monotone threshold search on `[0, inf)`.

use crate::error::Result;
use crate::ext::ExtReal;

/// Below this the threshold is reported as exactly zero.
const FLOOR: f64 = 1e-300;
/// Above this the threshold is reported as `+inf`.
const CEIL: f64 = 1e300;

/// Locates the switch point of a monotone predicate (`false` below, `true`
/// above) by geometric bracketing from `1` followed by bisection until the
/// bracket is relatively narrower than `rel_tol`.
///
/// Returns the bracket `(lo, hi)` with `pred(hi) == true` and, unless `lo` is
/// zero, `pred(lo) == false`. `hi` is `+inf` when the predicate never holds.
pub fn bracket_threshold<P>(mut pred: P, rel_tol: f64) -> Result<(f64, f64)>
where
    P: FnMut(f64) -> Result<bool>,
{
    let (mut lo, mut hi);
    if pred(1.0)? {
        hi = 1.0;
        loop {
            let next = hi * 0.5;
            if next < FLOOR {
                return Ok((0.0, hi));
            }
            if pred(next)? {
                hi = next;
            } else {
                lo = next;
                break;
            }
        }
    } else {
        lo = 1.0;
        loop {
            let next = lo * 2.0;
            if next > CEIL {
                return Ok((lo, f64::INFINITY));
            }
            if pred(next)? {
                hi = next;
                break;
            }
            lo = next;
        }
    }
    // bracket is [lo, 2 lo] here; bisect
    for _ in 0..200 {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Midpoint of [`bracket_threshold`], as an extended real.
pub fn threshold<P>(pred: P, rel_tol: f64) -> Result<ExtReal>
where
    P: FnMut(f64) -> Result<bool>,
{
    let (lo, hi) = bracket_threshold(pred, rel_tol)?;
    if hi.is_infinite() {
        Ok(ExtReal::INFINITY)
    } else if lo == 0.0 && hi <= 2.0 * FLOOR {
        Ok(ExtReal::ZERO)
    } else {
        ExtReal::new(0.5 * (lo + hi))
    }
}

/// Lower end of [`bracket_threshold`]: the largest located point where the
/// predicate is still false, so callers get `!pred(result)` unless the
/// bracket collapsed onto zero.
pub fn threshold_below<P>(pred: P, rel_tol: f64) -> Result<ExtReal>
where
    P: FnMut(f64) -> Result<bool>,
{
    let (lo, hi) = bracket_threshold(pred, rel_tol)?;
    if hi.is_infinite() {
        Ok(ExtReal::INFINITY)
    } else {
        ExtReal::new(lo)
    }
}

/// Bisection for the last point where `pred` holds inside `[lo, hi]`, given
/// `pred(lo)` and `!pred(hi)`. Absolute tolerance.
pub(crate) fn last_true<P>(mut pred: P, mut lo: f64, mut hi: f64, abs_tol: f64) -> Result<f64>
where
    P: FnMut(f64) -> Result<bool>,
{
    for _ in 0..200 {
        if hi - lo <= abs_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
