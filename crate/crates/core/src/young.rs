//! Young functions and Musielak–Orlicz functions.
//!
//! A [`YoungSlice`] is a single Young function `[0, inf) -> [0, inf]`: zero at
//! zero, nondecreasing, convex below its finiteness threshold `b` and
//! unbounded. A [`MOFunction`] assigns a slice to every point of a measure
//! space. The parameters
//!
//! * `a(t) = sup { u >= 0 : phi(t, u) = 0 }`
//! * `b(t) = inf { u >= 0 : phi(t, u) = inf }`
//! * `phi^{-1}(t, w) = inf { v >= 0 : phi(t, v) > w }`
//!
//! have closed forms for the built-in families; tabulated and custom slices
//! fall back to monotone search.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::ext::ExtReal;
use crate::measure::{MeasureSpace, Point};
use crate::search;

/// Relative tolerance of every bisection.
pub const EPS_ROOT: f64 = 1e-10;
/// Tolerance of the sampled convexity check, relative to `max(1, |phi|)`.
pub const EPS_CONV: f64 = 1e-9;

/// A function of `(t, u)` that is a Young function in `u` at every point.
///
/// Only [`eval`](MusielakOrlicz::eval) is required; the parameters and the
/// right-continuous inverse default to monotone search on `eval`.
pub trait MusielakOrlicz {
    fn eval(&self, at: &Point, u: f64) -> Result<ExtReal>;

    fn root_tol(&self) -> f64 {
        EPS_ROOT
    }

    fn a_param(&self, at: &Point) -> Result<ExtReal> {
        search::threshold(|u| Ok(!self.eval(at, u)?.is_zero()), self.root_tol())
    }

    fn b_param(&self, at: &Point) -> Result<ExtReal> {
        search::threshold(|u| Ok(self.eval(at, u)?.is_infinite()), self.root_tol())
    }

    fn inverse(&self, at: &Point, w: f64) -> Result<ExtReal> {
        check_arg("inverse argument", w)?;
        search::threshold_below(|v| Ok(self.eval(at, v)?.value() > w), self.root_tol())
    }
}

impl<T: MusielakOrlicz + ?Sized> MusielakOrlicz for &T {
    fn eval(&self, at: &Point, u: f64) -> Result<ExtReal> {
        (**self).eval(at, u)
    }
    fn root_tol(&self) -> f64 {
        (**self).root_tol()
    }
    fn a_param(&self, at: &Point) -> Result<ExtReal> {
        (**self).a_param(at)
    }
    fn b_param(&self, at: &Point) -> Result<ExtReal> {
        (**self).b_param(at)
    }
    fn inverse(&self, at: &Point, w: f64) -> Result<ExtReal> {
        (**self).inverse(at, w)
    }
}

pub(crate) fn check_arg(what: &'static str, u: f64) -> Result<()> {
    if u.is_nan() || u < 0.0 {
        Err(Error::Domain { what, value: u })
    } else {
        Ok(())
    }
}

/// Piecewise-linear Young function through `(0, 0)` and a list of knots.
///
/// Between finite knots the slice interpolates linearly. Past the last finite
/// knot it is `+inf` if the table carries an `inf` knot, otherwise it
/// continues with the slope of the last segment.
#[derive(Clone, Debug, PartialEq)]
pub struct TableSlice {
    knots: Vec<(f64, f64)>,
    infinite_tail: bool,
}

impl TableSlice {
    pub fn new(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        knots.sort_by(|x, y| x.0.total_cmp(&y.0));
        if knots.first().map(|k| k.0) != Some(0.0) {
            knots.insert(0, (0.0, 0.0));
        }
        if knots[0].1 != 0.0 {
            return Err(Error::InvalidFunction("table value at u = 0 must be 0".into()));
        }
        let infinite_tail = knots.iter().any(|k| k.1.is_infinite());
        let mut finite: Vec<(f64, f64)> = knots.into_iter().filter(|k| k.1.is_finite()).collect();
        finite.dedup_by(|x, y| x.0 == y.0 && x.1 == y.1);
        for w in finite.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidFunction("table knots must have distinct u".into()));
            }
            if w[1].1 < w[0].1 || w[1].1.is_nan() || w[1].0.is_nan() {
                return Err(Error::InvalidFunction("table values must be nondecreasing".into()));
            }
        }
        if !infinite_tail {
            let n = finite.len();
            if n < 2 || finite[n - 1].1 <= finite[n - 2].1 {
                return Err(Error::InvalidFunction(
                    "table without an inf knot must end with a positive slope".into(),
                ));
            }
        }
        Ok(TableSlice { knots: finite, infinite_tail })
    }

    pub fn eval(&self, u: f64) -> ExtReal {
        let k = &self.knots;
        let last = k[k.len() - 1];
        if u > last.0 {
            if self.infinite_tail || k.len() < 2 {
                return ExtReal::INFINITY;
            }
            let prev = k[k.len() - 2];
            let slope = (last.1 - prev.1) / (last.0 - prev.0);
            return ExtReal::from_rounded(last.1 + slope * (u - last.0)).unwrap_or(ExtReal::INFINITY);
        }
        let i = k.partition_point(|&(x, _)| x <= u);
        if i == 0 {
            return ExtReal::ZERO;
        }
        let (x0, y0) = k[i - 1];
        if x0 == u || i == k.len() {
            return ExtReal::from_rounded(y0).unwrap_or(ExtReal::ZERO);
        }
        let (x1, y1) = k[i];
        ExtReal::from_rounded(y0 + (y1 - y0) * (u - x0) / (x1 - x0)).unwrap_or(ExtReal::ZERO)
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn has_infinite_tail(&self) -> bool {
        self.infinite_tail
    }
}

/// Table of slices keyed by the point coordinate; lookups use the nearest key.
#[derive(Clone, Debug, PartialEq)]
pub struct Tabulated {
    rows: Vec<(f64, TableSlice)>,
}

impl Tabulated {
    pub fn new(mut rows: Vec<(f64, TableSlice)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidFunction("empty table".into()));
        }
        rows.sort_by(|x, y| x.0.total_cmp(&y.0));
        if rows.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidFunction("duplicate t in table".into()));
        }
        Ok(Tabulated { rows })
    }

    /// Builds a table from long-format `(t, u, value)` records.
    pub fn from_records(records: &[(f64, f64, f64)]) -> Result<Self> {
        let mut sorted: Vec<(f64, f64, f64)> = records.to_vec();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut rows = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let t = sorted[i].0;
            let mut knots = Vec::new();
            while i < sorted.len() && sorted[i].0 == t {
                knots.push((sorted[i].1, sorted[i].2));
                i += 1;
            }
            rows.push((t, TableSlice::new(knots)?));
        }
        Tabulated::new(rows)
    }

    pub fn slice_near(&self, t: f64) -> &TableSlice {
        let i = self.rows.partition_point(|r| r.0 < t);
        if i == 0 {
            return &self.rows[0].1;
        }
        if i == self.rows.len() {
            return &self.rows[i - 1].1;
        }
        if (self.rows[i].0 - t) < (t - self.rows[i - 1].0) {
            &self.rows[i].1
        } else {
            &self.rows[i - 1].1
        }
    }

    pub fn rows(&self) -> &[(f64, TableSlice)] {
        &self.rows
    }
}

/// One Young function: the restriction of a Musielak–Orlicz function to a point.
#[derive(Clone, Debug, PartialEq)]
pub enum YoungSlice {
    /// `scale * u^p`, `p >= 1`.
    Power { p: f64, scale: f64 },
    /// `max(u - shift, 0)`.
    Hinge { shift: f64 },
    /// `0` on `[0, b]`, `+inf` beyond.
    Indicator { b: f64 },
    /// `inner` on `[0, b]`, `+inf` beyond.
    Capped { inner: Box<YoungSlice>, b: f64 },
    Table(Arc<Tabulated>, f64),
    Custom { expr: Arc<Expr>, t: f64 },
}

impl YoungSlice {
    pub fn eval(&self, u: f64) -> Result<ExtReal> {
        check_arg("argument u", u)?;
        match self {
            YoungSlice::Power { p, scale } => {
                if u == 0.0 {
                    Ok(ExtReal::ZERO)
                } else {
                    ExtReal::from_rounded(scale * libm::pow(u, *p))
                }
            }
            YoungSlice::Hinge { shift } => ExtReal::from_rounded((u - shift).max(0.0)),
            YoungSlice::Indicator { b } => Ok(if u <= *b { ExtReal::ZERO } else { ExtReal::INFINITY }),
            YoungSlice::Capped { inner, b } => {
                if u <= *b {
                    inner.eval(u)
                } else {
                    Ok(ExtReal::INFINITY)
                }
            }
            YoungSlice::Table(tab, t) => Ok(tab.slice_near(*t).eval(u)),
            YoungSlice::Custom { expr, t } => {
                let v = expr.eval(*t, u);
                if v.is_nan() || v < 0.0 {
                    Err(Error::InvalidFunction(format!(
                        "custom expression gives {v} at t = {t}, u = {u}"
                    )))
                } else {
                    ExtReal::new(v)
                }
            }
        }
    }

    fn closed_form(&self) -> bool {
        match self {
            YoungSlice::Power { .. } | YoungSlice::Hinge { .. } | YoungSlice::Indicator { .. } => true,
            YoungSlice::Capped { inner, .. } => inner.closed_form(),
            YoungSlice::Table(..) | YoungSlice::Custom { .. } => false,
        }
    }

    pub fn a_param(&self, tol: f64) -> Result<ExtReal> {
        match self {
            YoungSlice::Power { .. } => Ok(ExtReal::ZERO),
            YoungSlice::Hinge { shift } => ExtReal::new(*shift),
            YoungSlice::Indicator { b } => ExtReal::new(*b),
            YoungSlice::Capped { inner, b } if inner.closed_form() => {
                Ok(inner.a_param(tol)?.min(ExtReal::new(*b)?))
            }
            _ => search::threshold(|u| Ok(!self.eval(u)?.is_zero()), tol),
        }
    }

    pub fn b_param(&self, tol: f64) -> Result<ExtReal> {
        match self {
            YoungSlice::Power { .. } | YoungSlice::Hinge { .. } => Ok(ExtReal::INFINITY),
            YoungSlice::Indicator { b } => ExtReal::new(*b),
            YoungSlice::Capped { inner, b } if inner.closed_form() => {
                Ok(inner.b_param(tol)?.min(ExtReal::new(*b)?))
            }
            _ => search::threshold(|u| Ok(self.eval(u)?.is_infinite()), tol),
        }
    }

    pub fn inverse(&self, w: f64, tol: f64) -> Result<ExtReal> {
        check_arg("inverse argument", w)?;
        match self {
            YoungSlice::Power { p, scale } => {
                ExtReal::from_rounded(libm::pow(w / scale, 1.0 / p))
            }
            YoungSlice::Hinge { shift } => ExtReal::new(w + shift),
            YoungSlice::Indicator { b } => ExtReal::new(*b),
            YoungSlice::Capped { inner, b } if inner.closed_form() => {
                Ok(inner.inverse(w, tol)?.min(ExtReal::new(*b)?))
            }
            _ => search::threshold_below(|v| Ok(self.eval(v)?.value() > w), tol),
        }
    }

    /// Samples the Young-function invariants on a grid and reports the first
    /// violation found.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let zero = self.eval(0.0)?;
        if !zero.is_zero() {
            return Err(Error::InvalidFunction(format!("value {zero} at u = 0")));
        }
        let b = self.b_param(tol)?;
        let mut grid: Vec<f64> = (0..=120).map(|k| libm::pow(10.0, -6.0 + 0.1 * k as f64)).collect();
        grid.push(0.0);
        if b.is_finite() && b.value() > 0.0 {
            let bv = b.value();
            for k in 1..=12 {
                grid.push(bv * (1.0 - libm::pow(10.0, -(k as f64))));
                grid.push(bv * k as f64 / 13.0);
            }
            grid.push(bv);
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let vals: Vec<ExtReal> = grid.iter().map(|&u| self.eval(u)).collect::<Result<_>>()?;
        for i in 1..grid.len() {
            if vals[i] < vals[i - 1] {
                return Err(Error::InvalidFunction(format!(
                    "decreasing between u = {} and u = {}",
                    grid[i - 1],
                    grid[i]
                )));
            }
        }
        // convexity on the finite part
        let finite: Vec<(f64, f64)> = grid
            .iter()
            .zip(&vals)
            .filter(|(_, v)| v.is_finite())
            .map(|(&u, v)| (u, v.value()))
            .collect();
        for w in finite.windows(3) {
            let ((x0, y0), (x1, y1), (x2, y2)) = (w[0], w[1], w[2]);
            let chord = y0 + (x1 - x0) / (x2 - x0) * (y2 - y0);
            if y1 > chord + tol.max(EPS_CONV) * y2.abs().max(1.0) {
                return Err(Error::InvalidFunction(format!("not convex near u = {x1}")));
            }
        }
        // unbounded: either infinite somewhere or still increasing at the far end
        let last = vals[vals.len() - 1];
        if last.is_finite() {
            let far = self.eval(1e12)?;
            let mid = self.eval(1e9)?;
            if !(far > mid) {
                return Err(Error::InvalidFunction("does not tend to infinity".into()));
            }
        }
        Ok(())
    }
}

/// Family of a Musielak–Orlicz function, with parameters that may depend on `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `u^{p(t)}`, or `u^{p(t)} / p(t)` when normalized.
    Nakano { p: Expr, normalized: bool },
    /// `scale * u^p` with constant parameters.
    Power { p: f64, scale: f64 },
    /// `max(u - shift(t), 0)`.
    Hinge { shift: Expr },
    /// `weight(t) * u`.
    Linear { weight: Expr },
    /// `0` on `[0, b(t)]`, `+inf` beyond.
    Indicator { b: Expr },
    /// `inner(t, u)` on `[0, b(t)]`, `+inf` beyond.
    Capped { inner: Box<Family>, b: Expr },
    /// Piecewise-linear slices loaded from a table.
    Tabulated { table: Arc<Tabulated>, source: alloc::string::String },
    /// An arbitrary expression in `t` and `u`.
    Custom(Arc<Expr>),
}

/// A Musielak–Orlicz function built from one of the supported families.
#[derive(Clone, Debug, PartialEq)]
pub struct MOFunction {
    family: Family,
    root_tol: f64,
}

impl MOFunction {
    pub fn new(family: Family) -> Self {
        MOFunction { family, root_tol: EPS_ROOT }
    }

    pub fn with_root_tol(mut self, tol: f64) -> Self {
        self.root_tol = tol;
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn nakano(p: impl Into<Expr>, normalized: bool) -> Self {
        MOFunction::new(Family::Nakano { p: p.into(), normalized })
    }

    pub fn power(p: f64, scale: f64) -> Self {
        MOFunction::new(Family::Power { p, scale })
    }

    pub fn hinge(shift: impl Into<Expr>) -> Self {
        MOFunction::new(Family::Hinge { shift: shift.into() })
    }

    pub fn linear(weight: impl Into<Expr>) -> Self {
        MOFunction::new(Family::Linear { weight: weight.into() })
    }

    pub fn indicator(b: impl Into<Expr>) -> Self {
        MOFunction::new(Family::Indicator { b: b.into() })
    }

    pub fn capped(inner: MOFunction, b: impl Into<Expr>) -> Self {
        MOFunction::new(Family::Capped { inner: Box::new(inner.family), b: b.into() })
    }

    pub fn custom(expr: Expr) -> Self {
        MOFunction::new(Family::Custom(Arc::new(expr)))
    }

    pub fn tabulated(table: Tabulated, source: &str) -> Self {
        MOFunction::new(Family::Tabulated { table: Arc::new(table), source: source.to_string() })
    }

    /// The Young function at point `at`.
    pub fn slice_at(&self, at: &Point) -> Result<YoungSlice> {
        slice_of(&self.family, at.t)
    }

    /// Checks the Young invariants at every point of `space`; custom and
    /// tabulated functions are sampled, parametric families checked through
    /// their parameters.
    pub fn validate(&self, space: &MeasureSpace) -> Result<()> {
        for pt in space.points() {
            let slice = self.slice_at(&pt)?;
            if !slice.closed_form() {
                slice.check_invariants(self.root_tol).map_err(|e| match e {
                    Error::InvalidFunction(msg) => {
                        Error::InvalidFunction(format!("at t = {}: {msg}", pt.t))
                    }
                    e => e,
                })?;
            }
        }
        Ok(())
    }
}

fn param(e: &Expr, t: f64, name: &str) -> Result<f64> {
    let v = e.eval(t, 0.0);
    if v.is_nan() {
        return Err(Error::InvalidFunction(format!("{name} is NaN at t = {t}")));
    }
    Ok(v)
}

fn slice_of(family: &Family, t: f64) -> Result<YoungSlice> {
    Ok(match family {
        Family::Nakano { p, normalized } => {
            let p = param(p, t, "exponent p")?;
            if !(p >= 1.0) || p.is_infinite() {
                return Err(Error::InvalidFunction(format!("exponent p = {p} at t = {t}")));
            }
            YoungSlice::Power { p, scale: if *normalized { 1.0 / p } else { 1.0 } }
        }
        Family::Power { p, scale } => {
            if !(*p >= 1.0) || p.is_infinite() || !(*scale > 0.0) || scale.is_infinite() {
                return Err(Error::InvalidFunction(format!("power(p = {p}, scale = {scale})")));
            }
            YoungSlice::Power { p: *p, scale: *scale }
        }
        Family::Hinge { shift } => {
            let s = param(shift, t, "shift")?;
            if !(s >= 0.0) || s.is_infinite() {
                return Err(Error::InvalidFunction(format!("hinge shift {s} at t = {t}")));
            }
            YoungSlice::Hinge { shift: s }
        }
        Family::Linear { weight } => {
            let w = param(weight, t, "weight")?;
            if !(w > 0.0) || w.is_infinite() {
                return Err(Error::InvalidFunction(format!("linear weight {w} at t = {t}")));
            }
            YoungSlice::Power { p: 1.0, scale: w }
        }
        Family::Indicator { b } => {
            let b = param(b, t, "b")?;
            if !(b >= 0.0) || b.is_infinite() {
                return Err(Error::InvalidFunction(format!("indicator threshold {b} at t = {t}")));
            }
            YoungSlice::Indicator { b }
        }
        Family::Capped { inner, b } => {
            let b = param(b, t, "b")?;
            if !(b >= 0.0) {
                return Err(Error::InvalidFunction(format!("cap {b} at t = {t}")));
            }
            let inner = slice_of(inner, t)?;
            if b.is_infinite() {
                inner
            } else {
                YoungSlice::Capped { inner: Box::new(inner), b }
            }
        }
        Family::Tabulated { table, .. } => YoungSlice::Table(table.clone(), t),
        Family::Custom(e) => YoungSlice::Custom { expr: e.clone(), t },
    })
}

impl MusielakOrlicz for MOFunction {
    fn eval(&self, at: &Point, u: f64) -> Result<ExtReal> {
        check_arg("argument u", u)?;
        self.slice_at(at)?.eval(u)
    }

    fn root_tol(&self) -> f64 {
        self.root_tol
    }

    fn a_param(&self, at: &Point) -> Result<ExtReal> {
        self.slice_at(at)?.a_param(self.root_tol)
    }

    fn b_param(&self, at: &Point) -> Result<ExtReal> {
        self.slice_at(at)?.b_param(self.root_tol)
    }

    fn inverse(&self, at: &Point, w: f64) -> Result<ExtReal> {
        self.slice_at(at)?.inverse(w, self.root_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(t: f64) -> Point {
        Point::cell(t)
    }

    #[test]
    fn hinge_values_and_parameters() {
        let h = MOFunction::hinge(Expr::T);
        assert_eq!(h.eval(&at(0.25), 0.25).unwrap(), ExtReal::ZERO);
        assert_eq!(h.eval(&at(0.25), 1.0).unwrap().value(), 0.75);
        assert_eq!(h.a_param(&at(0.25)).unwrap().value(), 0.25);
        assert!(h.b_param(&at(0.4)).unwrap().is_infinite());
        assert_eq!(h.inverse(&at(0.25), 2.0).unwrap().value(), 2.25);
    }

    #[test]
    fn hinge_a_param_matches_bisection() {
        let h = MOFunction::hinge(Expr::T);
        let closed = h.a_param(&at(0.25)).unwrap().value();
        let searched = search::threshold(|u| Ok(!h.eval(&at(0.25), u)?.is_zero()), 1e-12)
            .unwrap()
            .value();
        assert!((closed - searched).abs() < 1e-11);
    }

    #[test]
    fn zero_at_zero_for_every_family() {
        let fams = [
            MOFunction::hinge(Expr::T),
            MOFunction::power(3.0, 2.0),
            MOFunction::nakano(Expr::parse("2 + t").unwrap(), true),
            MOFunction::linear(1.0),
            MOFunction::indicator(1.0),
            MOFunction::custom(Expr::parse("u * u + t * u").unwrap()),
        ];
        for f in &fams {
            assert_eq!(f.eval(&at(0.3), 0.0).unwrap(), ExtReal::ZERO);
        }
    }

    #[test]
    fn normalized_nakano() {
        let f = MOFunction::nakano(2.0, true);
        assert_eq!(f.eval(&at(0.0), 3.0).unwrap().value(), 4.5);
        assert!(f.b_param(&at(0.7)).unwrap().is_infinite());
    }

    #[test]
    fn power_inverse_and_a() {
        let f = MOFunction::power(2.0, 1.0);
        assert_eq!(f.inverse(&at(0.0), 4.0).unwrap().value(), 2.0);
        assert_eq!(f.a_param(&at(0.0)).unwrap(), ExtReal::ZERO);
        assert_eq!(MOFunction::linear(1.0).a_param(&at(0.0)).unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn indicator_slice() {
        let f = MOFunction::indicator(1.0);
        assert_eq!(f.b_param(&at(0.1)).unwrap().value(), 1.0);
        assert_eq!(f.inverse(&at(0.1), 7.0).unwrap().value(), 1.0);
        assert_eq!(f.eval(&at(0.1), 1.0).unwrap(), ExtReal::ZERO);
        assert!(f.eval(&at(0.1), 1.0 + 1e-12).unwrap().is_infinite());
    }

    #[test]
    fn negative_argument_is_domain_error() {
        let f = MOFunction::linear(1.0);
        assert!(matches!(f.eval(&at(0.0), -1.0), Err(Error::Domain { .. })));
        assert!(f.inverse(&at(0.0), -1.0).is_err());
    }

    #[test]
    fn capped_family() {
        let f = MOFunction::capped(MOFunction::power(2.0, 1.0), Expr::parse("1 + t").unwrap());
        let p = at(0.5);
        assert_eq!(f.b_param(&p).unwrap().value(), 1.5);
        assert_eq!(f.eval(&p, 1.5).unwrap().value(), 2.25);
        assert!(f.eval(&p, 1.6).unwrap().is_infinite());
        assert_eq!(f.inverse(&p, 100.0).unwrap().value(), 1.5);
        assert_eq!(f.inverse(&p, 1.0).unwrap().value(), 1.0);
    }

    #[test]
    fn custom_falls_back_to_search() {
        let f = MOFunction::custom(Expr::parse("max(u - t, 0)").unwrap());
        let p = at(0.25);
        assert!((f.a_param(&p).unwrap().value() - 0.25).abs() < 1e-10);
        assert!(f.b_param(&p).unwrap().is_infinite());
        assert!((f.inverse(&p, 2.0).unwrap().value() - 2.25).abs() < 1e-9);
    }

    #[test]
    fn custom_with_finite_threshold() {
        // u^2 below 2, +inf above
        let f = MOFunction::custom(Expr::parse("u * u + max(u - 2, 0) * inf").unwrap());
        let p = at(0.0);
        assert!((f.b_param(&p).unwrap().value() - 2.0).abs() < 1e-9);
        assert!((f.inverse(&p, 100.0).unwrap().value() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn table_interpolates_and_searches() {
        let tab = Tabulated::from_records(&[
            (0.0, 1.0, 1.0),
            (0.0, 2.0, 3.0),
            (1.0, 0.5, 0.0),
            (1.0, 1.0, 1.0),
            (1.0, 2.0, f64::INFINITY),
        ])
        .unwrap();
        let f = MOFunction::tabulated(tab, "inline");
        assert_eq!(f.eval(&at(0.0), 1.5).unwrap().value(), 2.0);
        assert_eq!(f.eval(&at(0.0), 3.0).unwrap().value(), 5.0);
        assert!((f.inverse(&at(0.0), 2.0).unwrap().value() - 1.5).abs() < 1e-9);
        // second row: zero up to 0.5, finite up to 1, infinite beyond
        let q = at(0.9);
        assert!((f.a_param(&q).unwrap().value() - 0.5).abs() < 1e-9);
        assert!((f.b_param(&q).unwrap().value() - 1.0).abs() < 1e-9);
        assert!(f.eval(&q, 1.0 + 1e-9).unwrap().is_infinite());
    }

    #[test]
    fn invariant_checker_rejects_bad_slices() {
        let concave = YoungSlice::Custom { expr: Arc::new(Expr::parse("pow(u, 0.5)").unwrap()), t: 0.0 };
        assert!(concave.check_invariants(EPS_ROOT).is_err());
        let bounded = YoungSlice::Custom { expr: Arc::new(Expr::parse("min(u, 1)").unwrap()), t: 0.0 };
        assert!(bounded.check_invariants(EPS_ROOT).is_err());
        let shifted = YoungSlice::Custom { expr: Arc::new(Expr::parse("u + 1").unwrap()), t: 0.0 };
        assert!(shifted.check_invariants(EPS_ROOT).is_err());
        let good = YoungSlice::Custom { expr: Arc::new(Expr::parse("u * u + max(u - 2, 0) * inf").unwrap()), t: 0.0 };
        good.check_invariants(EPS_ROOT).unwrap();
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(MOFunction::nakano(0.5, false).slice_at(&at(0.0)).is_err());
        assert!(MOFunction::linear(0.0).slice_at(&at(0.0)).is_err());
        assert!(MOFunction::power(2.0, -1.0).slice_at(&at(0.0)).is_err());
    }
}
