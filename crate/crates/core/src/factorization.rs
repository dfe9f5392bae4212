//! Inverse-product comparisons and constructive factorization.
//!
//! For Musielak–Orlicz functions `phi`, `phi_0`, `phi_1` write
//! `r(t, u) = phi^{-1}(t, u) / (phi_1^{-1}(t, u) phi_0^{-1}(t, u))`.
//! The relation `phi_1^{-1} phi_0^{-1} < phi^{-1}` holds when `r` is bounded
//! below by a positive constant, `>` when it is bounded above, and `~` when
//! both hold. On a finite grid these can only be refuted, so verdicts read
//! "holds on grid".

use alloc::format;
use alloc::vec::Vec;

use crate::conjugate::ConjugateSpec;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::measure::{Label, MeasureSpace, PointSet, SimpleFunction};
use crate::rng;
use crate::spaces::{inclusion_constant_sup, luxemburg_norm, modular, product_quasinorm_upper, random_simple};
use crate::young::{MOFunction, MusielakOrlicz};

/// `u = 0` followed by 121 log-spaced points from `1e-6` to `1e6`.
pub fn default_u_grid() -> Vec<f64> {
    let mut g = Vec::with_capacity(122);
    g.push(0.0);
    for k in 0..121 {
        g.push(libm::pow(10.0, -6.0 + 0.1 * k as f64));
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    HoldsOnGrid,
    Fails,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::HoldsOnGrid
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::HoldsOnGrid => "holds on grid",
            Verdict::Fails => "fails",
        }
    }
}

/// A grid point together with the two sides of the ratio there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    pub index: usize,
    pub t: f64,
    pub u: f64,
    /// `phi^{-1}(t, u)`
    pub num: ExtReal,
    /// `phi_1^{-1}(t, u) phi_0^{-1}(t, u)`
    pub den: ExtReal,
}

impl Witness {
    pub fn ratio(&self) -> ExtReal {
        ratio(self.num, self.den).unwrap_or(ExtReal::ZERO)
    }

    /// Recomputes both sides at the witness point.
    pub fn replay<F, F0, F1>(
        &self,
        phi: &F,
        phi0: &F0,
        phi1: &F1,
        space: &MeasureSpace,
    ) -> Result<(ExtReal, Option<ExtReal>)>
    where
        F: MusielakOrlicz + ?Sized,
        F0: MusielakOrlicz + ?Sized,
        F1: MusielakOrlicz + ?Sized,
    {
        let p = space.point(self.index);
        Ok((phi.inverse(&p, self.u)?, den(phi0, phi1, &p, self.u)?))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    /// Largest `C` with `C phi_1^{-1} phi_0^{-1} <= phi^{-1}` on the grid.
    pub best_c_lower: f64,
    /// Smallest `C` with `C phi_1^{-1} phi_0^{-1} >= phi^{-1}`; `inf` if none.
    pub best_c_upper: ExtReal,
    /// Verdict for `phi_1^{-1} phi_0^{-1} < phi^{-1}`.
    pub prec: Verdict,
    /// Verdict for `phi_1^{-1} phi_0^{-1} > phi^{-1}`.
    pub succ: Verdict,
    pub approx: Verdict,
    /// Where the smallest ratio was seen.
    pub lower_witness: Option<Witness>,
    /// Where the largest ratio was seen.
    pub upper_witness: Option<Witness>,
    /// Grid points with an indeterminate ratio (`0/0` or `inf/inf`).
    pub skipped: usize,
    pub evaluated: usize,
}

/// `phi_1^{-1}(t, u) phi_0^{-1}(t, u)`; `None` for `0 * inf`, which is
/// indeterminate here unlike in modular sums.
fn den<F0, F1>(phi0: &F0, phi1: &F1, p: &crate::measure::Point, u: f64) -> Result<Option<ExtReal>>
where
    F0: MusielakOrlicz + ?Sized,
    F1: MusielakOrlicz + ?Sized,
{
    let (a, b) = (phi1.inverse(p, u)?, phi0.inverse(p, u)?);
    if (a.is_zero() && b.is_infinite()) || (a.is_infinite() && b.is_zero()) {
        return Ok(None);
    }
    Ok(Some(a * b))
}

/// `num / den` in `[0, inf]`; `None` when indeterminate.
fn ratio(num: ExtReal, den: ExtReal) -> Option<ExtReal> {
    match (num.is_zero(), den.is_zero(), num.is_infinite(), den.is_infinite()) {
        (true, true, _, _) | (_, _, true, true) => None,
        (_, true, _, _) | (_, _, true, _) => Some(ExtReal::INFINITY),
        (_, _, _, true) => Some(ExtReal::ZERO),
        _ => ExtReal::new(num.value() / den.value()).ok(),
    }
}

/// Scans every point of `space` against every `u` of `u_grid` and reports
/// the extreme ratios `phi^{-1} / (phi_1^{-1} phi_0^{-1})`.
pub fn compare_inverses<F, F0, F1>(
    phi: &F,
    phi0: &F0,
    phi1: &F1,
    space: &MeasureSpace,
    u_grid: &[f64],
) -> Result<ComparisonReport>
where
    F: MusielakOrlicz + ?Sized,
    F0: MusielakOrlicz + ?Sized,
    F1: MusielakOrlicz + ?Sized,
{
    let mut lo: Option<(ExtReal, Witness)> = None;
    let mut hi: Option<(ExtReal, Witness)> = None;
    let mut skipped = 0;
    let mut evaluated = 0;
    for i in 0..space.len() {
        let p = space.point(i);
        for &u in u_grid {
            let num = phi.inverse(&p, u)?;
            let Some(d) = den(phi0, phi1, &p, u)? else {
                skipped += 1;
                continue;
            };
            let Some(r) = ratio(num, d) else {
                skipped += 1;
                continue;
            };
            evaluated += 1;
            let w = Witness { index: i, t: p.t, u, num, den: d };
            if lo.as_ref().is_none_or(|(m, _)| r < *m) {
                lo = Some((r, w));
            }
            if hi.as_ref().is_none_or(|(m, _)| r > *m) {
                hi = Some((r, w));
            }
        }
    }
    let (Some((rmin, wl)), Some((rmax, wh))) = (lo, hi) else {
        return Err(Error::precondition("no grid point with a determinate ratio"));
    };
    let prec = if rmin.is_zero() { Verdict::Fails } else { Verdict::HoldsOnGrid };
    let succ = if rmax.is_infinite() { Verdict::Fails } else { Verdict::HoldsOnGrid };
    let approx = if prec.holds() && succ.holds() { Verdict::HoldsOnGrid } else { Verdict::Fails };
    Ok(ComparisonReport {
        best_c_lower: rmin.value(),
        best_c_upper: rmax,
        prec,
        succ,
        approx,
        lower_witness: Some(wl),
        upper_witness: Some(wh),
        skipped,
        evaluated,
    })
}

/// A factorization `z = z0 z1` built from inverse functions.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorPair {
    pub z0: SimpleFunction,
    pub z1: SimpleFunction,
    /// Constant with `D phi_1^{-1} phi_0^{-1} >= phi^{-1}` on the attained values.
    pub d: f64,
    /// Factor taking `z` to the normalized `z_hat` with `||z_hat||_phi = 2 / (3c)`.
    pub scale: f64,
    /// Inclusion constant `c` used for the normalization.
    pub c: f64,
    /// `I_phi(z_hat)`.
    pub modular_z: ExtReal,
    /// `I_{phi_i}(z_hat_i / sqrt D)` where `z_hat_0 = scale z0`, `z_hat_1 = z1`.
    pub modular_parts: [ExtReal; 2],
    /// Whether `I_{phi_i}(z_hat_i / sqrt D) <= I_phi(z_hat)` holds for `i = 0, 1`.
    pub bound_ok: [bool; 2],
    /// Upper bounds on `||z0||_{phi_0}` and `||z1||_{phi_1}` implied by the
    /// modular bounds: `sqrt D / scale` and `sqrt D`.
    pub norm_bounds: [f64; 2],
    /// Points where one inverse vanished and the split fell back to
    /// `z_hat_i = phi_i^{-1}(t, y)` for the other factor.
    pub fallback_points: Vec<usize>,
}

impl FactorPair {
    pub fn bounds_hold(&self) -> bool {
        self.bound_ok[0] && self.bound_ok[1]
    }
}

/// Relative slack in the modular bound check.
pub const MODULAR_SLACK: f64 = 1e-12;

/// Splits `z >= 0` as `z = z0 z1` with
/// `z_hat_i = phi_i^{-1}(t, y) sqrt(z_hat / (phi_0^{-1}(t, y) phi_1^{-1}(t, y)))`,
/// `y = phi(t, z_hat)`, after normalizing `z` to `||z_hat||_phi = 2 / (3c)`.
///
/// When `d` is `None` the constant is the largest of
/// `phi^{-1}(y) / (phi_0^{-1}(y) phi_1^{-1}(y))` and `z_hat / (phi_0^{-1}(y) phi_1^{-1}(y))`
/// over the support of `z`.
pub fn factor_split<F, F0, F1>(
    phi: &F,
    phi0: &F0,
    phi1: &F1,
    space: &MeasureSpace,
    z: &SimpleFunction,
    d: Option<f64>,
) -> Result<FactorPair>
where
    F: MusielakOrlicz + ?Sized,
    F0: MusielakOrlicz + ?Sized,
    F1: MusielakOrlicz + ?Sized,
{
    z.check(space)?;
    if let Some(&v) = z.values().iter().find(|v| **v < 0.0) {
        return Err(Error::Domain { what: "split argument z", value: v });
    }
    if let Some(d) = d {
        if !(d > 0.0) || d.is_infinite() {
            return Err(Error::Domain { what: "split constant D", value: d });
        }
    }
    let c = inclusion_constant_sup(phi, space, &PointSet::full(space))?;
    if z.is_zero() {
        let zero = SimpleFunction::zero(space);
        let d = d.unwrap_or(1.0);
        return Ok(FactorPair {
            z0: zero.clone(),
            z1: zero,
            d,
            scale: 1.0,
            c,
            modular_z: ExtReal::ZERO,
            modular_parts: [ExtReal::ZERO; 2],
            bound_ok: [true; 2],
            norm_bounds: [0.0; 2],
            fallback_points: Vec::new(),
        });
    }
    let norm = luxemburg_norm(phi, space, z)?.value;
    if norm.is_infinite() {
        return Err(Error::precondition("z has infinite norm"));
    }
    let scale = 2.0 / (3.0 * c) / norm.value();
    let zh = z.scale(scale);
    let n = space.len();
    let mut inv = Vec::with_capacity(n);
    let mut d_auto = 0.0_f64;
    for i in 0..n {
        let v = zh.values()[i];
        if v == 0.0 {
            inv.push(None);
            continue;
        }
        let p = space.point(i);
        let y = phi.eval(&p, v)?;
        if y.is_infinite() {
            return Err(Error::precondition(format!("phi is infinite at the normalized z (t = {})", p.t)));
        }
        let y = y.value();
        let (i0, i1) = (phi0.inverse(&p, y)?, phi1.inverse(&p, y)?);
        let prod = i0 * i1;
        if !prod.is_zero() && prod.is_finite() {
            let num = phi.inverse(&p, y)?.value().max(v);
            d_auto = d_auto.max(num / prod.value());
        }
        inv.push(Some((i0, i1)));
    }
    let d = d.unwrap_or(if d_auto > 0.0 { d_auto } else { 1.0 });
    let mut z0 = alloc::vec![0.0; n];
    let mut z1 = alloc::vec![0.0; n];
    let mut fallback_points = Vec::new();
    for i in 0..n {
        let Some((i0, i1)) = inv[i] else { continue };
        let v = zh.values()[i];
        let (a, b) = (i0.value(), i1.value());
        let (h0, h1) = if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            let root = libm::sqrt(v / (a * b));
            (a * root, b * root)
        } else if a > 0.0 && a.is_finite() && b == 0.0 {
            fallback_points.push(i);
            (a, v / a)
        } else if b > 0.0 && b.is_finite() && a == 0.0 {
            fallback_points.push(i);
            (v / b, b)
        } else {
            return Err(Error::Degenerate { index: i, t: space.point(i).t });
        };
        // report z0 for the caller's z, then fix z1 so the product is exact
        let target = z.values()[i];
        let f0 = h0 / scale;
        let mut f1 = h1;
        for _ in 0..8 {
            let prod = f0 * f1;
            if prod == target {
                break;
            }
            f1 = if prod < target { f1.next_up() } else { f1.next_down() };
        }
        z0[i] = f0;
        z1[i] = f1;
    }
    let z0 = SimpleFunction::new(space, z0)?;
    let z1 = SimpleFunction::new(space, z1)?;
    let sd = libm::sqrt(d);
    let modular_z = modular(phi, space, &zh)?.value;
    let m0 = modular(phi0, space, &z0.scale(scale / sd))?.value;
    let m1 = modular(phi1, space, &z1.scale(1.0 / sd))?.value;
    let ok = |m: ExtReal| m.is_finite() && m.value() <= modular_z.value() * (1.0 + MODULAR_SLACK) + f64::MIN_POSITIVE;
    Ok(FactorPair {
        z0,
        z1,
        d,
        scale,
        c,
        modular_z,
        modular_parts: [m0, m1],
        bound_ok: [ok(m0), ok(m1)],
        norm_bounds: [sd / scale, sd],
        fallback_points,
    })
}

/// Worst case seen in one direction of [`factorization_verify`].
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionReport {
    pub samples: usize,
    pub worst_ratio: f64,
    /// Sample index of the worst ratio.
    pub worst_sample: Option<usize>,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport {
    /// `||x y||_phi <= 2 ||x||_{phi (-) phi_1} ||y||_{phi_1}`.
    pub inclusion: DirectionReport,
    /// `||z||_{L^{phi (-) phi_1} (.) L^{phi_1}} <= K ||z||_phi`.
    pub product: DirectionReport,
    /// Samples where the constructive split was unavailable.
    pub split_failures: usize,
    /// Samples whose split needed the single-inverse fallback.
    pub split_fallbacks: usize,
    pub seed: u64,
    pub passed: bool,
}

/// Hölder-type constant checked by the inclusion direction.
pub const HOLDER_CONSTANT: f64 = 2.0;
/// Largest accepted `K` in the product direction.
pub const K_MAX: f64 = 4.0;

/// Samples both directions of `L^{phi (-) phi_1} (.) L^{phi_1} = L^phi`.
pub fn factorization_verify(
    phi1: &MOFunction,
    phi: &MOFunction,
    space: &MeasureSpace,
    n_samples: usize,
    seed: u64,
) -> Result<FactorizationReport> {
    let conj = ConjugateSpec::new(phi.clone(), phi1.clone(), space)?;
    let support = conj.conjugate_support(space)?;
    let cls = conj.classification().clone();

    let mut r = rng::stream(seed, rng::streams::FACTOR_INCLUSION);
    let mut inc = DirectionReport { samples: 0, worst_ratio: 0.0, worst_sample: None, limit: HOLDER_CONSTANT, passed: true };
    for k in 0..n_samples {
        let x = random_simple(&mut r, space, 1e-2, 1e1, 0.2).restrict(space, &support)?;
        let y = random_bounded(&mut r, space, &cls)?;
        let nx = luxemburg_norm(&conj, space, &x)?.value;
        let ny = luxemburg_norm(phi1, space, &y)?.value;
        if nx.is_zero() || ny.is_zero() || nx.is_infinite() || ny.is_infinite() {
            continue;
        }
        inc.samples += 1;
        let nxy = luxemburg_norm(phi, space, &x.mul(&y)?)?.value.value();
        let ratio = nxy / (nx.value() * ny.value());
        if ratio > inc.worst_ratio {
            inc.worst_ratio = ratio;
            inc.worst_sample = Some(k);
        }
    }
    inc.passed = inc.worst_ratio <= HOLDER_CONSTANT * (1.0 + 1e-9);

    let mut r = rng::stream(seed, rng::streams::FACTOR_PRODUCT);
    let mut prod = DirectionReport { samples: 0, worst_ratio: 0.0, worst_sample: None, limit: K_MAX, passed: true };
    let mut split_failures = 0;
    let mut split_fallbacks = 0;
    for k in 0..n_samples {
        let z = random_bounded(&mut r, space, &cls)?;
        let nz = luxemburg_norm(phi, space, &z)?.value;
        if nz.is_zero() || nz.is_infinite() {
            continue;
        }
        let radius = 0.05 + 0.95 * rand::Rng::gen::<f64>(&mut r);
        let z = z.scale(radius / nz.value());
        let nz = luxemburg_norm(phi, space, &z)?.value.value();
        let up = product_quasinorm_upper(phi, &conj, phi1, space, &z, None)?;
        match &up.split {
            None => split_failures += 1,
            Some(pair) if !pair.fallback_points.is_empty() => split_fallbacks += 1,
            _ => {}
        }
        prod.samples += 1;
        let ratio = up.value / nz;
        if ratio > prod.worst_ratio {
            prod.worst_ratio = ratio;
            prod.worst_sample = Some(k);
        }
    }
    prod.passed = prod.worst_ratio <= K_MAX;
    let passed = inc.passed && prod.passed && inc.samples > 0 && prod.samples > 0;
    Ok(FactorizationReport { inclusion: inc, product: prod, split_failures, split_fallbacks, seed, passed })
}

/// Random nonnegative function staying below `b_{phi_1} / 2` where that is finite.
fn random_bounded<R: rand::Rng + ?Sized>(
    r: &mut R,
    space: &MeasureSpace,
    cls: &crate::measure::DomainClassification,
) -> Result<SimpleFunction> {
    let v = random_simple(r, space, 1e-2, 1e1, 0.2);
    let capped = v
        .values()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let b1 = cls.b_phi1(i);
            if b1.is_finite() && cls.label(i) != Label::ZeroZero {
                x.min(0.5 * b1.value())
            } else {
                x
            }
        })
        .collect();
    SimpleFunction::new(space, capped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    #[test]
    fn square_roots_are_equivalent() {
        let s = MeasureSpace::uniform(0.0, 1.0, 4).unwrap();
        let sq = MOFunction::power(2.0, 1.0);
        let r = compare_inverses(&MOFunction::linear(1.0), &sq, &sq, &s, &default_u_grid()).unwrap();
        assert!(r.approx.holds());
        assert!((r.best_c_lower - 1.0).abs() < 1e-12);
        assert!((r.best_c_upper.value() - 1.0).abs() < 1e-12);
        assert_eq!(r.skipped, 4);
    }

    #[test]
    fn hinge_example_fails_upper_relation() {
        let s = MeasureSpace::uniform(0.0, 0.5, 8).unwrap();
        let phi = MOFunction::hinge(Expr::T);
        let r = compare_inverses(&phi, &MOFunction::indicator(1.0), &MOFunction::linear(1.0), &s, &default_u_grid())
            .unwrap();
        assert_eq!(r.succ, Verdict::Fails);
        assert!(r.prec.holds());
        assert!(r.best_c_lower >= 1.0 - 1e-9);
        let w = r.upper_witness.unwrap();
        assert!(w.t > 0.0 && w.u <= 1e-3);
        let (num, den) = w.replay(&phi, &MOFunction::indicator(1.0), &MOFunction::linear(1.0), &s).unwrap();
        assert!(den.unwrap().is_zero() && !num.is_zero());
    }

    #[test]
    fn symmetric_split() {
        let s = MeasureSpace::uniform(0.0, 1.0, 1).unwrap();
        let sq = MOFunction::power(2.0, 1.0);
        let z = SimpleFunction::constant(&s, 0.25).unwrap();
        let pair = factor_split(&MOFunction::linear(1.0), &sq, &sq, &s, &z, Some(1.0)).unwrap();
        // normalized z_hat = 2/3, so z0 = sqrt(2/3) / scale and z1 = sqrt(2/3)
        assert!((pair.z1.values()[0] - libm::sqrt(2.0 / 3.0)).abs() < 1e-9);
        assert_eq!(pair.z0.values()[0] * pair.z1.values()[0], 0.25);
        assert!(pair.bounds_hold());
        let zero = factor_split(&MOFunction::linear(1.0), &sq, &sq, &s, &SimpleFunction::zero(&s), None).unwrap();
        assert!(zero.z0.is_zero() && zero.z1.is_zero());
    }

    #[test]
    fn both_inverses_vanishing_is_degenerate() {
        let s = MeasureSpace::uniform(0.0, 1.0, 1).unwrap();
        let z = SimpleFunction::constant(&s, 0.1).unwrap();
        // y = 0 at the normalized z and both factors have a = 0
        let phi = MOFunction::hinge(10.0);
        let r = factor_split(&phi, &MOFunction::linear(1.0), &MOFunction::linear(1.0), &s, &z, None);
        assert!(matches!(r, Err(Error::Degenerate { index: 0, .. })), "{r:?}");
    }

    #[test]
    fn nakano_factorization_passes() {
        let s = MeasureSpace::uniform(0.0, 1.0, 8).unwrap();
        let rep = factorization_verify(&MOFunction::nakano(2.0, true), &MOFunction::nakano(1.0, true), &s, 10, 3).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn supp_violation_is_precondition_error() {
        let s = MeasureSpace::uniform(0.0, 1.0, 2).unwrap();
        let r = factorization_verify(&MOFunction::indicator(0.0), &MOFunction::linear(1.0), &s, 2, 0);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
