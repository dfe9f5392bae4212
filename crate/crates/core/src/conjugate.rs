//! The generalized Young conjugate
//!
//! ```text
//! (phi (-) phi_1)(t, u) = sup { phi(t, s u) - phi_1(t, s) : s in S(t) }
//! ```
//!
//! where the admissible range `S(t)` is `[0, b_{phi_1}(t))` on the continuous
//! part and `[0, min(1 / phi^{-1}(t, 1 / mu{t}), b_{phi_1}(t) / 2)]` at an atom.
//! The truncated conjugate `(-)_a` replaces the continuous range by `[0, a]`
//! where `b_{phi_1} = inf` and by `[0, a / (a + 1) b_{phi_1}]` elsewhere.
//!
//! Suprema are computed by a coarse grid (half linear, half logarithmic) with
//! golden-section refinement around the best grid points. Untruncated
//! suprema over `[0, inf)` are taken over a ladder of growing segments until
//! the running maximum stabilizes; a ladder that reaches `1e300` without
//! stabilizing reports `inf`. Pairs of power and hinge slices use closed
//! forms instead.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::measure::{classify, DomainClassification, Label, MeasureSpace, Point, PointSet};
use crate::search;
use crate::young::{check_arg, MOFunction, MusielakOrlicz, YoungSlice};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupSolverConfig {
    /// Grid points per sup evaluation, at least 8.
    pub coarse_grid: usize,
    /// Golden-section iterations around each retained grid point.
    pub refine_rounds: usize,
    /// Relative stabilization tolerance of the ladder over `[0, inf)`.
    pub rel_tol: f64,
    /// Relative gap kept below the right end of an open range.
    pub endpoint_margin: f64,
    /// Grid points retained for refinement.
    pub top_k: usize,
    /// Use closed forms for power and hinge pairs.
    pub fast_paths: bool,
    /// Relative tolerance of the equality `phi(t, u v) = phi_1(t, v) + level`
    /// used by the maximizer, measured against the larger side.
    pub edge_tol: f64,
}

impl Default for SupSolverConfig {
    fn default() -> Self {
        SupSolverConfig {
            coarse_grid: 512,
            refine_rounds: 40,
            rel_tol: 1e-9,
            endpoint_margin: 1e-12,
            top_k: 5,
            fast_paths: true,
            edge_tol: 1e-8,
        }
    }
}

impl SupSolverConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if self.coarse_grid < 8
            || self.refine_rounds == 0
            || self.top_k == 0
            || !pos(self.rel_tol)
            || !pos(self.endpoint_margin)
            || self.endpoint_margin >= 1.0
            || !pos(self.edge_tol)
        {
            return Err(Error::precondition(format!("invalid solver configuration {self:?}")));
        }
        Ok(())
    }
}

/// The admissible range `[0, hi]` (closed) or `[0, hi)` (open) of `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SRange {
    pub hi: ExtReal,
    pub closed: bool,
}

/// Outcome of [`ConjugateSpec::maximizer_detail`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Maximizer {
    /// Largest point of the equality set.
    pub x: f64,
    /// The level `(-)_a(t, u)` the equality is solved against.
    pub level: f64,
    /// Right end of the admissible range.
    pub v_max: f64,
}

#[derive(Clone, Debug)]
pub struct ConjugateSpec {
    phi: MOFunction,
    phi1: MOFunction,
    classification: DomainClassification,
    a: ExtReal,
    solver: SupSolverConfig,
}

#[derive(Clone, Copy)]
enum Far {
    Flat,
    Grows,
    Infinite(f64),
}

enum G {
    Inadmissible,
    Inf,
    Val(f64),
}

struct Sup {
    value: ExtReal,
    /// Largest evaluated point attaining `value`.
    arg: f64,
}

impl ConjugateSpec {
    /// The untruncated conjugate of `phi1` with respect to `phi`.
    pub fn new(phi: MOFunction, phi1: MOFunction, space: &MeasureSpace) -> Result<Self> {
        let classification = classify(space, &phi, &phi1)?;
        Ok(ConjugateSpec { phi, phi1, classification, a: ExtReal::INFINITY, solver: SupSolverConfig::default() })
    }

    /// Switches to the truncated conjugate at level `a`; `a = inf` restores
    /// the untruncated one.
    pub fn truncated(mut self, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain { what: "truncation level a", value: a });
        }
        self.a = ExtReal::new(a)?;
        Ok(self)
    }

    pub fn with_solver(mut self, solver: SupSolverConfig) -> Result<Self> {
        solver.validate()?;
        self.solver = solver;
        Ok(self)
    }

    pub fn phi(&self) -> &MOFunction {
        &self.phi
    }

    pub fn phi1(&self) -> &MOFunction {
        &self.phi1
    }

    pub fn classification(&self) -> &DomainClassification {
        &self.classification
    }

    pub fn a(&self) -> ExtReal {
        self.a
    }

    pub fn solver(&self) -> &SupSolverConfig {
        &self.solver
    }

    pub fn is_truncated(&self) -> bool {
        self.a.is_finite()
    }

    /// Label of an arbitrary point, computed from the two thresholds.
    pub fn label_at(&self, p: &Point) -> Result<Label> {
        if p.is_atom() {
            return Ok(Label::Atom);
        }
        let b1 = self.phi1.b_param(p)?;
        if b1.is_zero() {
            return Err(Error::precondition(format!("b of phi_1 vanishes at t = {}", p.t)));
        }
        Ok(Label::from_thresholds(b1, self.phi.b_param(p)?))
    }

    fn atom_range(&self, p: &Point, mass: f64) -> Result<SRange> {
        let inv = self.phi.inverse(p, 1.0 / mass)?;
        let first = if inv.is_zero() {
            ExtReal::INFINITY
        } else if inv.is_infinite() {
            ExtReal::ZERO
        } else {
            ExtReal::new(1.0 / inv.value())?
        };
        let b1 = self.phi1.b_param(p)?;
        let half = if b1.is_infinite() { b1 } else { ExtReal::new(b1.value() / 2.0)? };
        Ok(SRange { hi: first.min(half), closed: true })
    }

    /// Range of `s` over which the supremum at `p` is taken.
    pub fn s_range(&self, p: &Point) -> Result<SRange> {
        if let Some(mass) = p.atom_mass {
            return self.atom_range(p, mass);
        }
        let label = self.label_at(p)?;
        let b1 = self.phi1.b_param(p)?;
        if self.a.is_infinite() {
            return Ok(SRange { hi: b1, closed: false });
        }
        let a = self.a.value();
        let hi = if label.is_inf() { ExtReal::new(a / (a + 1.0) * b1.value())? } else { self.a };
        Ok(SRange { hi, closed: true })
    }

    /// `(phi (-) phi_1)(t, u)`, ignoring any truncation level set on `self`.
    pub fn ominus(&self, p: &Point, u: f64) -> Result<ExtReal> {
        check_arg("argument u", u)?;
        if u == 0.0 {
            return Ok(ExtReal::ZERO);
        }
        let label = self.label_at(p)?;
        if label == Label::ZeroInf {
            return Ok(ExtReal::INFINITY);
        }
        let range = if let Some(mass) = p.atom_mass {
            self.atom_range(p, mass)?
        } else {
            SRange { hi: self.phi1.b_param(p)?, closed: false }
        };
        Ok(self.sup(p, u, range)?.value)
    }

    /// `(phi (-)_a phi_1)(t, u)` for the truncation level set on `self`.
    pub fn ominus_trunc(&self, p: &Point, u: f64) -> Result<ExtReal> {
        if self.a.is_infinite() {
            return Err(Error::precondition("no truncation level set"));
        }
        check_arg("argument u", u)?;
        if u == 0.0 {
            return Ok(ExtReal::ZERO);
        }
        let range = self.s_range(p)?;
        Ok(self.sup(p, u, range)?.value)
    }

    /// `b` of the truncated conjugate on the `InfInf` and `InfZero` parts.
    pub fn b_of_trunc(&self, p: &Point) -> Result<ExtReal> {
        if self.a.is_infinite() {
            return Err(Error::precondition("no truncation level set"));
        }
        match self.label_at(p)? {
            Label::InfInf => {
                let a = self.a.value();
                let b = self.phi.b_param(p)?.value();
                let b1 = self.phi1.b_param(p)?.value();
                ExtReal::new((a + 1.0) * b / (a * b1))
            }
            Label::InfZero => Ok(ExtReal::INFINITY),
            l => Err(Error::precondition(format!("point t = {} is labelled {}", p.t, l.name()))),
        }
    }

    /// Largest `v` in `[0, min(a, a / (a + 1) b_{phi_1})]` with
    /// `phi_1(t, v) + (-)_a(t, u) = phi(t, u v)`.
    pub fn maximizer(&self, p: &Point, u: f64) -> Result<f64> {
        Ok(self.maximizer_detail(p, u)?.x)
    }

    pub fn maximizer_detail(&self, p: &Point, u: f64) -> Result<Maximizer> {
        if !(self.a.value() > 1.0) || self.a.is_infinite() {
            return Err(Error::precondition("the maximizer needs a finite truncation level a > 1"));
        }
        if !(u > 0.0) || u.is_infinite() {
            return Err(Error::Domain { what: "maximizer argument u", value: u });
        }
        let label = self.label_at(p)?;
        if label == Label::Atom || label == Label::InfZero {
            return Err(Error::precondition(format!(
                "maximizer is defined off atoms and off the InfZero part (t = {})",
                p.t
            )));
        }
        if self.ominus_trunc(p, 1.5 * u)?.is_infinite() {
            return Err(Error::precondition(format!(
                "truncated conjugate is infinite at t = {}, 3u/2 = {}",
                p.t,
                1.5 * u
            )));
        }
        self.equality_edge(p, u)
    }

    /// Right edge of the set where the truncated objective is within the
    /// equality band of its supremum. No label or hypothesis checks.
    pub(crate) fn equality_edge(&self, p: &Point, u: f64) -> Result<Maximizer> {
        let range = self.s_range(p)?;
        let v_max = range.hi.value();
        if !v_max.is_finite() {
            return Err(Error::precondition("equality set needs a bounded range"));
        }
        let (sp, s1) = (self.phi.slice_at(p)?, self.phi1.slice_at(p)?);
        let top = self.sup(p, u, range)?.value;
        if top.is_infinite() {
            return Err(Error::precondition(format!("truncated conjugate is infinite at t = {}, u = {u}", p.t)));
        }
        let mut level = top.value();
        let grid = grid(0.0, v_max, self.solver.coarse_grid);
        let mut vals = Vec::with_capacity(grid.len());
        for &s in &grid {
            let g = match eval_g(&sp, &s1, u, s)? {
                G::Val(v) => v,
                G::Inadmissible => f64::NEG_INFINITY,
                G::Inf => return Err(Error::SolverFailure("infinite objective inside the range".into())),
            };
            level = level.max(g);
            vals.push(g);
        }
        let mut seeds: Vec<f64> = Vec::new();
        for i in top_indices(&vals, self.solver.top_k) {
            let (s, g) = self.golden(&sp, &s1, u, &grid, i)?;
            level = level.max(g);
            seeds.push(s);
        }
        let edge = self.solver.edge_tol;
        let in_band = |v: f64| -> Result<bool> {
            let f = sp.eval(u * v)?;
            let f1 = s1.eval(v)?;
            if f.is_infinite() || f1.is_infinite() {
                return Ok(false);
            }
            Ok(f1.value() + level - f.value() <= edge * f.value().max(f1.value() + level))
        };
        let mut best: Option<f64> = None;
        for &s in grid.iter().chain(seeds.iter()) {
            if best.is_none_or(|b| s > b) && in_band(s)? {
                best = Some(s);
            }
        }
        let seed = best.ok_or_else(|| {
            Error::SolverFailure(format!("no equality point found at t = {}, u = {u}", p.t))
        })?;
        if seed >= v_max {
            return Ok(Maximizer { x: v_max, level, v_max });
        }
        let next = grid[grid.partition_point(|&s| s <= seed)];
        let x = search::last_true(in_band, seed, next, 0.0)?;
        Ok(Maximizer { x, level, v_max })
    }

    /// `phi_1(t, v) + level - phi(t, u v)`, the slack of the Young inequality;
    /// `inf` where `phi_1` is infinite and `-inf` where `phi` is.
    pub fn young_gap(&self, p: &Point, u: f64, v: f64, level: f64) -> Result<f64> {
        let f = self.phi.eval(p, u * v)?;
        let f1 = self.phi1.eval(p, v)?;
        Ok(if f1.is_infinite() {
            f64::INFINITY
        } else if f.is_infinite() {
            f64::NEG_INFINITY
        } else {
            f1.value() + level - f.value()
        })
    }

    /// Points where the conjugate is not identically infinite past zero:
    /// `(ZeroZero + InfZero + InfInf + atoms)` intersected with `{b_phi > 0}`.
    pub fn conjugate_support(&self, space: &MeasureSpace) -> Result<PointSet> {
        if space.len() != self.classification.labels().len() {
            return Err(Error::Misaligned {
                expected: self.classification.labels().len(),
                got: space.len(),
            });
        }
        Ok(PointSet::from_predicate(space, |i| {
            self.classification.label(i) != Label::ZeroInf && !self.classification.b_phi(i).is_zero()
        }))
    }

    fn sup(&self, p: &Point, u: f64, range: SRange) -> Result<Sup> {
        let sp = self.phi.slice_at(p)?;
        let s1 = self.phi1.slice_at(p)?;
        if range.hi.is_zero() {
            return Ok(Sup { value: ExtReal::ZERO, arg: 0.0 });
        }
        if self.solver.fast_paths {
            if let Some(v) = fast_sup(&sp, &s1, u, range.hi)? {
                return Ok(Sup { value: v, arg: f64::NAN });
            }
        }
        if range.hi.is_infinite() {
            return self.ladder(&sp, &s1, u);
        }
        let hi = if range.closed {
            range.hi.value()
        } else {
            range.hi.value() * (1.0 - self.solver.endpoint_margin)
        };
        self.generic(&sp, &s1, u, 0.0, hi, self.solver.coarse_grid)
    }

    /// Grid-and-refine supremum of `g` over `[lo, hi]`; never below `g(0) = 0`.
    fn generic(&self, sp: &YoungSlice, s1: &YoungSlice, u: f64, lo: f64, hi: f64, n: usize) -> Result<Sup> {
        let grid = grid(lo, hi, n);
        let mut vals = Vec::with_capacity(grid.len());
        for &s in &grid {
            match eval_g(sp, s1, u, s)? {
                G::Inf => return Ok(Sup { value: ExtReal::INFINITY, arg: s }),
                G::Inadmissible => vals.push(f64::NEG_INFINITY),
                G::Val(v) => vals.push(v),
            }
        }
        let mut best = Sup { value: ExtReal::ZERO, arg: 0.0 };
        let mut best_v = 0.0;
        for (s, v) in grid.iter().zip(&vals) {
            if *v >= best_v {
                best_v = *v;
                best.arg = *s;
            }
        }
        for i in top_indices(&vals, self.solver.top_k) {
            let (s, v) = self.golden(sp, s1, u, &grid, i)?;
            if v.is_infinite() && v > 0.0 {
                return Ok(Sup { value: ExtReal::INFINITY, arg: s });
            }
            if v > best_v || (v == best_v && s > best.arg) {
                best_v = v;
                best.arg = s;
            }
        }
        best.value = ExtReal::from_rounded(best_v)?;
        Ok(best)
    }

    /// Golden-section maximization of `g` between the neighbours of grid
    /// point `i`. Returns `+inf` as the value if an infinite point is met.
    fn golden(&self, sp: &YoungSlice, s1: &YoungSlice, u: f64, grid: &[f64], i: usize) -> Result<(f64, f64)> {
        let mut a = grid[i.saturating_sub(1)];
        let mut b = grid[(i + 1).min(grid.len() - 1)];
        let val = |s: f64| -> Result<f64> {
            Ok(match eval_g(sp, s1, u, s)? {
                G::Inf => f64::INFINITY,
                G::Inadmissible => f64::NEG_INFINITY,
                G::Val(v) => v,
            })
        };
        const R: f64 = 0.618_033_988_749_894_8;
        let mut c = b - R * (b - a);
        let mut d = a + R * (b - a);
        let (mut fc, mut fd) = (val(c)?, val(d)?);
        let mut best = (grid[i], val(grid[i])?);
        for _ in 0..self.solver.refine_rounds {
            for (s, f) in [(c, fc), (d, fd)] {
                if f.is_infinite() && f > 0.0 {
                    return Ok((s, f));
                }
                if f > best.1 || (f == best.1 && s > best.0) {
                    best = (s, f);
                }
            }
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - R * (b - a);
                fc = val(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + R * (b - a);
                fd = val(d)?;
            }
            if b - a <= f64::EPSILON * b.abs() {
                break;
            }
        }
        for (s, f) in [(c, fc), (d, fd)] {
            if f > best.1 || (f == best.1 && s > best.0) {
                best = (s, f);
            }
        }
        Ok(best)
    }

    /// Supremum over `[0, inf)` as the limit of suprema over `[0, A]`.
    ///
    /// `A` doubles from 1 up to `2^64`, then grows by squaring factors up to
    /// `1e300`. Each rung only searches the new segment `[A_prev, A]`.
    /// Single evaluations at `2^j`, `j` even, beyond `from`: a stable ladder
    /// can still miss an excess that only turns positive far out.
    fn far_probe(&self, sp: &YoungSlice, s1: &YoungSlice, u: f64, from: f64, v: f64) -> Result<Far> {
        let mut j = (libm::ceil(libm::log2(from)) as i32 + 1) & !1;
        while j <= 996 {
            let s = libm::exp2(j as f64);
            match eval_g(sp, s1, u, s)? {
                G::Inf => return Ok(Far::Infinite(s)),
                G::Val(g) if g > v + self.solver.rel_tol * v.abs() => return Ok(Far::Grows),
                _ => {}
            }
            j += 2;
        }
        Ok(Far::Flat)
    }

    fn ladder(&self, sp: &YoungSlice, s1: &YoungSlice, u: f64) -> Result<Sup> {
        const MIN_RUNG: f64 = 1.099_511_627_776e12; // 2^40
        let first = self.generic(sp, s1, u, 0.0, 1.0, self.solver.coarse_grid)?;
        if first.value.is_infinite() {
            return Ok(first);
        }
        let mut best = first;
        let mut prev = best.value.value();
        let mut stable = 0;
        let mut lo = 1.0_f64;
        let mut step = 0u32;
        let mut far_growth = false;
        loop {
            let hi = if lo < 1.8446744073709552e19 {
                lo * 2.0
            } else {
                step += 1;
                lo * libm::exp2(libm::exp2(step as f64))
            };
            if !(hi <= 1e300) {
                break;
            }
            let seg = self.generic(sp, s1, u, lo, hi, (self.solver.coarse_grid / 4).max(8))?;
            if seg.value.is_infinite() {
                return Ok(seg);
            }
            if seg.value > best.value || (seg.value == best.value && seg.value.value() > 0.0) {
                best = seg;
            }
            let v = best.value.value();
            if (v - prev).abs() <= self.solver.rel_tol * v.abs() {
                stable += 1;
            } else {
                stable = 0;
            }
            prev = v;
            lo = hi;
            if stable >= 2 && hi >= MIN_RUNG && !far_growth {
                match self.far_probe(sp, s1, u, hi, v)? {
                    Far::Infinite(at) => return Ok(Sup { value: ExtReal::INFINITY, arg: at }),
                    Far::Grows => far_growth = true,
                    Far::Flat => return Ok(best),
                }
            }
        }
        if stable >= 2 {
            Ok(best)
        } else {
            Ok(Sup { value: ExtReal::INFINITY, arg: lo })
        }
    }
}

impl MusielakOrlicz for ConjugateSpec {
    /// The truncated conjugate when a level is set, the plain one otherwise.
    fn eval(&self, at: &Point, u: f64) -> Result<ExtReal> {
        if self.a.is_infinite() {
            self.ominus(at, u)
        } else {
            self.ominus_trunc(at, u)
        }
    }

    fn b_param(&self, at: &Point) -> Result<ExtReal> {
        match self.label_at(at)? {
            Label::ZeroInf if self.a.is_infinite() => Ok(ExtReal::ZERO),
            Label::InfInf | Label::InfZero if self.a.is_finite() => self.b_of_trunc(at),
            _ => search::threshold(|u| Ok(self.eval(at, u)?.is_infinite()), self.root_tol()),
        }
    }
}

fn eval_g(sp: &YoungSlice, s1: &YoungSlice, u: f64, s: f64) -> Result<G> {
    let f1 = s1.eval(s)?;
    if f1.is_infinite() {
        return Ok(G::Inadmissible);
    }
    let su = s * u;
    if su.is_infinite() {
        return Ok(G::Inf);
    }
    let f = sp.eval(su)?;
    if f.is_infinite() {
        return Ok(G::Inf);
    }
    Ok(G::Val(f.value() - f1.value()))
}

/// Sorted grid on `[lo, hi]`: half linear, half logarithmic (from
/// `max(lo, 1e-12 hi)`), both ends included.
fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n_lin = n / 2;
    let n_log = n - n_lin;
    let mut g = Vec::with_capacity(n + 2);
    for k in 0..=n_lin {
        g.push(lo + (hi - lo) * k as f64 / n_lin as f64);
    }
    let l0 = libm::log(lo.max(hi * 1e-12));
    let l1 = libm::log(hi);
    for k in 0..n_log {
        g.push(libm::exp(l0 + (l1 - l0) * k as f64 / (n_log - 1) as f64).clamp(lo, hi));
    }
    g.push(hi);
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

fn top_indices(vals: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > f64::NEG_INFINITY).collect();
    // ties resolve towards larger s
    idx.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]).then(j.cmp(&i)));
    idx.truncate(k);
    idx
}

/// Closed-form suprema over `[0, hi]` for `phi` a power or hinge slice and
/// `phi_1` a power slice. `None` when no closed form applies.
fn fast_sup(sp: &YoungSlice, s1: &YoungSlice, u: f64, hi: ExtReal) -> Result<Option<ExtReal>> {
    let (p, beta) = match s1 {
        YoungSlice::Power { p, scale } => (*p, *scale),
        _ => return Ok(None),
    };
    let g_at = |s: f64| -> Result<f64> {
        Ok(sp.eval(s * u)?.value() - s1.eval(s)?.value())
    };
    let v = match sp {
        YoungSlice::Power { p: q, scale: alpha } => {
            let q = *q;
            let lk = libm::log(*alpha) + q * libm::log(u);
            if q < p {
                // stationary point of K s^q - beta s^p
                let ls = (lk + libm::log(q) - libm::log(beta) - libm::log(p)) / (p - q);
                if hi.is_infinite() || ls <= libm::log(hi.value()) {
                    ExtReal::from_rounded(libm::exp(lk + q * ls) * (1.0 - q / p))?
                } else {
                    ExtReal::from_rounded(g_at(hi.value())?)?
                }
            } else if q == p {
                let k = libm::exp(lk);
                if k <= beta {
                    ExtReal::ZERO
                } else if hi.is_infinite() {
                    ExtReal::INFINITY
                } else {
                    ExtReal::from_rounded((k - beta) * libm::pow(hi.value(), p))?
                }
            } else if hi.is_infinite() {
                ExtReal::INFINITY
            } else {
                ExtReal::from_rounded(g_at(hi.value())?)?
            }
        }
        YoungSlice::Hinge { shift } => {
            let c = *shift;
            let h = |s: f64| s * u - c - beta * libm::pow(s, p);
            if p > 1.0 {
                let s_star = libm::pow(u / (beta * p), 1.0 / (p - 1.0));
                let s = if hi.is_infinite() { s_star } else { s_star.min(hi.value()) };
                ExtReal::from_rounded(h(s).max(0.0))?
            } else if u <= beta {
                ExtReal::ZERO
            } else if hi.is_infinite() {
                ExtReal::INFINITY
            } else {
                ExtReal::from_rounded(((u - beta) * hi.value() - c).max(0.0))?
            }
        }
        _ => return Ok(None),
    };
    Ok(Some(v))
}
