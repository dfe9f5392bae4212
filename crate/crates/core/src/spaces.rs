//! Modulars, Luxemburg norms and multiplier-norm brackets.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::conjugate::ConjugateSpec;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::factorization::{factor_split, FactorPair};
use crate::measure::{Label, MeasureSpace, Point, PointSet, SimpleFunction};
use crate::rng;
use crate::search;
use crate::young::{MOFunction, MusielakOrlicz, EPS_ROOT};

/// `I_phi(x) = sum_i phi(t_i, |x_i|) mu_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModularValue {
    pub value: ExtReal,
}

pub fn modular<F>(phi: &F, space: &MeasureSpace, x: &SimpleFunction) -> Result<ModularValue>
where
    F: MusielakOrlicz + ?Sized,
{
    x.check(space)?;
    let mut sum = ExtReal::ZERO;
    for (i, &v) in x.values().iter().enumerate() {
        if v != 0.0 {
            sum += phi.eval(&space.point(i), v.abs())?.scale(space.mass(i));
        }
    }
    Ok(ModularValue { value: sum })
}

/// Whether `I_phi(x / lambda) <= 1`, stopping as soon as the partial sum
/// exceeds 1.
fn unit_ball<F>(phi: &F, space: &MeasureSpace, x: &SimpleFunction, lambda: f64) -> Result<bool>
where
    F: MusielakOrlicz + ?Sized,
{
    let mut sum = 0.0;
    for (i, &v) in x.values().iter().enumerate() {
        if v != 0.0 {
            let f = phi.eval(&space.point(i), v.abs() / lambda)?;
            if f.is_infinite() {
                return Ok(false);
            }
            sum += f.value() * space.mass(i);
            if sum > 1.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormResult {
    /// Upper end of the bracket; `inf` when no finite `lambda` works.
    pub value: ExtReal,
    /// `lo` fails the unit-ball test (unless zero), `hi` passes it.
    pub bracket: (f64, f64),
    /// Number of modular evaluations.
    pub iterations: usize,
}

/// `inf { lambda > 0 : I_phi(x / lambda) <= 1 }` to relative accuracy
/// [`EPS_ROOT`].
pub fn luxemburg_norm<F>(phi: &F, space: &MeasureSpace, x: &SimpleFunction) -> Result<NormResult>
where
    F: MusielakOrlicz + ?Sized,
{
    luxemburg_norm_tol(phi, space, x, EPS_ROOT)
}

pub fn luxemburg_norm_tol<F>(phi: &F, space: &MeasureSpace, x: &SimpleFunction, rel_tol: f64) -> Result<NormResult>
where
    F: MusielakOrlicz + ?Sized,
{
    x.check(space)?;
    if x.is_zero() {
        return Ok(NormResult { value: ExtReal::ZERO, bracket: (0.0, 0.0), iterations: 0 });
    }
    let mut iterations = 0;
    let (lo, hi) = search::bracket_threshold(
        |lambda| {
            iterations += 1;
            unit_ball(phi, space, x, lambda)
        },
        rel_tol,
    )?;
    Ok(NormResult { value: ExtReal::new(hi)?, bracket: (lo, hi), iterations })
}

/// `max_i |x_i| v(t_i)` over the support of `x`.
pub fn weighted_sup_norm(space: &MeasureSpace, x: &SimpleFunction, v: impl Fn(&Point) -> f64) -> Result<ExtReal> {
    x.check(space)?;
    let mut m = ExtReal::ZERO;
    for (i, &xi) in x.values().iter().enumerate() {
        if xi != 0.0 {
            let w = v(&space.point(i));
            if w.is_nan() || w < 0.0 {
                return Err(Error::Domain { what: "weight", value: w });
            }
            m = m.max(ExtReal::new(xi.abs() * w)?);
        }
    }
    Ok(m)
}

/// Smallest `c >= 1` with `|x| / b_phi <= c ||x||_phi` for all `x` carried by
/// the points of `set` where `b_phi` is finite and positive.
///
/// On a discretization the extremal `x` are single-point indicators, so the
/// constant is `max(1, max_i phi^{-1}(t_i, 1 / mu_i) / b_phi(t_i))`.
pub fn inclusion_constant_sup<F>(phi: &F, space: &MeasureSpace, set: &PointSet) -> Result<f64>
where
    F: MusielakOrlicz + ?Sized,
{
    let mut c = 1.0_f64;
    for &i in set.indices() {
        let p = space.point(i);
        let b = phi.b_param(&p)?;
        if b.is_finite() && !b.is_zero() {
            let inv = phi.inverse(&p, 1.0 / space.mass(i))?;
            c = c.max(inv.value() / b.value());
        }
    }
    Ok(c)
}

/// Smallest `c` with `|y| b_{phi_1} / b_phi <= c ||y||_M` over single-point
/// `y` on the `InfInf` part; `0` when that part is empty.
pub fn inclusion_constant_multiplier(phi1: &MOFunction, phi: &MOFunction, space: &MeasureSpace) -> Result<f64> {
    let cls = crate::measure::classify(space, phi, phi1)?;
    let mut c = 0.0_f64;
    for i in 0..space.len() {
        if cls.label(i) != Label::InfInf || cls.b_phi(i).is_zero() {
            continue;
        }
        let chi = SimpleFunction::indicator(space, &PointSet::new(space, vec![i])?)?;
        let n1 = luxemburg_norm(phi1, space, &chi)?.value.value();
        let n = luxemburg_norm(phi, space, &chi)?.value.value();
        c = c.max(cls.b_phi1(i).value() / cls.b_phi(i).value() * n1 / n);
    }
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateKind {
    /// Built from maximizers of the truncated conjugate at scaled `y`.
    Witness,
    /// Indicator of a single point.
    Indicator,
    /// Power of `|y|`.
    Profile,
    Random,
    None,
}

impl CandidateKind {
    pub fn name(self) -> &'static str {
        match self {
            CandidateKind::Witness => "witness",
            CandidateKind::Indicator => "indicator",
            CandidateKind::Profile => "profile",
            CandidateKind::Random => "random",
            CandidateKind::None => "none",
        }
    }
}

/// Two-sided estimate of the multiplier norm `||y||_M` of `y` acting from
/// `L^{phi_1}` to `L^phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierEstimate {
    /// Best `||x y||_phi / ||x||_{phi_1}` found, rounded down.
    pub lower: f64,
    /// `2 ||y||_{phi (-) phi_1}`.
    pub upper: f64,
    pub conj_norm: f64,
    /// The candidate attaining `lower`, normalized to `||x||_{phi_1} = 1`.
    pub witness: SimpleFunction,
    pub witness_kind: CandidateKind,
    /// Constant of the inclusion of the multiplier space into the weighted
    /// `L^inf` on the `InfInf` part, computed on this space.
    pub inclusion_constant: f64,
    pub candidates: usize,
    pub seed: u64,
}

/// Truncation level used to build witnesses.
const WITNESS_A: f64 = 1e3;

/// Brackets `||y||_M` between the best ratio over candidate functions and
/// twice the conjugate norm of `y`.
pub fn multiplier_norm(
    phi1: &MOFunction,
    phi: &MOFunction,
    space: &MeasureSpace,
    y: &SimpleFunction,
    budget: usize,
    seed: u64,
) -> Result<MultiplierEstimate> {
    y.check(space)?;
    let spec = ConjugateSpec::new(phi.clone(), phi1.clone(), space)?;
    let inclusion_constant = inclusion_constant_multiplier(phi1, phi, space)?;
    if y.is_zero() {
        return Ok(MultiplierEstimate {
            lower: 0.0,
            upper: 0.0,
            conj_norm: 0.0,
            witness: SimpleFunction::zero(space),
            witness_kind: CandidateKind::None,
            inclusion_constant,
            candidates: 0,
            seed,
        });
    }
    let conj = luxemburg_norm(&spec, space, y)?.value.value();
    let upper = 2.0 * conj;
    let ya = y.abs();
    let n = space.len();

    let mut best = (0.0_f64, SimpleFunction::zero(space), CandidateKind::None);
    let mut candidates = 0;
    let mut consider = |x: SimpleFunction, kind: CandidateKind| -> Result<()> {
        let nx = luxemburg_norm(phi1, space, &x)?.value;
        if nx.is_zero() || nx.is_infinite() {
            return Ok(());
        }
        candidates += 1;
        // lower end over upper end keeps the ratio a guaranteed lower bound
        let nxy = luxemburg_norm(phi, space, &x.mul(&ya)?)?;
        let nxy = if nxy.value.is_infinite() { f64::INFINITY } else { nxy.bracket.0 };
        let r = nxy / nx.value();
        if r > best.0 {
            best = (r, x.scale(1.0 / nx.value()), kind);
        }
        Ok(())
    };

    for &i in y.support(space)?.indices() {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        consider(SimpleFunction::new(space, v)?, CandidateKind::Indicator)?;
    }
    for kappa in [0.0, 0.5, 1.0, 2.0] {
        consider(ya.map(|v| if v == 0.0 { 0.0 } else { libm::pow(v, kappa) }), CandidateKind::Profile)?;
    }
    if conj.is_finite() && conj > 0.0 {
        let wspec = spec.clone().truncated(WITNESS_A)?;
        for sigma in [0.25, 0.5, 1.0, 2.0] {
            let mut v = vec![0.0; n];
            for i in 0..n {
                if ya.values()[i] == 0.0 {
                    continue;
                }
                let u = sigma * ya.values()[i] / conj;
                v[i] = wspec.equality_edge(&space.point(i), u).map(|m| m.x).unwrap_or(0.0);
            }
            consider(SimpleFunction::new(space, v)?, CandidateKind::Witness)?;
        }
    }
    let cls = spec.classification();
    let mut r = rng::stream(seed, rng::streams::MULTIPLIER);
    for _ in 0..budget {
        let v = (0..n)
            .map(|i| {
                let b1 = cls.b_phi1(i);
                let top = 0.99 * if b1.is_finite() { b1.value().max(1.0) } else { 1.0 };
                rng::log_uniform(&mut r, 1e-3, top)
            })
            .collect();
        consider(SimpleFunction::new(space, v)?, CandidateKind::Random)?;
    }
    Ok(MultiplierEstimate {
        lower: best.0,
        upper,
        conj_norm: conj,
        witness: best.1,
        witness_kind: best.2,
        inclusion_constant,
        candidates,
        seed,
    })
}

/// Upper bound on the product quasi-norm of `z` in `L^{phi_0} (.) L^{phi_1}`.
#[derive(Clone, Debug)]
pub struct ProductUpper {
    pub value: f64,
    /// The constructive split, when it succeeded.
    pub split: Option<FactorPair>,
    /// Why the constructive split was not available.
    pub split_error: Option<Error>,
    /// `||z0||_{phi_0} ||z1||_{phi_1}` of the constructive split.
    pub split_value: Option<f64>,
    /// Best exponent of the heuristic split `z0 = z^theta`, `z1 = z^(1-theta)`.
    pub theta: f64,
    pub heuristic_value: f64,
}

/// Heuristic exponents tried by [`product_quasinorm_upper`].
pub const THETA_GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Best of the constructive split (with constant `d`, or the range-restricted
/// one when `None`) and the heuristic `z^theta` splits.
pub fn product_quasinorm_upper<F, F0, F1>(
    phi: &F,
    phi0: &F0,
    phi1: &F1,
    space: &MeasureSpace,
    z: &SimpleFunction,
    d: Option<f64>,
) -> Result<ProductUpper>
where
    F: MusielakOrlicz + ?Sized,
    F0: MusielakOrlicz + ?Sized,
    F1: MusielakOrlicz + ?Sized,
{
    z.check(space)?;
    if let Some(&v) = z.values().iter().find(|v| **v < 0.0) {
        return Err(Error::Domain { what: "product argument z", value: v });
    }
    if z.is_zero() {
        return Ok(ProductUpper {
            value: 0.0,
            split: None,
            split_error: None,
            split_value: Some(0.0),
            theta: 0.5,
            heuristic_value: 0.0,
        });
    }
    let (split, split_error, split_value) = match factor_split(phi, phi0, phi1, space, z, d) {
        Ok(pair) => {
            let v = luxemburg_norm(phi0, space, &pair.z0)?.value.value()
                * luxemburg_norm(phi1, space, &pair.z1)?.value.value();
            (Some(pair), None, Some(v))
        }
        Err(e) => (None, Some(e), None),
    };
    let mut heuristic = (f64::INFINITY, 0.5);
    for theta in THETA_GRID {
        let z0 = z.map(|v| if v == 0.0 { 0.0 } else { libm::pow(v, theta) });
        let z1 = z.map(|v| if v == 0.0 { 0.0 } else { libm::pow(v, 1.0 - theta) });
        let v = luxemburg_norm(phi0, space, &z0)?.value.value() * luxemburg_norm(phi1, space, &z1)?.value.value();
        if v < heuristic.0 {
            heuristic = (v, theta);
        }
    }
    let value = split_value.map_or(heuristic.0, |s| s.min(heuristic.0));
    Ok(ProductUpper { value, split, split_error, split_value, theta: heuristic.1, heuristic_value: heuristic.0 })
}

/// Samples a nonnegative simple function: each value is zero with
/// probability `zero_prob`, otherwise log-uniform in `[lo, hi]`.
pub fn random_simple<R: Rng + ?Sized>(
    rng: &mut R,
    space: &MeasureSpace,
    lo: f64,
    hi: f64,
    zero_prob: f64,
) -> SimpleFunction {
    let v: Vec<f64> = (0..space.len())
        .map(|_| {
            if rng.gen::<f64>() < zero_prob {
                0.0
            } else {
                rng::log_uniform(rng, lo, hi)
            }
        })
        .collect();
    SimpleFunction::new(space, v).expect("finite values")
}
