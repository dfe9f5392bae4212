//! Acceptance suite. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p mokit-core --test acceptance -- --nocapture --test-threads=1`
//! to see them in order.

use mokit_core::conjugate::SupSolverConfig;
use mokit_core::factorization::{compare_inverses, default_u_grid, factor_split, factorization_verify, Verdict};
use mokit_core::measure::{partition_bounded, partition_unbounded, Atom, Cell, Partition};
use mokit_core::rng::{log_uniform, stream};
use mokit_core::spaces::{luxemburg_norm, modular, multiplier_norm, random_simple};
use mokit_core::{ConjugateSpec, Expr, ExtReal, Label, MOFunction, MeasureSpace, MusielakOrlicz, Point, PointSet, SimpleFunction, EPS_ROOT};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn report(n: u32, name: &str, ok: bool, detail: String) {
    println!("criterion {n} [{name}]: {} ({detail})", if ok { "PASS" } else { "FAIL" });
}

fn e(src: &str) -> Expr {
    Expr::parse(src).unwrap()
}

fn no_fast() -> SupSolverConfig {
    SupSolverConfig { fast_paths: false, ..SupSolverConfig::default() }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

#[test]
fn c1_nakano_conjugate() {
    let space = MeasureSpace::uniform(0.0, 1.0, 64).unwrap();
    let phi = MOFunction::nakano(e("1 + t/2"), true);
    let phi1 = MOFunction::nakano(e("2 + t"), true);
    let us: Vec<f64> = (0..41).map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / 40.0)).collect();
    let mut worst = [0.0f64; 2];
    for (j, solver) in [SupSolverConfig::default(), no_fast()].into_iter().enumerate() {
        let spec = ConjugateSpec::new(phi.clone(), phi1.clone(), &space).unwrap().with_solver(solver).unwrap();
        for p in space.points() {
            let (pp, q) = (2.0 + p.t, 1.0 + p.t / 2.0);
            let r = 1.0 / (1.0 / q - 1.0 / pp);
            for &u in &us {
                let exact = u.powf(r) / r;
                let got = spec.ominus(&p, u).unwrap();
                let err = if got.is_finite() { rel(got.value(), exact) } else { f64::INFINITY };
                worst[j] = worst[j].max(err);
            }
        }
    }
    let ok = worst[0] <= 1e-6 && worst[1] <= 1e-6;
    report(1, "Nakano conjugate", ok, format!("max rel err closed-form {:.2e}, search {:.2e}", worst[0], worst[1]));
    assert!(ok);
}

#[test]
fn c2_example_hinge_linear() {
    let space = MeasureSpace::uniform(0.0, 0.5, 64).unwrap();
    let phi = MOFunction::hinge(Expr::T);
    let phi1 = MOFunction::linear(1.0);
    let mut exact_ok = true;
    for solver in [SupSolverConfig::default(), no_fast()] {
        let spec = ConjugateSpec::new(phi.clone(), phi1.clone(), &space).unwrap().with_solver(solver).unwrap();
        for p in space.points() {
            for k in 0..=40 {
                let u = 2.0 * k as f64 / 40.0;
                let want = if u <= 1.0 { ExtReal::ZERO } else { ExtReal::INFINITY };
                exact_ok &= spec.ominus(&p, u).unwrap() == want;
            }
            exact_ok &= spec.ominus(&p, 1.0f64.next_up()).unwrap().is_infinite();
        }
    }

    let conj = ConjugateSpec::new(phi.clone(), phi1.clone(), &space).unwrap();
    let cmp = compare_inverses(&phi, &conj, &phi1, &space, &default_u_grid()).unwrap();
    let w = cmp.upper_witness.unwrap();
    let (num, den) = w.replay(&phi, &conj, &phi1, &space).unwrap();
    let replay_ok = den.is_some_and(|d| d.is_zero()) && !num.is_zero() && num == w.num;
    let cmp_ok = cmp.succ == Verdict::Fails
        && w.t > 0.0
        && w.u <= 1e-3
        && replay_ok
        && cmp.prec == Verdict::HoldsOnGrid
        && cmp.best_c_lower >= 1.0 - 1e-9;

    let ver = factorization_verify(&phi1, &phi, &space, 200, 51).unwrap();
    let ver_ok = ver.passed && ver.product.worst_ratio <= 4.0 && ver.inclusion.samples > 0 && ver.product.samples > 0;
    let ok = exact_ok && cmp_ok && ver_ok;
    report(
        2,
        "hinge/linear example",
        ok,
        format!(
            "exact conjugate {exact_ok}; succ {} at (t={:.4}, u={}), prec {} with C={:.12}; inclusion ratio {:.4} over {}, K={:.4} over {}",
            cmp.succ.name(),
            w.t,
            w.u,
            cmp.prec.name(),
            cmp.best_c_lower,
            ver.inclusion.worst_ratio,
            ver.inclusion.samples,
            ver.product.worst_ratio,
            ver.product.samples
        ),
    );
    assert!(ok);
}

#[test]
fn c3_young_inequality() {
    let probe = MeasureSpace::uniform(0.0, 1.0, 1).unwrap();
    let pairs: Vec<(&str, MOFunction, MOFunction)> = vec![
        ("nakano", MOFunction::nakano(e("1 + t/2"), true), MOFunction::nakano(e("2 + t"), true)),
        ("hinge/power", MOFunction::hinge(Expr::T), MOFunction::power(2.0, 1.0)),
        ("hinge/linear", MOFunction::hinge(Expr::T), MOFunction::linear(1.0)),
        ("power/capped", MOFunction::power(2.0, 1.0), MOFunction::capped(MOFunction::linear(1.0), e("1 + t"))),
        ("custom/capped", MOFunction::custom(e("u*u + t*u")), MOFunction::capped(MOFunction::power(3.0, 1.0), 2.0)),
    ];
    let mut rng = stream(3, 0);
    let mut violations = 0;
    let mut total = 0;
    let mut finite = 0;
    for (name, phi, phi1) in &pairs {
        let fast = ConjugateSpec::new(phi.clone(), phi1.clone(), &probe).unwrap();
        let slow = fast.clone().with_solver(no_fast()).unwrap();
        for k in 0..2000 {
            let spec = if k % 2 == 0 { &fast } else { &slow };
            let p = Point::cell(rng.gen::<f64>());
            let u = log_uniform(&mut rng, 1e-3, 1e3);
            let b1 = phi1.b_param(&p).unwrap();
            let v = if rng.gen::<bool>() {
                log_uniform(&mut rng, 1e-3, 1e3)
            } else {
                rng.gen::<f64>() * if b1.is_finite() { b1.value() } else { 10.0 }
            };
            let lhs = phi.eval(&p, u * v).unwrap();
            let rhs = phi1.eval(&p, v).unwrap() + spec.ominus(&p, u).unwrap();
            total += 1;
            let bad = if rhs.is_infinite() {
                false
            } else if lhs.is_infinite() {
                true
            } else {
                finite += 1;
                lhs.value() - rhs.value() > 1e-9 * lhs.value().max(rhs.value())
            };
            if bad {
                violations += 1;
                println!("  violation {name}: t={} u={u} v={v} lhs={lhs} rhs={rhs}", p.t);
            }
        }
    }
    let ok = violations == 0 && total == 10_000;
    report(3, "Young inequality", ok, format!("{violations} violations in {total} triples ({finite} with finite sides)"));
    assert!(ok);
}

fn random_space(rng: &mut ChaCha8Rng) -> MeasureSpace {
    let n = rng.gen_range(1..=12);
    let cells = (0..n)
        .map(|_| Cell { rep: rng.gen::<f64>(), mass: log_uniform(rng, 1e-3, 1.0) })
        .collect();
    let atoms = (0..rng.gen_range(0..=2))
        .map(|k| Atom { omega: 2.0 + k as f64, mass: log_uniform(rng, 1e-2, 2.0) })
        .collect();
    MeasureSpace::new(cells, atoms).unwrap()
}

fn norm_families() -> Vec<MOFunction> {
    vec![
        MOFunction::nakano(e("1 + 2*t"), true),
        MOFunction::power(3.0, 2.0),
        MOFunction::hinge(e("t/2")),
        MOFunction::linear(e("1 + t")),
        MOFunction::indicator(e("1 + t")),
        MOFunction::capped(MOFunction::power(2.0, 1.0), e("1 + t")),
        MOFunction::custom(e("(1 + t)*u*u + u")),
    ]
}

fn random_signed(rng: &mut ChaCha8Rng, space: &MeasureSpace) -> SimpleFunction {
    let x = random_simple(rng, space, 1e-2, 1e1, 0.2);
    let signs: Vec<f64> = x.values().iter().map(|&v| if rng.gen::<bool>() { v } else { -v }).collect();
    SimpleFunction::new(space, signs).unwrap()
}

#[test]
fn c4_norm_engine() {
    let fams = norm_families();
    let mut rng = stream(4, 0);
    let mut fails = [0usize; 4];
    let mut counts = [0usize; 4];
    let mut worst_h = 0.0f64;
    let mut worst_ind = 0.0f64;
    while counts.iter().any(|&c| c < 1000) {
        let space = random_space(&mut rng);
        let phi = &fams[rng.gen_range(0..fams.len())];
        let x = random_signed(&mut rng, &space);
        if x.is_zero() {
            continue;
        }
        let nx = luxemburg_norm(phi, &space, &x).unwrap();
        if nx.value.is_infinite() {
            continue;
        }
        let n = nx.value.value();

        if counts[0] < 1000 {
            counts[0] += 1;
            let r = rng.gen::<f64>().max(1e-3);
            let xs = x.scale(r / n);
            let ns = luxemburg_norm(phi, &space, &xs).unwrap().value.value();
            let i = modular(phi, &space, &xs).unwrap().value;
            if ns <= 1.0 && !(i.is_finite() && i.value() <= ns) {
                fails[0] += 1;
            }
        }
        if counts[1] < 1000 {
            counts[1] += 1;
            let c = log_uniform(&mut rng, 1e-3, 1e3) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let nc = luxemburg_norm(phi, &space, &x.scale(c)).unwrap().value.value();
            let err = rel(nc, c.abs() * n);
            worst_h = worst_h.max(err);
            if err > 1e-9 {
                fails[1] += 1;
            }
        }
        if counts[2] < 1000 {
            counts[2] += 1;
            let y: Vec<f64> = x
                .values()
                .iter()
                .map(|&v| if v == 0.0 { rng.gen::<f64>() } else { v * (1.0 + rng.gen::<f64>()) })
                .collect();
            let small: Vec<f64> = x.values().iter().map(|&v| if rng.gen::<f64>() < 0.2 { 0.0 } else { v }).collect();
            let y = SimpleFunction::new(&space, y).unwrap();
            let small = SimpleFunction::new(&space, small).unwrap();
            let ns = luxemburg_norm(phi, &space, &small).unwrap();
            let ny = luxemburg_norm(phi, &space, &y).unwrap().value;
            // lo < ||small|| <= ||y|| <= hi
            if !(ns.bracket.0 <= ny.value()) {
                fails[2] += 1;
            }
        }
        if counts[3] < 1000 {
            let i = rng.gen_range(0..space.len());
            let p = space.point(i);
            let inv = phi.inverse(&p, 1.0 / space.mass(i)).unwrap();
            if inv.is_zero() || inv.is_infinite() {
                continue;
            }
            counts[3] += 1;
            let chi = SimpleFunction::indicator(&space, &PointSet::new(&space, vec![i]).unwrap()).unwrap();
            let prod = luxemburg_norm(phi, &space, &chi).unwrap().value.value() * inv.value();
            worst_ind = worst_ind.max((prod - 1.0).abs());
            if (prod - 1.0).abs() > 1e-8 {
                fails[3] += 1;
            }
        }
    }
    let ok = fails.iter().all(|&f| f == 0);
    report(
        4,
        "norm engine",
        ok,
        format!(
            "failures modular {} / homogeneity {} (worst {worst_h:.1e}) / monotonicity {} / indicator {} (worst {worst_ind:.1e}) over {:?} cases",
            fails[0], fails[1], fails[2], fails[3], counts
        ),
    );
    assert!(ok);
}

#[test]
fn c5_multiplier_sandwich() {
    let space = MeasureSpace::uniform(0.0, 1.0, 16).unwrap();
    let pairs: Vec<(&str, MOFunction, MOFunction)> = vec![
        ("hinge/linear", MOFunction::hinge(Expr::T), MOFunction::linear(1.0)),
        ("nakano 1/2", MOFunction::nakano(1.0, true), MOFunction::nakano(2.0, true)),
        ("linear/power", MOFunction::linear(1.0), MOFunction::power(2.0, 1.0)),
    ];
    let r2 = MOFunction::nakano(2.0, true);
    let mut rng = stream(5, 0);
    let mut fails = 0;
    let mut worst = (0.0f64, 0.0f64);
    let mut r_range = (f64::INFINITY, 0.0f64);
    let mut n = 0;
    while n < 100 {
        let (name, phi, phi1) = &pairs[n % pairs.len()];
        let cls = mokit_core::classify(&space, phi, phi1).unwrap();
        assert_eq!(cls.count(Label::ZeroZero), space.len());
        let y = random_signed(&mut rng, &space);
        if y.is_zero() {
            continue;
        }
        n += 1;
        let est = multiplier_norm(phi1, phi, &space, &y, 16, n as u64).unwrap();
        let ok = est.lower <= est.upper
            && est.upper <= 8.0 * est.lower
            && est.conj_norm <= 8.0 * est.lower
            && 0.5 * est.conj_norm <= est.upper;
        worst.0 = worst.0.max(est.upper / est.lower);
        worst.1 = worst.1.max(est.conj_norm / est.lower);
        if *name == "nakano 1/2" {
            let nr = luxemburg_norm(&r2, &space, &y).unwrap().value.value();
            for v in [est.lower / nr, est.upper / nr] {
                r_range = (r_range.0.min(v), r_range.1.max(v));
            }
        }
        if !ok {
            fails += 1;
            println!("  {name}: {est:?}");
        }
    }
    // both norms are known to relative accuracy EPS_ROOT and the upper constant is attained
    let nakano_ok = r_range.0 >= 1.0 / 8.0 && r_range.1 <= 2.0 * (1.0 + 2.0 * EPS_ROOT);
    let ok = fails == 0 && nakano_ok;
    report(
        5,
        "multiplier sandwich",
        ok,
        format!(
            "{fails} failures in {n}; worst upper/lower {:.3}, conj/lower {:.3}; nakano estimates / r-norm in [{:.3}, {:.3}]",
            worst.0, worst.1, r_range.0, r_range.1
        ),
    );
    assert!(ok);
}

fn check_partition(part: &Partition, input: &MeasureSpace, phi: &MOFunction, expected: &dyn Fn(&PointSet) -> f64) -> Result<(), String> {
    let mut seen = vec![0usize; part.space.len()];
    let mut mass = 0.0;
    for (j, set) in part.sets.iter().enumerate() {
        for &i in set.indices() {
            seen[i] += 1;
        }
        mass += set.mass(&part.space);
        let want = expected(set);
        if rel(part.bounds[j], want) > 1e-15 {
            return Err(format!("set {j}: bound {} expected {want}", part.bounds[j]));
        }
        let chi = SimpleFunction::indicator(&part.space, set).unwrap();
        let n = luxemburg_norm(phi, &part.space, &chi).unwrap().value.value();
        if n > want * (1.0 + EPS_ROOT) {
            return Err(format!("set {j}: norm {n} above {want}"));
        }
    }
    if seen.iter().any(|&c| c != 1) {
        return Err("sets are not a disjoint cover".into());
    }
    if rel(mass, input.total_mass()) > 1e-12 {
        return Err(format!("mass {mass} vs {}", input.total_mass()));
    }
    let mut per = vec![0.0; input.len()];
    for (i, &o) in part.origin.iter().enumerate() {
        per[o] += part.space.mass(i);
    }
    for (o, m) in per.iter().enumerate() {
        if rel(*m, input.mass(o)) > 1e-12 {
            return Err(format!("cell {o}: pieces {m} vs {}", input.mass(o)));
        }
    }
    Ok(())
}

#[test]
fn c6_partitions() {
    let mut rng = stream(6, 0);
    let cells: Vec<Cell> = (0..64).map(|_| Cell { rep: rng.gen::<f64>(), mass: log_uniform(&mut rng, 1e-3, 0.1) }).collect();
    let space = MeasureSpace::new(cells, vec![]).unwrap();
    let mut errors = Vec::new();
    let mut runs = 0;
    let mut sets = 0;
    for phi in [MOFunction::linear(e("100*(1 + t)")), MOFunction::nakano(e("1 + t"), false), MOFunction::power(2.0, 50.0)] {
        for a in [0.5, 1.0, 2.0] {
            let part = partition_unbounded(&space, &phi, a).unwrap();
            runs += 1;
            sets += part.sets.len();
            if let Err(m) = check_partition(&part, &space, &phi, &|_| 1.0 / a) {
                errors.push(format!("{phi} a={a}: {m}"));
            }
        }
    }
    for phi in [
        MOFunction::capped(MOFunction::power(2.0, 30.0), e("1 + t")),
        MOFunction::capped(MOFunction::linear(1.0), e("1 + t")),
        MOFunction::capped(MOFunction::nakano(e("1 + t"), false), e("1 + t")),
    ] {
        let part = partition_bounded(&space, &phi).unwrap();
        runs += 1;
        sets += part.sets.len();
        let ps = part.space.clone();
        let expected = move |set: &PointSet| {
            2.0 / set.indices().iter().map(|&i| 1.0 + ps.point(i).t).fold(0.0, f64::max)
        };
        if let Err(m) = check_partition(&part, &space, &phi, &expected) {
            errors.push(format!("{phi}: {m}"));
        }
    }
    let ok = errors.is_empty();
    report(6, "partitions", ok, format!("{runs} partitions, {sets} sets, errors {errors:?}"));
    assert!(ok);
}

#[test]
fn c7_factor_split() {
    let triples: Vec<(&str, MOFunction, MOFunction, MOFunction)> = vec![
        ("linear = sq * sq", MOFunction::linear(1.0), MOFunction::power(2.0, 1.0), MOFunction::power(2.0, 1.0)),
        (
            "nakano",
            MOFunction::nakano(e("1 + t/2"), false),
            MOFunction::nakano(e("2 + t"), false),
            MOFunction::nakano(e("2 + t"), false),
        ),
        ("normalized", MOFunction::nakano(1.0, true), MOFunction::nakano(2.0, true), MOFunction::nakano(2.0, true)),
        ("scaled", MOFunction::power(1.0, 3.0), MOFunction::power(3.0, 2.0), MOFunction::power(1.5, 1.0)),
        ("weighted", MOFunction::linear(e("1 + t")), MOFunction::nakano(2.0, false), MOFunction::power(2.0, 4.0)),
    ];
    let mut rng = stream(7, 0);
    let mut ulp_fail = 0;
    let mut mod_fail = 0;
    let mut errors = Vec::new();
    let mut cases = 0;
    for k in 0..100 {
        let (name, phi, phi0, phi1) = &triples[k % triples.len()];
        let space = MeasureSpace::uniform(0.0, 1.0, rng.gen_range(4..=32)).unwrap();
        let cmp = compare_inverses(phi, phi0, phi1, &space, &default_u_grid()).unwrap();
        if !cmp.approx.holds() {
            errors.push(format!("{name}: equivalence not verified"));
            continue;
        }
        let z = random_simple(&mut rng, &space, 1e-3, 1e2, 0.2);
        let pair = match factor_split(phi, phi0, phi1, &space, &z, None) {
            Ok(p) => p,
            Err(err) => {
                errors.push(format!("{name}: {err}"));
                continue;
            }
        };
        cases += 1;
        for i in 0..space.len() {
            let (a, b, want) = (pair.z0.values()[i], pair.z1.values()[i], z.values()[i]);
            let got = a * b;
            if (got - want).abs() > want.next_up() - want {
                ulp_fail += 1;
            }
        }
        let zh = z.scale(pair.scale);
        let iz = modular(phi, &space, &zh).unwrap().value;
        let sd = pair.d.sqrt();
        let i0 = modular(phi0, &space, &pair.z0.scale(pair.scale / sd)).unwrap().value;
        let i1 = modular(phi1, &space, &pair.z1.scale(1.0 / sd)).unwrap().value;
        for m in [i0, i1] {
            // rounding slack for closed-form inverses
            if !(m.is_finite() && m.value() <= iz.value() * (1.0 + 1e-12)) {
                mod_fail += 1;
                println!("  {name}: modular {m} above {iz}");
            }
        }
    }
    let ok = errors.is_empty() && ulp_fail == 0 && mod_fail == 0 && cases == 100;
    report(
        7,
        "factor split",
        ok,
        format!("{cases} cases; product ulp violations {ulp_fail}; modular violations {mod_fail}; errors {errors:?}"),
    );
    assert!(ok);
}

fn satisfies(phi: &MOFunction, phi1: &MOFunction, p: &Point, u: f64, v: f64, level: f64) -> bool {
    let (f, f1) = (phi.eval(p, u * v).unwrap(), phi1.eval(p, v).unwrap());
    if f.is_infinite() || f1.is_infinite() {
        return false;
    }
    let (f, f1) = (f.value(), f1.value());
    (f1 + level - f).abs() <= 1e-8 * f.max(f1 + level)
}

#[test]
fn c8_maximizer() {
    let probe = MeasureSpace::uniform(0.0, 1.0, 1).unwrap();
    let cases: Vec<(MOFunction, MOFunction, f64, bool)> = vec![
        (MOFunction::nakano(e("1 + t/2"), true), MOFunction::nakano(e("2 + t"), true), 10.0, true),
        (MOFunction::nakano(e("1 + t/2"), true), MOFunction::nakano(e("2 + t"), true), 10.0, false),
        (MOFunction::hinge(Expr::T), MOFunction::power(2.0, 1.0), 5.0, true),
        (MOFunction::linear(2.0), MOFunction::power(3.0, 1.0), 2.0, false),
        (
            MOFunction::capped(MOFunction::power(2.0, 1.0), 3.0),
            MOFunction::capped(MOFunction::linear(1.0), 2.0),
            4.0,
            true,
        ),
        (MOFunction::custom(e("u*u + t*u")), MOFunction::power(3.0, 1.0), 3.0, true),
    ];
    let specs: Vec<ConjugateSpec> = cases
        .iter()
        .map(|(phi, phi1, a, fast)| {
            let s = ConjugateSpec::new(phi.clone(), phi1.clone(), &probe).unwrap().truncated(*a).unwrap();
            if *fast {
                s
            } else {
                s.with_solver(no_fast()).unwrap()
            }
        })
        .collect();
    let mut rng = stream(8, 0);
    let (mut n, mut eq_fail, mut max_fail, mut skipped) = (0, 0, 0, 0);
    let mut worst = 0.0f64;
    while n < 500 {
        let spec = &specs[n % specs.len()];
        let (phi, phi1) = (spec.phi(), spec.phi1());
        let p = Point::cell(rng.gen::<f64>());
        let u = log_uniform(&mut rng, 1e-2, 1e2);
        if spec.ominus_trunc(&p, 1.5 * u).unwrap().is_infinite() {
            skipped += 1;
            continue;
        }
        n += 1;
        let x = spec.maximizer(&p, u).unwrap();
        let level = spec.ominus_trunc(&p, u).unwrap().value();
        let (f, f1) = (phi.eval(&p, u * x).unwrap().value(), phi1.eval(&p, x).unwrap().value());
        let err = (f1 + level - f).abs() / f.max(f1 + level).max(f64::MIN_POSITIVE);
        worst = worst.max(err);
        if !satisfies(phi, phi1, &p, u, x, level) {
            eq_fail += 1;
            println!("  equality: t={} u={u} x={x} rel {err:.2e}", p.t);
        }
        let v_max = spec.s_range(&p).unwrap().hi.value();
        let start = x + 1e-6;
        let mut probes: Vec<f64> = (1..=256).map(|k| start + (v_max - start) * k as f64 / 256.0).collect();
        probes.extend((0..40).map(|k| start + 1e-6 * 2f64.powi(k)));
        if probes.iter().any(|&v| v > start && v <= v_max && satisfies(phi, phi1, &p, u, v, level)) {
            max_fail += 1;
            println!("  maximality: t={} u={u} x={x}", p.t);
        }
    }
    let ok = eq_fail == 0 && max_fail == 0;
    report(
        8,
        "maximizer",
        ok,
        format!("{n} samples ({skipped} skipped with infinite value at 3u/2); equality failures {eq_fail} (worst rel {worst:.1e}); maximality failures {max_fail}"),
    );
    assert!(ok);
}
