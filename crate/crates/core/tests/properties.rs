use mokit_core::conjugate::SupSolverConfig;
use mokit_core::family;
use mokit_core::measure::{partition_unbounded, Cell};
use mokit_core::spaces::luxemburg_norm;
use mokit_core::{ConjugateSpec, Expr, ExtReal, MOFunction, MeasureSpace, MusielakOrlicz, Point, SimpleFunction};
use proptest::prelude::*;

fn families() -> Vec<MOFunction> {
    let e = |s: &str| Expr::parse(s).unwrap();
    vec![
        MOFunction::nakano(e("1 + 2*t"), true),
        MOFunction::power(2.5, 0.5),
        MOFunction::hinge(e("t")),
        MOFunction::linear(e("2 - t")),
        MOFunction::indicator(e("1 + t")),
        MOFunction::capped(MOFunction::power(2.0, 1.0), e("1 + t")),
        MOFunction::custom(e("u*u + t*u")),
        MOFunction::custom(e("pow(max(u - t, 0), 2)")),
    ]
}

fn ext() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        Just(ExtReal::ZERO),
        Just(ExtReal::INFINITY),
        (0.0f64..1e6).prop_map(|v| ExtReal::new(v).unwrap()),
    ]
}

fn space_and_values() -> impl Strategy<Value = (MeasureSpace, Vec<f64>, Vec<f64>)> {
    (1usize..8).prop_flat_map(|n| {
        (
            prop::collection::vec((0.0f64..1.0, 1e-3f64..1.0), n),
            prop::collection::vec(prop_oneof![Just(0.0), -10.0f64..10.0], n),
            prop::collection::vec(prop_oneof![Just(0.0), -10.0f64..10.0], n),
        )
            .prop_map(|(cells, x, y)| {
                let cells = cells.into_iter().map(|(rep, mass)| Cell { rep, mass }).collect();
                (MeasureSpace::new(cells, vec![]).unwrap(), x, y)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn extended_arithmetic_never_nan(a in ext(), b in ext()) {
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert!(!(a * b).value().is_nan());
        prop_assert_eq!(ExtReal::ZERO * b, ExtReal::ZERO);
        prop_assert!(a.min(b) <= a.max(b));
    }

    #[test]
    fn inverse_is_a_lower_inverse(k in 0usize..8, t in 0.0f64..1.0, w in 0.0f64..1e3) {
        let phi = &families()[k];
        let p = Point::cell(t);
        let inv = phi.inverse(&p, w).unwrap();
        if inv.is_finite() {
            let back = phi.eval(&p, inv.value()).unwrap();
            prop_assert!(back.is_finite() && back.value() <= w * (1.0 + 1e-12) + 1e-300, "{} -> {} -> {}", w, inv, back);
            // slightly past the inverse the function exceeds w
            let past = inv.value() * (1.0 + 1e-8) + 1e-12;
            prop_assert!(phi.eval(&p, past).unwrap() >= ExtReal::new(w).unwrap());
        }
    }

    #[test]
    fn inverse_is_monotone(k in 0usize..8, t in 0.0f64..1.0, w1 in 0.0f64..1e3, w2 in 0.0f64..1e3) {
        let phi = &families()[k];
        let p = Point::cell(t);
        let (lo, hi) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
        let (a, b) = (phi.inverse(&p, lo).unwrap(), phi.inverse(&p, hi).unwrap());
        prop_assert!(a.value() <= b.value() * (1.0 + 1e-9));
    }

    #[test]
    fn norm_is_subadditive((space, x, y) in space_and_values(), k in 0usize..8) {
        let phi = &families()[k];
        let x = SimpleFunction::new(&space, x).unwrap();
        let y = SimpleFunction::new(&space, y).unwrap();
        let sum = SimpleFunction::new(&space, x.values().iter().zip(y.values()).map(|(a, b)| a + b).collect()).unwrap();
        let (nx, ny, ns) = (
            luxemburg_norm(phi, &space, &x).unwrap(),
            luxemburg_norm(phi, &space, &y).unwrap(),
            luxemburg_norm(phi, &space, &sum).unwrap(),
        );
        if nx.value.is_finite() && ny.value.is_finite() {
            prop_assert!(ns.bracket.0 <= nx.value.value() + ny.value.value());
        }
    }

    #[test]
    fn closed_forms_match_search(t in 0.0f64..1.0, u in 1e-2f64..1e2, q in 1.0f64..3.0, dp in 0.2f64..2.0) {
        let space = MeasureSpace::uniform(0.0, 1.0, 1).unwrap();
        let phi = MOFunction::nakano(q, true);
        let phi1 = MOFunction::nakano(q + dp, true);
        let fast = ConjugateSpec::new(phi.clone(), phi1.clone(), &space).unwrap();
        let slow = fast.clone().with_solver(SupSolverConfig { fast_paths: false, ..Default::default() }).unwrap();
        let p = Point::cell(t);
        let (a, b) = (fast.ominus(&p, u).unwrap(), slow.ominus(&p, u).unwrap());
        prop_assert!((a.value() - b.value()).abs() <= 1e-7 * a.value().max(1e-300), "{} vs {}", a, b);
    }

    #[test]
    fn conjugate_is_a_young_function(k in 0usize..4, t in 0.0f64..1.0, u1 in 0.0f64..5.0, u2 in 0.0f64..5.0) {
        let pairs = [
            (MOFunction::hinge(Expr::T), MOFunction::power(2.0, 1.0)),
            (MOFunction::power(1.5, 1.0), MOFunction::power(3.0, 1.0)),
            (MOFunction::custom(Expr::parse("u*u + t*u").unwrap()), MOFunction::capped(MOFunction::power(3.0, 1.0), 2.0)),
            (MOFunction::power(2.0, 1.0), MOFunction::capped(MOFunction::linear(1.0), 1.5)),
        ];
        let space = MeasureSpace::uniform(0.0, 1.0, 1).unwrap();
        let spec = ConjugateSpec::new(pairs[k].0.clone(), pairs[k].1.clone(), &space).unwrap();
        let p = Point::cell(t);
        let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
        let (a, b, m) = (spec.ominus(&p, lo).unwrap(), spec.ominus(&p, hi).unwrap(), spec.ominus(&p, 0.5 * (lo + hi)).unwrap());
        prop_assert!(a.value() <= b.value() * (1.0 + 1e-9) + 1e-300);
        if a.is_finite() && b.is_finite() {
            prop_assert!(m.value() <= 0.5 * (a.value() + b.value()) * (1.0 + 1e-9) + 1e-12);
        }
    }

    #[test]
    fn unbounded_partition_covers(reps in prop::collection::vec((0.0f64..1.0, 1e-3f64..0.5), 1..20), a in 0.1f64..4.0, w in 1.0f64..200.0) {
        let space = MeasureSpace::new(reps.into_iter().map(|(rep, mass)| Cell { rep, mass }).collect(), vec![]).unwrap();
        let phi = MOFunction::linear(w);
        let part = partition_unbounded(&space, &phi, a).unwrap();
        let mut seen = vec![0; part.space.len()];
        for set in &part.sets {
            for &i in set.indices() {
                seen[i] += 1;
            }
            prop_assert!(set.mass(&part.space) <= 1.0 / (w * a).floor().max(0.0).max(1.0) + 1e-12 || set.len() == 1);
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        prop_assert!((part.space.total_mass() - space.total_mass()).abs() <= 1e-12 * space.total_mass());
    }

    #[test]
    fn family_display_round_trips(k in 0usize..8) {
        let phi = &families()[k];
        let back = family::parse(&phi.to_string()).unwrap();
        prop_assert_eq!(back.to_string(), phi.to_string());
        for t in [0.0, 0.3, 0.9] {
            for u in [0.0, 0.5, 2.0] {
                let p = Point::cell(t);
                prop_assert_eq!(back.eval(&p, u).unwrap(), phi.eval(&p, u).unwrap());
            }
        }
    }
}
