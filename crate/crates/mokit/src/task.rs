//! Scenario construction and task dispatch.

use std::fmt;
use std::path::{Path, PathBuf};

use mokit_core::conjugate::SupSolverConfig;
use mokit_core::error::Error as CoreError;
use mokit_core::factorization::{compare_inverses, default_u_grid, factor_split, factorization_verify, Verdict};
use mokit_core::measure::{Atom, Cell};
use mokit_core::rng::{self, log_uniform};
use mokit_core::spaces::{luxemburg_norm, modular, multiplier_norm};
use mokit_core::young::Tabulated;
use mokit_core::{family, ConjugateSpec, Expr, ExtReal, MOFunction, MeasureSpace, MusielakOrlicz, SimpleFunction};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::config::{parse_f64, Config, ConfigError, Entry};
use crate::report::{ext, num, nums, Assertion, Report, Table};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Task {
    /// Conjugate `phi (-) phi_1` on a grid of u at every point.
    Conj,
    /// Modular and Luxemburg norm of `x`.
    Norm,
    /// Bracket on the multiplier norm of `y` from `L^{phi_1}` to `L^phi`.
    Mnorm,
    /// Comparison of `phi^{-1}` with `phi_1^{-1} phi_0^{-1}`.
    Compare,
    /// Constructive factorization `z = z0 z1`.
    Split,
    /// Both directions of `L^{phi (-) phi_1} (.) L^{phi_1} = L^phi` on samples.
    Factorize,
    /// Hinge / linear example: indicator conjugate, failed upper comparison,
    /// factorization still holding.
    #[value(name = "repro-example51")]
    ReproExample51,
    /// Variable exponent conjugate against its closed form.
    #[value(name = "repro-nakano")]
    ReproNakano,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Conj => "conj",
            Task::Norm => "norm",
            Task::Mnorm => "mnorm",
            Task::Compare => "compare",
            Task::Split => "split",
            Task::Factorize => "factorize",
            Task::ReproExample51 => "repro-example51",
            Task::ReproNakano => "repro-nakano",
        }
    }

    /// Accepted keys per section.
    pub fn keys(self) -> Vec<(&'static str, &'static [&'static str])> {
        const SPACE: &[&str] = &["domain", "cells", "reps", "masses", "atoms"];
        let (functions, task, values): (&[&str], &[&str], &[&str]) = match self {
            Task::Conj => (&["phi", "phi1"], &["seed", "u_grid", "truncation", "maximizer", "fast_paths", "coarse_grid"], &[]),
            Task::Norm => (&["phi"], &["seed"], &["x"]),
            Task::Mnorm => (&["phi", "phi1"], &["seed", "budget"], &["y"]),
            Task::Compare => {
                (&["phi", "phi0", "phi1"], &["seed", "u_grid", "expect_prec", "expect_succ", "expect_approx"], &[])
            }
            Task::Split => (&["phi", "phi0", "phi1"], &["seed", "d"], &["z"]),
            Task::Factorize => (&["phi", "phi1"], &["seed", "samples"], &[]),
            Task::ReproExample51 => (&[], &["seed", "samples"], &[]),
            Task::ReproNakano => (&["p", "q"], &["seed", "u_grid", "tol", "fast_paths"], &[]),
        };
        let mut out = vec![("space", SPACE), ("task", task)];
        if !functions.is_empty() {
            out.push(("functions", functions));
        }
        if !values.is_empty() {
            out.push(("values", values));
        }
        out
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A checked scenario, ready to run.
pub struct Scenario<'a> {
    pub task: Task,
    pub cfg: &'a Config,
    pub base: PathBuf,
    pub seed: u64,
    pub space: MeasureSpace,
}

impl<'a> Scenario<'a> {
    pub fn new(task: Task, cfg: &'a Config, base: &Path, seed: Option<u64>) -> Result<Self, RunError> {
        cfg.check_keys(&task.keys(), &format!("task {task}"))?;
        let seed = match (seed, cfg.get("task", "seed")) {
            (Some(s), _) => s,
            (None, Some(e)) => e.u64()?,
            (None, None) => 0,
        };
        let space = build_space(cfg, task)?;
        Ok(Scenario { task, cfg, base: base.to_path_buf(), seed, space })
    }

    fn entry(&self, section: &str, key: &str) -> Option<&'a Entry> {
        self.cfg.get(section, key)
    }

    fn missing(&self, section: &str, key: &str) -> ConfigError {
        let line = self.cfg.sections.get(section).map_or(1, |s| s.line);
        ConfigError { line, col: 1, msg: format!("task {} needs '{key}' in [{section}]", self.task) }
    }

    fn function(&self, key: &str) -> Result<MOFunction, RunError> {
        let e = self.entry("functions", key).ok_or_else(|| self.missing("functions", key))?;
        let base = self.base.clone();
        let mut load = |file: &str| load_table(&base.join(file));
        let f = family::parse_with_tables(&e.value, &mut load).map_err(|err| e.core_error(err))?;
        f.validate(&self.space).map_err(|err| e.core_error(err))?;
        Ok(f)
    }

    fn opt<T>(&self, key: &str, get: impl Fn(&Entry) -> Result<T, ConfigError>) -> Result<Option<T>, ConfigError> {
        self.entry("task", key).map(get).transpose()
    }

    fn u_grid(&self, default: Vec<f64>) -> Result<Vec<f64>, ConfigError> {
        let Some(e) = self.entry("task", "u_grid") else { return Ok(default) };
        let grid = if let Some((name, args, off)) = call(&e.value) {
            let sub = Entry { value: args.to_string(), line: e.line, col: e.col + off };
            let v = sub.list()?;
            if v.len() != 3 || !(v[2] >= 1.0) || v[2].fract() != 0.0 {
                return Err(e.error(format!("{name}(lo, hi, n) needs two bounds and a positive count")));
            }
            let n = v[2] as usize;
            let at = |k: usize| if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
            match name {
                "lin" => (0..n).map(|k| v[0] + (v[1] - v[0]) * at(k)).collect(),
                "log" if v[0] > 0.0 && v[1] > 0.0 => {
                    (0..n).map(|k| (v[0].ln() + (v[1].ln() - v[0].ln()) * at(k)).exp()).collect()
                }
                "log" => return Err(e.error("log grid bounds must be positive")),
                other => return Err(e.error(format!("unknown grid '{other}' (expected lin, log or a list)"))),
            }
        } else {
            e.list()?
        };
        if let Some(bad) = grid.iter().find(|u| !(**u >= 0.0) || u.is_infinite()) {
            return Err(e.error(format!("grid values must be finite and nonnegative, found {bad}")));
        }
        Ok(grid)
    }

    fn vector(&self, key: &str, rng: &mut ChaCha8Rng) -> Result<SimpleFunction, RunError> {
        let e = self.entry("values", key).ok_or_else(|| self.missing("values", key))?;
        let n = self.space.len();
        let values = match call(&e.value) {
            Some((name, args, off)) => {
                let sub = Entry { value: args.to_string(), line: e.line, col: e.col + off };
                match name {
                    "const" => {
                        let c = sub.list()?;
                        if c.len() != 1 {
                            return Err(e.error("const(c) takes one value").into());
                        }
                        vec![c[0]; n]
                    }
                    "indicator" => {
                        let mut v = vec![0.0; n];
                        for (pos, item) in sub.items() {
                            let i: usize = item.parse().map_err(|_| sub.error_at(pos, format!("expected an index, found '{item}'")))?;
                            if i >= n {
                                return Err(sub.error_at(pos, format!("index {i} out of range for {n} points")).into());
                            }
                            v[i] = 1.0;
                        }
                        v
                    }
                    "random" => {
                        let a = sub.list()?;
                        let zero = if a.len() == 3 { a[2] } else { 0.0 };
                        if !(a.len() == 2 || a.len() == 3) || !(a[0] > 0.0 && a[1] >= a[0] && a[1].is_finite()) || !(0.0..1.0).contains(&zero) {
                            return Err(e.error("random(lo, hi[, zero_prob]) needs 0 < lo <= hi and zero_prob in [0, 1)").into());
                        }
                        (0..n).map(|_| if rng.gen::<f64>() < zero { 0.0 } else { log_uniform(rng, a[0], a[1]) }).collect()
                    }
                    "file" => {
                        let name = args.trim();
                        let Some(name) = name.strip_prefix('"').and_then(|n| n.strip_suffix('"')) else {
                            return Err(sub.error("file takes a double-quoted path").into());
                        };
                        let v = load_vector(&self.base.join(name)).map_err(|msg| e.error(msg))?;
                        if v.len() != n {
                            return Err(e.error(format!("expected {n} values (one per point), found {}", v.len())).into());
                        }
                        v
                    }
                    other => return Err(e.error(format!("unknown vector form '{other}'")).into()),
                }
            }
            None => {
                let v = e.list()?;
                if v.len() != n {
                    return Err(e.error(format!("expected {n} values (one per point), found {}", v.len())).into());
                }
                v
            }
        };
        SimpleFunction::new(&self.space, values).map_err(|err| RunError::from(e.core_error(err)))
    }

    fn solver(&self) -> Result<SupSolverConfig, ConfigError> {
        let mut s = SupSolverConfig::default();
        if let Some(f) = self.opt("fast_paths", Entry::bool)? {
            s.fast_paths = f;
        }
        if let Some(e) = self.entry("task", "coarse_grid") {
            s.coarse_grid = e.usize()?;
            if s.coarse_grid < 8 {
                return Err(e.error("coarse_grid must be at least 8"));
            }
        }
        Ok(s)
    }

    fn echo(&self, functions: &[(&str, &MOFunction)], params: Value, values: &[(&str, &SimpleFunction)]) -> Value {
        let f: Map<String, Value> = functions.iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect();
        let v: Map<String, Value> = values.iter().map(|(k, v)| (k.to_string(), nums(v.values()))).collect();
        json!({
            "space": space_echo(&self.space),
            "functions": f,
            "parameters": params,
            "values": v,
        })
    }

    pub fn run(&self) -> Result<Report, RunError> {
        match self.task {
            Task::Conj => self.conj(),
            Task::Norm => self.norm(),
            Task::Mnorm => self.mnorm(),
            Task::Compare => self.compare(),
            Task::Split => self.split(),
            Task::Factorize => self.factorize(),
            Task::ReproExample51 => self.example51(),
            Task::ReproNakano => self.nakano(),
        }
    }

    fn report(&self, scenario: Value, results: Value, tables: Vec<Table>, assertions: Vec<Assertion>) -> Report {
        Report { task: self.task.name().into(), seed: self.seed, scenario, results, tables, assertions }
    }

    fn conj(&self) -> Result<Report, RunError> {
        let (phi, phi1) = (self.function("phi")?, self.function("phi1")?);
        let grid = self.u_grid(log_grid(1e-3, 1e3, 41))?;
        let solver = self.solver()?;
        let mut spec = ConjugateSpec::new(phi.clone(), phi1.clone(), &self.space)?.with_solver(solver)?;
        let a = self.opt("truncation", Entry::f64)?;
        if let Some(a) = a {
            spec = spec.truncated(a)?;
        }
        let with_max = self.opt("maximizer", Entry::bool)?.unwrap_or(false);
        if with_max && !a.is_some_and(|a| a > 1.0 && a.is_finite()) {
            let e = self.entry("task", "maximizer").expect("key is present");
            return Err(e.error("maximizer needs a finite truncation > 1").into());
        }
        let cls = spec.classification().clone();
        let mut points = Table::new("points", &["index", "t", "mass", "label", "b_phi", "b_phi1"]);
        let mut columns = vec!["index", "t", "u", "value"];
        if with_max {
            columns.push("maximizer");
        }
        let mut values = Table::new("conjugate", &columns);
        let mut monotone = true;
        for (i, p) in self.space.points().enumerate() {
            points.push(vec![json!(i), num(p.t), num(self.space.mass(i)), json!(cls.label(i).name()), ext(cls.b_phi(i)), ext(cls.b_phi1(i))]);
            let mut prev = ExtReal::ZERO;
            let mut sorted: Vec<f64> = grid.clone();
            sorted.sort_by(f64::total_cmp);
            for &u in &sorted {
                let v = spec.eval(&p, u)?;
                monotone &= v >= prev;
                prev = v;
                let mut row = vec![json!(i), num(p.t), num(u), ext(v)];
                if with_max {
                    // points and arguments outside the maximizer's domain get an empty cell
                    row.push(match spec.maximizer(&p, u) {
                        Ok(x) => num(x),
                        Err(CoreError::Precondition(_) | CoreError::Domain { .. }) => Value::Null,
                        Err(err) => return Err(err.into()),
                    });
                }
                values.push(row);
            }
        }
        let params = json!({ "u_grid": nums(&grid), "truncation": a.map_or(json!("inf"), num), "maximizer": with_max, "fast_paths": solver.fast_paths, "coarse_grid": solver.coarse_grid });
        let results = json!({ "labels": label_counts(&cls), "evaluations": values.rows.len() });
        let asserts = vec![Assertion::new("nondecreasing in u", monotone, "")];
        Ok(self.report(self.echo(&[("phi", &phi), ("phi1", &phi1)], params, &[]), results, vec![points, values], asserts))
    }

    fn norm(&self) -> Result<Report, RunError> {
        let phi = self.function("phi")?;
        let mut rng = rng::stream(self.seed, rng::streams::SCENARIO);
        let x = self.vector("x", &mut rng)?;
        let m = modular(&phi, &self.space, &x)?.value;
        let n = luxemburg_norm(&phi, &self.space, &x)?;
        let unit = n.value.value() > 1.0 || (m.is_finite() && m.value() <= n.value.value());
        let results = json!({
            "modular": ext(m),
            "norm": ext(n.value),
            "bracket": [num(n.bracket.0), num(n.bracket.1)],
            "iterations": n.iterations,
        });
        let asserts = vec![Assertion::new("modular below norm on the unit ball", unit, format!("I = {m}, norm = {}", n.value))];
        Ok(self.report(self.echo(&[("phi", &phi)], json!({}), &[("x", &x)]), results, vec![], asserts))
    }

    fn mnorm(&self) -> Result<Report, RunError> {
        let (phi, phi1) = (self.function("phi")?, self.function("phi1")?);
        let budget = self.opt("budget", Entry::usize)?.unwrap_or(32);
        let mut rng = rng::stream(self.seed, rng::streams::SCENARIO);
        let y = self.vector("y", &mut rng)?;
        let est = multiplier_norm(&phi1, &phi, &self.space, &y, budget, self.seed)?;
        let results = json!({
            "lower": num(est.lower),
            "upper": num(est.upper),
            "conj_norm": num(est.conj_norm),
            "witness": nums(est.witness.values()),
            "witness_kind": est.witness_kind.name(),
            "inclusion_constant": num(est.inclusion_constant),
            "candidates": est.candidates,
        });
        let asserts = vec![Assertion::new(
            "lower <= upper",
            est.lower <= est.upper,
            format!("{} <= {}", est.lower, est.upper),
        )];
        let params = json!({ "budget": budget });
        Ok(self.report(self.echo(&[("phi", &phi), ("phi1", &phi1)], params, &[("y", &y)]), results, vec![], asserts))
    }

    fn compare(&self) -> Result<Report, RunError> {
        let (phi, phi0, phi1) = (self.function("phi")?, self.function("phi0")?, self.function("phi1")?);
        let grid = self.u_grid(default_u_grid())?;
        let r = compare_inverses(&phi, &phi0, &phi1, &self.space, &grid)?;
        let witness = |w: &Option<mokit_core::factorization::Witness>| match w {
            Some(w) => json!({ "index": w.index, "t": num(w.t), "u": num(w.u), "num": ext(w.num), "den": ext(w.den), "ratio": ext(w.ratio()) }),
            None => Value::Null,
        };
        let results = json!({
            "prec": r.prec.name(),
            "succ": r.succ.name(),
            "approx": r.approx.name(),
            "best_c_lower": num(r.best_c_lower),
            "best_c_upper": ext(r.best_c_upper),
            "lower_witness": witness(&r.lower_witness),
            "upper_witness": witness(&r.upper_witness),
            "skipped": r.skipped,
            "evaluated": r.evaluated,
        });
        let mut asserts = Vec::new();
        for (key, got) in [("expect_prec", r.prec), ("expect_succ", r.succ), ("expect_approx", r.approx)] {
            if let Some(e) = self.entry("task", key) {
                let want = match e.value.as_str() {
                    "holds" => Verdict::HoldsOnGrid,
                    "fails" => Verdict::Fails,
                    v => return Err(e.error(format!("expected 'holds' or 'fails', found '{v}'")).into()),
                };
                asserts.push(Assertion::new(key, got == want, format!("got {}", got.name())));
            }
        }
        let params = json!({ "u_grid": nums(&grid) });
        Ok(self.report(self.echo(&[("phi", &phi), ("phi0", &phi0), ("phi1", &phi1)], params, &[]), results, vec![], asserts))
    }

    fn split(&self) -> Result<Report, RunError> {
        let (phi, phi0, phi1) = (self.function("phi")?, self.function("phi0")?, self.function("phi1")?);
        let d = self.opt("d", Entry::f64)?;
        let mut rng = rng::stream(self.seed, rng::streams::SCENARIO);
        let z = self.vector("z", &mut rng)?;
        let pair = factor_split(&phi, &phi0, &phi1, &self.space, &z, d)?;
        let mut table = Table::new("split", &["index", "t", "z", "z0", "z1"]);
        let mut exact = true;
        for (i, p) in self.space.points().enumerate() {
            let (a, b, want) = (pair.z0.values()[i], pair.z1.values()[i], z.values()[i]);
            exact &= (a * b - want).abs() <= want.next_up() - want;
            table.push(vec![json!(i), num(p.t), num(want), num(a), num(b)]);
        }
        let results = json!({
            "d": num(pair.d),
            "scale": num(pair.scale),
            "c": num(pair.c),
            "modular_z": ext(pair.modular_z),
            "modular_parts": [ext(pair.modular_parts[0]), ext(pair.modular_parts[1])],
            "norm_bounds": nums(&pair.norm_bounds),
            "fallback_points": pair.fallback_points,
        });
        let asserts = vec![
            Assertion::new("z0 z1 = z within one ulp", exact, ""),
            Assertion::new("modular bound for z0", pair.bound_ok[0], format!("{} vs {}", pair.modular_parts[0], pair.modular_z)),
            Assertion::new("modular bound for z1", pair.bound_ok[1], format!("{} vs {}", pair.modular_parts[1], pair.modular_z)),
        ];
        let params = json!({ "d": d.map_or(Value::Null, num) });
        Ok(self.report(self.echo(&[("phi", &phi), ("phi0", &phi0), ("phi1", &phi1)], params, &[("z", &z)]), results, vec![table], asserts))
    }

    fn factorize(&self) -> Result<Report, RunError> {
        let (phi, phi1) = (self.function("phi")?, self.function("phi1")?);
        let samples = self.opt("samples", Entry::usize)?.unwrap_or(200);
        let r = factorization_verify(&phi1, &phi, &self.space, samples, self.seed)?;
        let results = factorization_json(&r);
        let asserts = vec![
            Assertion::new("inclusion", r.inclusion.passed, format!("worst ratio {} <= {}", r.inclusion.worst_ratio, r.inclusion.limit)),
            Assertion::new("product", r.product.passed, format!("worst K {} <= {}", r.product.worst_ratio, r.product.limit)),
        ];
        let params = json!({ "samples": samples });
        Ok(self.report(self.echo(&[("phi", &phi), ("phi1", &phi1)], params, &[]), results, vec![], asserts))
    }

    fn example51(&self) -> Result<Report, RunError> {
        let phi = MOFunction::hinge(Expr::T);
        let phi1 = MOFunction::linear(1.0);
        let samples = self.opt("samples", Entry::usize)?.unwrap_or(200);
        let spec = ConjugateSpec::new(phi.clone(), phi1.clone(), &self.space)?;
        let mut mismatches = Vec::new();
        let grid: Vec<f64> = (0..=40).map(|k| k as f64 / 20.0).collect();
        for (i, p) in self.space.points().enumerate() {
            for &u in &grid {
                let want = if u <= 1.0 { ExtReal::ZERO } else { ExtReal::INFINITY };
                let got = spec.ominus(&p, u)?;
                if got != want {
                    mismatches.push(json!({ "index": i, "u": num(u), "value": ext(got) }));
                }
            }
        }
        let cmp = compare_inverses(&phi, &spec, &phi1, &self.space, &default_u_grid())?;
        let w = cmp.upper_witness.expect("a report always has witnesses");
        let (rn, rd) = w.replay(&phi, &spec, &phi1, &self.space)?;
        let replayed = rn == w.num && rd == Some(w.den);
        let ver = factorization_verify(&phi1, &phi, &self.space, samples, self.seed)?;
        let results = json!({
            "conjugate_mismatches": mismatches,
            "comparison": {
                "succ": cmp.succ.name(),
                "prec": cmp.prec.name(),
                "best_c_lower": num(cmp.best_c_lower),
                "witness": { "index": w.index, "t": num(w.t), "u": num(w.u), "num": ext(w.num), "den": ext(w.den) },
                "replayed": replayed,
            },
            "factorization": factorization_json(&ver),
        });
        let asserts = vec![
            Assertion::new("conjugate is the indicator of [0, 1]", mismatches.is_empty(), format!("{} mismatches", mismatches.len())),
            Assertion::new(
                "upper comparison fails with a replayable witness",
                cmp.succ == Verdict::Fails && w.t > 0.0 && w.u <= 1e-3 && replayed,
                format!("t = {}, u = {}", w.t, w.u),
            ),
            Assertion::new(
                "lower comparison holds with C >= 1 - 1e-9",
                cmp.prec == Verdict::HoldsOnGrid && cmp.best_c_lower >= 1.0 - 1e-9,
                format!("C = {}", cmp.best_c_lower),
            ),
            Assertion::new(
                "factorization holds with K <= 4",
                ver.passed,
                format!("inclusion {}, K = {}", ver.inclusion.worst_ratio, ver.product.worst_ratio),
            ),
        ];
        let params = json!({ "samples": samples, "u_grid": nums(&grid) });
        Ok(self.report(self.echo(&[("phi", &phi), ("phi1", &phi1)], params, &[]), results, vec![], asserts))
    }

    fn nakano(&self) -> Result<Report, RunError> {
        let expo = |key: &str, default: &str| -> Result<Expr, RunError> {
            match self.entry("functions", key) {
                Some(e) => {
                    let x = Expr::parse(&e.value).map_err(|err| e.core_error(err))?;
                    if x.uses_u() {
                        return Err(e.error("exponents may depend on t only").into());
                    }
                    Ok(x)
                }
                None => Ok(Expr::parse(default).expect("default exponent parses")),
            }
        };
        let (p, q) = (expo("p", "2 + t")?, expo("q", "1 + t/2")?);
        let tol = self.opt("tol", Entry::f64)?.unwrap_or(1e-6);
        let grid = self.u_grid(log_grid(1e-3, 1e3, 41))?;
        let phi = MOFunction::nakano(q.clone(), true);
        let phi1 = MOFunction::nakano(p.clone(), true);
        let spec = ConjugateSpec::new(phi.clone(), phi1.clone(), &self.space)?.with_solver(self.solver()?)?;
        let mut table = Table::new("nakano", &["index", "t", "u", "conjugate", "closed_form", "rel_err"]);
        let mut worst = 0.0f64;
        for (i, pt) in self.space.points().enumerate() {
            let (pv, qv) = (p.eval(pt.t, 0.0), q.eval(pt.t, 0.0));
            if !(pv > qv) {
                return Err(RunError::Usage(format!("need p > q, found p = {pv}, q = {qv} at t = {}", pt.t)));
            }
            let r = 1.0 / (1.0 / qv - 1.0 / pv);
            for &u in &grid {
                let exact = u.powf(r) / r;
                let got = spec.ominus(&pt, u)?;
                let err = if got.value() == exact { 0.0 } else { (got.value() - exact).abs() / exact.max(got.value()) };
                worst = worst.max(err);
                table.push(vec![json!(i), num(pt.t), num(u), ext(got), num(exact), num(err)]);
            }
        }
        let results = json!({ "max_rel_err": num(worst) });
        let asserts = vec![Assertion::new("conjugate matches u^r / r", worst <= tol, format!("{worst:e} <= {tol:e}"))];
        let params = json!({ "p": p.to_string(), "q": q.to_string(), "tol": num(tol), "u_grid": nums(&grid) });
        Ok(self.report(self.echo(&[("phi", &phi), ("phi1", &phi1)], params, &[]), results, vec![table], asserts))
    }
}

fn factorization_json(r: &mokit_core::factorization::FactorizationReport) -> Value {
    let dir = |d: &mokit_core::factorization::DirectionReport| {
        json!({
            "samples": d.samples,
            "worst_ratio": num(d.worst_ratio),
            "worst_sample": d.worst_sample,
            "limit": num(d.limit),
            "passed": d.passed,
        })
    };
    json!({
        "inclusion": dir(&r.inclusion),
        "product": dir(&r.product),
        "split_failures": r.split_failures,
        "split_fallbacks": r.split_fallbacks,
        "passed": r.passed,
    })
}

fn label_counts(cls: &mokit_core::DomainClassification) -> Value {
    use mokit_core::Label;
    let m: Map<String, Value> = [Label::ZeroZero, Label::ZeroInf, Label::InfZero, Label::InfInf, Label::Atom]
        .iter()
        .map(|&l| (l.name().to_string(), json!(cls.count(l))))
        .collect();
    Value::Object(m)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| 10f64.powf(lo.log10() + (hi.log10() - lo.log10()) * k as f64 / (n - 1) as f64)).collect()
}

/// Splits `name(args)` into its parts and the byte offset of `args`.
fn call(s: &str) -> Option<(&str, &str, usize)> {
    let open = s.find('(')?;
    let name = s[..open].trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic()) || !s.ends_with(')') {
        return None;
    }
    Some((name, &s[open + 1..s.len() - 1], open + 1))
}

fn space_echo(space: &MeasureSpace) -> Value {
    json!({
        "reps": nums(&space.cells().iter().map(|c| c.rep).collect::<Vec<_>>()),
        "masses": nums(&space.cells().iter().map(|c| c.mass).collect::<Vec<_>>()),
        "atoms": space.atoms().iter().map(|a| json!([num(a.omega), num(a.mass)])).collect::<Vec<_>>(),
    })
}

fn build_space(cfg: &Config, task: Task) -> Result<MeasureSpace, RunError> {
    let get = |k: &str| cfg.get("space", k);
    let header = cfg.sections.get("space").map_or(1, |s| s.line);
    let missing = |msg: &str| ConfigError { line: header, col: 1, msg: msg.into() };
    let cells: Vec<Cell> = match (get("domain"), get("cells"), get("reps"), get("masses")) {
        (None, None, None, None) => {
            let hi = match task {
                Task::ReproExample51 => 0.5,
                Task::ReproNakano => 1.0,
                _ => return Err(missing(&format!("task {task} needs a [space] with domain and cells, or reps and masses")).into()),
            };
            MeasureSpace::uniform(0.0, hi, 64)?.cells().to_vec()
        }
        (Some(d), Some(c), None, None) => {
            let b = d.list()?;
            if b.len() != 2 {
                return Err(d.error("domain takes two numbers: lo, hi").into());
            }
            let n = c.usize()?;
            MeasureSpace::uniform(b[0], b[1], n).map_err(|e| d.core_error(e))?.cells().to_vec()
        }
        (None, None, Some(r), Some(m)) => {
            let (reps, masses) = (r.list()?, m.list()?);
            if reps.len() != masses.len() {
                return Err(m.error(format!("{} masses for {} reps", masses.len(), reps.len())).into());
            }
            reps.into_iter().zip(masses).map(|(rep, mass)| Cell { rep, mass }).collect()
        }
        (Some(d), None, _, _) | (None, None, Some(d), None) => {
            return Err(d.error("give domain with cells, or reps with masses").into())
        }
        (_, Some(c), _, _) | (None, None, None, Some(c)) => {
            return Err(c.error("give domain with cells, or reps with masses").into())
        }
    };
    let mut atoms = Vec::new();
    if let Some(a) = get("atoms") {
        for (pos, item) in a.items() {
            let parsed = item.split_once(':').and_then(|(o, m)| Some((parse_f64(o)?, parse_f64(m)?)));
            let Some((omega, mass)) = parsed else {
                return Err(a.error_at(pos, format!("expected 'omega: mass', found '{item}'")).into());
            };
            atoms.push(Atom { omega, mass });
        }
    }
    let at = get("masses").or(get("domain")).or(get("atoms"));
    MeasureSpace::new(cells, atoms).map_err(|e| match at {
        Some(entry) => RunError::Config(entry.core_error(e)),
        None => RunError::Core(e),
    })
}

/// One-column CSV with header `value`.
fn load_vector(path: &Path) -> Result<Vec<f64>, String> {
    let fail = |msg: String| format!("{}: {msg}", path.display());
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| fail(e.to_string()))?;
    let headers = rd.headers().map_err(|e| fail(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["value"] {
        return Err(fail("expected the header value".into()));
    }
    let mut out = Vec::new();
    for (k, row) in rd.records().enumerate() {
        let row = row.map_err(|e| fail(e.to_string()))?;
        out.push(parse_f64(&row[0]).ok_or_else(|| fail(format!("row {}: bad number '{}'", k + 2, &row[0])))?);
    }
    Ok(out)
}

fn load_table(path: &Path) -> mokit_core::Result<Tabulated> {
    let fail = |msg: String| CoreError::InvalidFunction(format!("{}: {msg}", path.display()));
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| fail(e.to_string()))?;
    let headers = rd.headers().map_err(|e| fail(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "u", "value"] {
        return Err(fail("expected the header t,u,value".into()));
    }
    let mut records = Vec::new();
    for (k, row) in rd.records().enumerate() {
        let row = row.map_err(|e| fail(e.to_string()))?;
        let f = |j: usize| parse_f64(&row[j]).ok_or_else(|| fail(format!("row {}: bad number '{}'", k + 2, &row[j])));
        records.push((f(0)?, f(1)?, f(2)?));
    }
    Tabulated::from_records(&records).map_err(|e| fail(e.to_string()))
}

/// Reads, checks and runs a scenario file.
pub fn run_file(task: Task, path: &Path, seed: Option<u64>) -> Result<Report, RunError> {
    let src = std::fs::read_to_string(path).map_err(|source| RunError::Io { path: path.to_path_buf(), source })?;
    let cfg = Config::parse(&src)?;
    let base = path.parent().unwrap_or(Path::new("."));
    Scenario::new(task, &cfg, base, seed)?.run()
}
