//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::time::{Duration, Instant};

use legendre_dual::algebroid::{anchor_action_on, prolong_bracket, Bracket, ProlongSection, Scaled, SectionField};
use legendre_dual::connection::curvature;
use legendre_dual::expr::{eval_jet2, Env, Point, ScalarField, Sym};
use legendre_dual::legendre::{LegendrePair, WarmStart};
use legendre_dual::model::{Ctx, Side};
use legendre_dual::numeric::{sample_points, Jet1, SplitMix64};
use legendre_dual::verifier::{fixture, run_checks, Report, RunConfig, Scenario, Status};

type Outcome = Result<String, String>;

fn load(name: &str) -> Scenario {
    Scenario::parse(fixture(name).expect("bundled fixture")).expect("fixture parses")
}

fn points(sc: &Scenario, side: Side, count: usize) -> Vec<Vec<f64>> {
    let mut plan = sc.sampling.plan(side);
    plan.count = count;
    sample_points(&plan).expect("valid box")
}

fn pair(sc: &Scenario) -> &LegendrePair {
    sc.geometry.pair.as_ref().expect("fixture has a Lagrangian or Hamiltonian")
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn c1_round_trip() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0f64, 0.0f64);
    for name in ["FIX-EUCL", "FIX-QUAD", "FIX-EXP", "FIX-QUART"] {
        let sc = load(name);
        let m = sc.geometry.dims.m;
        let pr = pair(&sc);
        let warm = WarmStart::new();
        for u in points(&sc, Side::E, 1000) {
            let (x, y) = u.split_at(m);
            worst.0 = worst.0.max(pr.round_trip_e(x, y, &warm).map_err(|e| format!("{name}: {e}"))?);
        }
        let warm = WarmStart::new();
        for w in points(&sc, Side::Estar, 1000) {
            let (x, p) = w.split_at(m);
            worst.1 = worst.1.max(pr.round_trip_estar(x, p, &warm).map_err(|e| format!("{name}: {e}"))?);
        }
    }
    let t = start.elapsed();
    ensure(
        worst.0 <= 1e-9 && worst.1 <= 1e-9 && t <= Duration::from_secs(5),
        format!("max |φ_H∘φ_L − id| {:.2e}, max |φ_L∘φ_H − id| {:.2e}, {}", worst.0, worst.1, secs(t)),
    )
}

/// Brute-force `sup_y p·y − L(y)` on the lattice `−5 + k·1e-3`. In two
/// dimensions the fine lattice is searched in a ±0.1 window around the argmax
/// of a 0.05 lattice.
fn grid_conjugate(l: &dyn Fn(&[f64]) -> f64, p: &[f64]) -> f64 {
    const STEP: f64 = 1e-3;
    let fine = |k: i64| -5.0 + k as f64 * STEP;
    let obj = |y: &[f64]| p.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() - l(y);
    match p.len() {
        1 => (0..=10_000).map(|k| obj(&[fine(k)])).fold(f64::NEG_INFINITY, f64::max),
        2 => {
            let mut best = (f64::NEG_INFINITY, 0i64, 0i64);
            for i in (0..=10_000).step_by(50) {
                for j in (0..=10_000).step_by(50) {
                    let v = obj(&[fine(i), fine(j)]);
                    if v > best.0 {
                        best = (v, i, j);
                    }
                }
            }
            let mut sup = f64::NEG_INFINITY;
            for i in (best.1 - 100).max(0)..=(best.1 + 100).min(10_000) {
                for j in (best.2 - 100).max(0)..=(best.2 + 100).min(10_000) {
                    sup = sup.max(obj(&[fine(i), fine(j)]));
                }
            }
            sup
        }
        n => panic!("no grid oracle for dimension {n}"),
    }
}

fn c2_conjugate_oracle() -> Outcome {
    type Lag = fn(&[f64]) -> f64;
    let cases: [(&str, Lag); 4] = [
        ("FIX-EUCL", |y| (y[0] * y[0] + y[1] * y[1]) / 2.0),
        ("FIX-QUAD", |y| y[0] * y[0] + y[0] * y[1] + y[1] * y[1]),
        ("FIX-EXP", |y| y[0].exp()),
        ("FIX-QUART", |y| y[0].powi(4) / 4.0 + y[0] * y[0] / 2.0),
    ];
    let mut worst = 0.0f64;
    for (name, l) in cases {
        let sc = load(name);
        let m = sc.geometry.dims.m;
        let pr = pair(&sc);
        let warm = WarmStart::new();
        for w in points(&sc, Side::Estar, 100) {
            let (x, p) = w.split_at(m);
            let h = pr.hamiltonian(x, p, &warm).map_err(|e| format!("{name}: {e}"))?;
            worst = worst.max((h - grid_conjugate(&l, p)).abs());
        }
    }
    ensure(worst <= 1e-4, format!("max |H − grid sup| {worst:.2e} over 4 fixtures × 100 points"))
}

fn c3_hessian_duality() -> Outcome {
    let mut worst = 0.0f64;
    for name in ["FIX-QUAD", "FIX-EXP"] {
        let sc = load(name);
        let m = sc.geometry.dims.m;
        let pr = pair(&sc);
        let warm = WarmStart::new();
        for w in points(&sc, Side::Estar, 1000) {
            let (x, p) = w.split_at(m);
            worst = worst.max(pr.hessian_duality(x, p, &warm).map_err(|e| format!("{name}: {e}"))?);
        }
    }
    ensure(worst <= 1e-8, format!("max |inv(H^ab) − L_ab∘φ_H| {worst:.2e}"))
}

/// Largest of `|ad − fd|` over gradient and Hessian entries, divided by
/// `max(1, |ad|)`, with central differences of step 1e-5: of the values for
/// the gradient, and of the first-order dual-number gradient for the Hessian.
fn ad_vs_fd(field: &ScalarField, pt: &Point, active: &[Sym]) -> f64 {
    use legendre_dual::expr::Ns;
    const H: f64 = 1e-5;
    let jet = eval_jet2(field, pt, active).expect("field evaluates");
    let n = active.len();
    let moved = |k: usize, d: f64| {
        let mut q = pt.clone();
        match active[k] {
            Sym::Coord(Ns::X, i) => q.x[i] += d,
            Sym::Coord(Ns::Chi, i) => q.chi[i] += d,
            Sym::Coord(Ns::Y, i) => q.y[i] += d,
            Sym::Coord(Ns::P, i) => q.p[i] += d,
            Sym::Other(_) => unreachable!(),
        }
        q
    };
    let value = |q: &Point| field.eval(&Env { x: &q.x, chi: &q.chi, y: &q.y, p: &q.p }).expect("field evaluates");
    let gradient = |q: &Point| -> Vec<f64> {
        let lift = |ns: Ns, vals: &[f64]| -> Vec<Jet1<f64>> {
            vals.iter()
                .enumerate()
                .map(|(i, &v)| match active.iter().position(|s| *s == Sym::Coord(ns, i)) {
                    Some(k) => Jet1::variable(v, k, n),
                    None => Jet1::constant(v),
                })
                .collect()
        };
        let (x, chi, y, p) = (lift(Ns::X, &q.x), lift(Ns::Chi, &q.chi), lift(Ns::Y, &q.y), lift(Ns::P, &q.p));
        let j = field.eval(&Env { x: &x, chi: &chi, y: &y, p: &p }).expect("field evaluates");
        (0..n).map(|k| j.grad(k)).collect()
    };
    let rel = |ad: f64, fd: f64| (ad - fd).abs() / ad.abs().max(1.0);
    let mut worst = 0.0f64;
    for i in 0..n {
        let (qp, qm) = (moved(i, H), moved(i, -H));
        worst = worst.max(rel(jet.grad(i), (value(&qp) - value(&qm)) / (2.0 * H)));
        let (gp, gm) = (gradient(&qp), gradient(&qm));
        for j in 0..n {
            worst = worst.max(rel(jet.hess(i, j), (gp[j] - gm[j]) / (2.0 * H)));
        }
    }
    worst
}

fn c4_ad_correctness() -> Outcome {
    let builtins = [
        "x1 + y1", "x1 - y1", "x1*y1", "x1/y1", "x1^y1", "pow(x1, y1)", "exp(x1*y1)", "log(x1*y1)", "sin(x1*y1)",
        "cos(x1*y1)", "sqrt(x1*y1)", "-(x1*y1)",
    ];
    let mut rng = SplitMix64::new(20);
    let mut worst = 0.0f64;
    let mut label = String::new();
    for src in builtins {
        let field = ScalarField::parse(src).expect("parses");
        for _ in 0..100 {
            let pt = Point { x: vec![0.5 + 1.5 * rng.next_f64()], y: vec![0.5 + 1.5 * rng.next_f64()], ..Point::default() };
            let e = ad_vs_fd(&field, &pt, &[Sym::x(0), Sym::y(0)]);
            if e > worst {
                worst = e;
                label = src.to_string();
            }
        }
    }
    let mut fixtures = 0;
    for (name, text) in legendre_dual::verifier::FIXTURES {
        let sc = Scenario::parse(text).expect("fixture parses");
        let table = toml::from_str::<toml::Table>(text).expect("toml");
        let (m, r) = (sc.geometry.dims.m, sc.geometry.dims.r);
        for (section, key, side) in [("lagrangian", "L", Side::E), ("hamiltonian", "H", Side::Estar)] {
            let Some(src) = table.get(section).and_then(|s| s.get(key)).and_then(|v| v.as_str()) else { continue };
            let field = ScalarField::parse(src).expect("parses");
            fixtures += 1;
            let active: Vec<Sym> = (0..m)
                .map(Sym::x)
                .chain((0..r).map(|a| if side == Side::E { Sym::y(a) } else { Sym::p(a) }))
                .collect();
            for u in points(&sc, side, 100) {
                let (x, f) = u.split_at(m);
                let pt = match side {
                    Side::E => Point { x: x.to_vec(), y: f.to_vec(), ..Point::default() },
                    Side::Estar => Point { x: x.to_vec(), p: f.to_vec(), ..Point::default() },
                };
                let e = ad_vs_fd(&field, &pt, &active);
                if e > worst {
                    worst = e;
                    label = format!("{name} {key}");
                }
            }
        }
    }
    ensure(
        worst <= 1e-5,
        format!("max relative error {worst:.2e} ({label}); {} built-ins, {fixtures} fixture functions", builtins.len()),
    )
}

fn c5_algebroid_axioms() -> Outcome {
    let mut gla = 0.0f64;
    for name in ["FIX-SO3", "FIX-ACT"] {
        let sc = load(name);
        let m = sc.geometry.dims.m;
        let xs: Vec<Vec<f64>> = points(&sc, Side::E, 200).into_iter().map(|u| u[..m].to_vec()).collect();
        let (a, b) = sc.geometry.alg.check_gla(&xs).map_err(|e| format!("{name}: {e}"))?;
        gla = gla.max(a).max(b);
    }
    let mut rng = SplitMix64::new(2024);
    let (mut anti, mut leib, mut jac) = (0.0f64, 0.0f64, 0.0f64);
    for name in ["FIX-EUCL", "FIX-SO3", "FIX-ACT"] {
        let sc = load(name);
        let cx = Ctx::new(&sc.geometry);
        let (m, p, r) = (sc.geometry.dims.m, sc.geometry.dims.p, sc.geometry.dims.r);
        let mut at = || (0..m + r).map(|_| 2.0 * rng.next_f64() - 1.0).collect::<Vec<f64>>();
        let mut gen = SplitMix64::new(7 + m as u64 * 10 + p as u64);
        let mut sec = |side| ProlongSection::random_polynomial(side, m, p, r, &mut gen);
        for k in 0..200 {
            let side = if k % 2 == 0 { Side::E } else { Side::Estar };
            let (a, b, c) = (sec(side), sec(side), sec(side));
            let fpoly = sec(Side::E).z.remove(0);
            let u = at();
            let err = |e: legendre_dual::EvalError| format!("{name}: {e}");
            let ab = prolong_bracket(&cx, &a, &b, &u).map_err(err)?;
            let ba = prolong_bracket(&cx, &b, &a, &u).map_err(err)?;
            anti = anti.max(ab.add(&ba).max_abs());

            let s1 = prolong_bracket(&cx, &Bracket(&a, &b), &c, &u).map_err(err)?;
            let s2 = prolong_bracket(&cx, &Bracket(&b, &c), &a, &u).map_err(err)?;
            let s3 = prolong_bracket(&cx, &Bracket(&c, &a), &b, &u).map_err(err)?;
            jac = jac.max(s1.add(&s2).add(&s3).max_abs());

            if side == Side::E {
                let lhs = prolong_bracket(&cx, &a, &Scaled { f: fpoly.clone(), inner: &b }, &u).map_err(err)?;
                let (x, y) = u.split_at(m);
                let fv = fpoly.eval(&Env { x, chi: &[], y, p: &[] }).map_err(err)?;
                let seeded = Jet1::seed(&u);
                let (xs, ys) = seeded.split_at(m);
                let fj = fpoly.eval(&Env { x: xs, chi: &[], y: ys, p: &[] }).map_err(err)?;
                let act = anchor_action_on(&cx, &a, &u, &fj).map_err(err)?;
                let rhs = ab.scale(&fv).add(&b.eval(&cx, &u).map_err(err)?.scale(&act));
                leib = leib.max(lhs.max_abs_diff(&rhs));
            }
        }
    }
    ensure(
        gla <= 1e-12 && anti <= 1e-7 && leib <= 1e-7 && jac <= 1e-7,
        format!("check_gla {gla:.2e}; antisymmetry {anti:.2e}, Leibniz {leib:.2e}, Jacobi {jac:.2e} over 3 × 200 samples"),
    )
}

const CLASSICAL_SUITE: [&str; 12] = [
    "ID-4.9", "ID-4.10", "ID-4.11", "ID-5.2", "ID-5.3", "ID-5.7", "ID-5.8", "ID-6.3", "ID-6.4", "ID-6.5", "ID-6.6",
    "ID-7.5",
];

fn c6_classical_suite() -> Outcome {
    let start = Instant::now();
    let mut passed = std::collections::BTreeSet::new();
    for name in ["FIX-QUAD", "FIX-CONN"] {
        let sc = load(name);
        if sc.mode != legendre_dual::verifier::scenario::Mode::Classical {
            return Err(format!("{name} is not classical"));
        }
        let cfg = RunConfig {
            tol: Some(1e-6),
            samples: Some(500),
            ids: Some(CLASSICAL_SUITE.iter().map(|s| s.to_string()).collect()),
            ..RunConfig::default()
        };
        let rep = run_checks(&sc, &cfg).map_err(|e| e.to_string())?;
        for i in &rep.identities {
            match i.status {
                Status::Pass => {
                    passed.insert(i.id.clone());
                }
                Status::Skip => {}
                _ => return Err(format!("{name} {} {} residual {:?}", i.id, i.status.as_str(), i.residual)),
            }
        }
    }
    let t = start.elapsed();
    let missing: Vec<&str> = CLASSICAL_SUITE.iter().copied().filter(|id| !passed.contains(*id)).collect();
    ensure(
        missing.is_empty() && t <= Duration::from_secs(30),
        format!("{}/{} identities pass at 1e-6 (never passed: {missing:?}), 500 samples, {}", passed.len(), CLASSICAL_SUITE.len(), secs(t)),
    )
}

fn gate_ok(r: &Report, id: &str) -> bool {
    r.gates.iter().any(|g| g.id == id && g.status == Status::Pass && g.residual.is_some_and(|v| v <= 1e-8))
}

fn c7_gate_implication() -> Outcome {
    let families: [(&[&str], &[&str]); 5] = [
        (&["morphism-L"], &["ID-4.8", "ID-4.9", "ID-4.10", "ID-4.11"]),
        (&["morphism-H"], &["ID-4.12", "ID-4.13", "ID-4.14", "ID-4.15"]),
        (&["hl-L", "hl-H"], &["ID-5.9", "ID-5.10", "ID-5.12", "ID-5.12'"]),
        (&["theta-L"], &["ID-8.3", "ID-8.6", "ID-8.7"]),
        (&["theta-H"], &["ID-8.3'", "ID-8.8", "ID-8.9"]),
    ];
    let mut held = [0usize; 5];
    let mut checked = 0;
    for (name, _) in legendre_dual::verifier::FIXTURES {
        let sc = load(name);
        let all = Some(legendre_dual::verifier::IDENTITIES.iter().map(|d| d.id.to_string()).collect());
        let rep = run_checks(&sc, &RunConfig { tol: Some(1e-6), ids: all, ..RunConfig::default() }).map_err(|e| e.to_string())?;
        for (k, (gates, ids)) in families.iter().enumerate() {
            if !gates.iter().all(|g| gate_ok(&rep, g)) {
                continue;
            }
            held[k] += 1;
            for id in *ids {
                let Some(i) = rep.identities.iter().find(|i| i.id == *id) else { continue };
                checked += 1;
                if i.status != Status::Pass || i.residual.is_none_or(|v| v > 1e-6) {
                    return Err(format!("{name}: gates {gates:?} hold but {id} is {} ({:?})", i.status.as_str(), i.residual));
                }
            }
        }
    }
    ensure(
        held.iter().all(|&n| n > 0),
        format!("{checked} implied identities pass; gate families held on {held:?} fixtures"),
    )
}

type Gamma = fn(&[f64], &[f64]) -> [[f64; 2]; 2];

/// `[X_α, X_β]` restricted to the fiber components, for `X_α = ∂_α + s·Γ(α) ∂_fiber`
/// on `R^4`, with all derivatives by central differences.
fn fd_curvature(gamma: Gamma, sign: f64, at: &[f64]) -> [[[f64; 2]; 2]; 2] {
    const H: f64 = 1e-5;
    let field = |al: usize, u: &[f64]| -> [f64; 4] {
        let g = gamma(&u[..2], &u[2..]);
        let mut v = [0.0; 4];
        v[al] = 1.0;
        v[2] = sign * g[0][al];
        v[3] = sign * g[1][al];
        v
    };
    let deriv = |al: usize, j: usize, u: &[f64]| -> [f64; 4] {
        let (mut up, mut dn) = (u.to_vec(), u.to_vec());
        up[j] += H;
        dn[j] -= H;
        let (a, b) = (field(al, &up), field(al, &dn));
        std::array::from_fn(|k| (a[k] - b[k]) / (2.0 * H))
    };
    let mut out = [[[0.0; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let (xa, xb) = (field(a, at), field(b, at));
            for k in 0..2 {
                let mut v = 0.0;
                for j in 0..4 {
                    v += xa[j] * deriv(b, j, at)[2 + k] - xb[j] * deriv(a, j, at)[2 + k];
                }
                out[a][b][k] = v;
            }
        }
    }
    out
}

fn c8_curvature_oracle() -> Outcome {
    // FIX-CONN: Γ^1_2 = x1 y2 on E; Γ_{bα} = −Γ^a_α(x, g⁻¹p) g_ab on E* with g = [[2,1],[1,2]].
    let gamma_e: Gamma = |x, y| [[0.0, x[0] * y[1]], [0.0, 0.0]];
    let gamma_s: Gamma = |x, p| {
        let y = [(2.0 * p[0] - p[1]) / 3.0, (2.0 * p[1] - p[0]) / 3.0];
        let ge = [[0.0, x[0] * y[1]], [0.0, 0.0]];
        let g = [[2.0, 1.0], [1.0, 2.0]];
        std::array::from_fn(|b| std::array::from_fn(|al| -(0..2).map(|a| ge[a][al] * g[a][b]).sum::<f64>()))
    };
    let sc = load("FIX-CONN");
    let cx = Ctx::new(&sc.geometry);
    let (mut worst, mut antisym) = (0.0f64, true);
    let mut n = 0;
    for (side, gamma, sign) in [(Side::E, gamma_e, -1.0), (Side::Estar, gamma_s, 1.0)] {
        for at in points(&sc, side, 200) {
            let r = curvature(&cx, side, &at).map_err(|e| e.to_string())?;
            let o = fd_curvature(gamma, sign, &at);
            for a in 0..2 {
                for b in 0..2 {
                    for k in 0..2 {
                        worst = worst.max((r[a][b][k] - o[a][b][k]).abs());
                        antisym &= r[a][b][k].to_bits() == (-r[b][a][k]).to_bits() || (a == b && r[a][b][k] == 0.0);
                    }
                }
            }
            n += 1;
        }
    }
    ensure(
        worst <= 1e-5 && antisym,
        format!("max |R − R_fd| {worst:.2e} at {n} points (E and E*); antisymmetry exact: {antisym}"),
    )
}

fn c9_negative_control() -> Outcome {
    let sc = load("FIX-CONN-NEG");
    let rep = run_checks(&sc, &RunConfig::default()).map_err(|e| e.to_string())?;
    let target = rep.identities.iter().find(|i| i.id == "ID-5.3").ok_or("ID-5.3 missing")?;
    let independent = |id: &str| {
        ["ID-2.", "ID-3.", "ID-4.", "ID-7.", "ID-8."].iter().any(|p| id.starts_with(p)) || id == "ID-5.4" || id == "ID-5.5"
    };
    let mut count = 0;
    for i in rep.identities.iter().filter(|i| independent(&i.id)) {
        if i.status != Status::Pass {
            return Err(format!("gate-independent {} is {}", i.id, i.status.as_str()));
        }
        count += 1;
    }
    let r = target.residual.unwrap_or(0.0);
    ensure(
        target.status == Status::Fail && r >= 1e-3,
        format!("ID-5.3 {} with residual {r:.3e}; {count} gate-independent identities pass", target.status.as_str()),
    )
}

fn c10_determinism() -> Outcome {
    let mut n = 0;
    for (name, _) in legendre_dual::verifier::FIXTURES {
        let sc = load(name);
        let base = RunConfig { samples: Some(64), ..RunConfig::default() };
        let json = |threads| {
            run_checks(&sc, &RunConfig { threads, ..base.clone() }).map(|r| r.to_json()).map_err(|e| e.to_string())
        };
        let (a, b, one, eight) = (json(None)?, json(None)?, json(Some(1))?, json(Some(8))?);
        if a != b || a != one || one != eight {
            return Err(format!("{name}: reports differ"));
        }
        n += 1;
    }
    ensure(true, format!("{n} fixtures byte-identical across repeated runs and 1/8 threads"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Legendre round trip", c1_round_trip),
        ("conjugate oracle", c2_conjugate_oracle),
        ("Hessian duality", c3_hessian_duality),
        ("AD correctness", c4_ad_correctness),
        ("algebroid axioms", c5_algebroid_axioms),
        ("classical corollary suite", c6_classical_suite),
        ("gate implication", c7_gate_implication),
        ("curvature oracle", c8_curvature_oracle),
        ("negative control", c9_negative_control),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {:>2} {title}: {detail}", k + 1);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
