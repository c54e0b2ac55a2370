use super::registry::GATES;
use super::*;

fn load(name: &str) -> Scenario {
    Scenario::parse(fixture(name).unwrap()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn cfg() -> RunConfig {
    RunConfig::default()
}

fn with_samples(n: usize) -> RunConfig {
    RunConfig { samples: Some(n), ..RunConfig::default() }
}

fn status_of<'a>(r: &'a Report, id: &str) -> &'a report::IdentityResult {
    r.identities.iter().find(|i| i.id == id).unwrap_or_else(|| panic!("{id} missing"))
}

#[test]
fn every_fixture_loads() {
    for (name, text) in FIXTURES {
        let sc = Scenario::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(&sc.name, name);
        assert_eq!(sc.digest.len(), 64);
    }
    assert!(fixture("fix-eucl").is_some());
    assert!(fixture("FIX-NOPE").is_none());
}

#[test]
fn minimal_classical_file_gets_identity_structure() {
    let sc = Scenario::parse("[scenario]\nname = \"min\"\nmode = \"classical\"\nm = 1\nr = 1\n[lagrangian]\nL = \"y1^2/2\"\n").unwrap();
    assert_eq!(sc.sampling.count, 100);
    assert_eq!(sc.sampling.seed, 1);
    let g = &sc.geometry;
    assert_eq!((g.dims.m, g.dims.p, g.dims.r), (1, 1, 1));
    assert!(g.conn.is_none() && g.dlin.is_none() && g.mech.is_none());
    let r = run_checks(&sc, &cfg()).unwrap();
    for id in ["ID-2.4", "ID-2.5", "ID-3.6", "ID-3.7", "ID-5.4", "ID-5.5"] {
        assert_eq!(status_of(&r, id).status, Status::Pass, "{id}");
    }
    assert_eq!(status_of(&r, "ID-5.3").status, Status::Skip);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn missing_both_functions_is_a_validation_error() {
    let err = Scenario::parse("[scenario]\nname = \"x\"\nmode = \"classical\"\nm = 1\nr = 1\n").unwrap_err();
    match err {
        ScenarioError::Validation(d) => {
            assert!(d.iter().any(|d| d.message == "scenario defines neither a Lagrangian nor a Hamiltonian"), "{d:?}")
        }
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn parse_errors_carry_a_location() {
    let err = Scenario::parse("[scenario]\nname = \"x\"\nm = = 1\n").unwrap_err();
    match err {
        ScenarioError::Parse { line, column, .. } => {
            assert_eq!(line, 3);
            assert!(column >= 1);
        }
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn unknown_sections_and_keys_are_reported() {
    let text = "[scenario]\nname = \"x\"\nmode = \"classical\"\nm = 1\nr = 1\nbogus = 2\n[lagrangian]\nL = \"y1^2\"\n[extra]\na = 1\n";
    let ScenarioError::Validation(d) = Scenario::parse(text).unwrap_err() else { panic!() };
    assert!(d.iter().any(|d| d.key == "scenario.bogus" && d.message == "unknown key"), "{d:?}");
    assert!(d.iter().any(|d| d.message == "unknown section"), "{d:?}");
}

#[test]
fn classical_mode_rejects_an_algebroid_section() {
    let text = "[scenario]\nname = \"x\"\nmode = \"classical\"\nm = 1\nr = 1\n[algebroid]\n[lagrangian]\nL = \"y1^2\"\n";
    assert!(matches!(Scenario::parse(text), Err(ScenarioError::Validation(_))));
}

#[test]
fn action_algebroid_satisfies_the_axioms() {
    let sc = load("FIX-ACT");
    let xs = crate::numeric::sample_points(&sc.sampling.plan(crate::model::Side::E))
        .unwrap()
        .into_iter()
        .map(|p| p[..sc.geometry.dims.m].to_vec())
        .collect::<Vec<_>>();
    let (anti, anchor) = sc.geometry.alg.check_gla(&xs).unwrap();
    assert!(anti == 0.0 && anchor < 1e-12, "{anti} {anchor}");
}

#[test]
fn euclidean_fixture_passes_everything_at_tight_tolerance() {
    let sc = load("FIX-EUCL");
    let r = run_checks(&sc, &RunConfig { tol: Some(1e-8), ..with_samples(50) }).unwrap();
    assert_eq!(r.identities.len(), IDENTITIES.len());
    for i in &r.identities {
        assert_eq!(i.status, Status::Pass, "{} {:?}", i.id, i.residual);
        assert!(i.residual.unwrap() <= 1e-8);
    }
    assert!(r.banners.is_empty());
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn perturbed_dual_connection_fails_the_connection_identity() {
    let sc = load("FIX-CONN-NEG");
    let r = run_checks(&sc, &with_samples(40)).unwrap();
    let i = status_of(&r, "ID-5.3");
    assert_eq!(i.status, Status::Fail);
    assert!(i.residual.unwrap() >= 1e-3);
    for id in ["ID-3.6", "ID-3.7", "ID-4.8", "ID-4.12", "ID-5.4", "ID-5.5", "ID-7.4", "ID-8.3"] {
        assert_eq!(status_of(&r, id).status, Status::Pass, "{id}");
    }
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn empty_id_list_evaluates_nothing() {
    let sc = load("FIX-QUAD");
    let r = run_checks(&sc, &RunConfig { ids: Some(vec![]), ..cfg() }).unwrap();
    assert!(r.identities.is_empty() && r.gates.is_empty());
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn unknown_ids_are_rejected() {
    let sc = load("FIX-QUAD");
    let e = run_checks(&sc, &RunConfig { ids: Some(vec!["ID-9.9".into()]), ..cfg() }).unwrap_err();
    assert!(matches!(e, RunError::UnknownId(ref s) if s == "ID-9.9"));
}

#[test]
fn id_spelling_is_canonicalized() {
    assert_eq!(canonical_id("5.12′"), "ID-5.12'");
    assert_eq!(canonical_id(" ID-3.6 "), "ID-3.6");
    let sc = load("FIX-QUAD");
    let r = run_checks(&sc, &RunConfig { ids: Some(vec!["3.6".into(), "ID-8.3′".into()]), ..with_samples(10) }).unwrap();
    let got: Vec<&str> = r.identities.iter().map(|i| i.id.as_str()).collect();
    assert_eq!(got, ["ID-3.6", "ID-8.3'"]);
}

#[test]
fn json_round_trip_is_exact() {
    let sc = load("FIX-WARP");
    let r = run_checks(&sc, &with_samples(20)).unwrap();
    let back = Report::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    for (a, b) in r.identities.iter().zip(&back.identities) {
        assert_eq!(a.residual.map(f64::to_bits), b.residual.map(f64::to_bits));
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let sc = load("FIX-CONN");
    let one = run_checks(&sc, &RunConfig { threads: Some(1), ..with_samples(80) }).unwrap();
    let many = run_checks(&sc, &RunConfig { threads: Some(8), ..with_samples(80) }).unwrap();
    assert_eq!(one.to_json(), many.to_json());
}

#[test]
fn dropping_the_dlinear_section_only_skips_its_identities() {
    let full_text = fixture("FIX-CONN").unwrap();
    let start = full_text.find("[dlinear]").unwrap();
    let end = full_text[start..].find("\n\n").unwrap() + start;
    let cut = format!("{}{}", &full_text[..start], &full_text[end + 2..]);
    let a = run_checks(&load("FIX-CONN"), &with_samples(30)).unwrap();
    let b = run_checks(&Scenario::parse(&cut).unwrap(), &with_samples(30)).unwrap();
    for (x, y) in a.identities.iter().zip(&b.identities) {
        if x.id.starts_with("ID-6.") {
            assert_eq!(x.status, Status::Pass, "{}", x.id);
            assert_eq!(y.status, Status::Skip, "{}", y.id);
        } else {
            assert_eq!((x.status, x.residual), (y.status, y.residual), "{}", x.id);
        }
    }
}

#[test]
fn gate_references_resolve() {
    for def in IDENTITIES {
        for g in def.gates {
            assert!(GATES.iter().any(|d| d.id == *g), "{} -> {g}", def.id);
        }
    }
}

#[test]
fn derived_sides_are_noted() {
    let r = run_checks(&load("FIX-CONN"), &with_samples(10)).unwrap();
    assert_eq!(status_of(&r, "ID-5.2").note.as_deref(), Some("holds by construction (Γ* derived)"));
    assert!(r.constructions.iter().any(|c| c.provenance == "derived" && c.side == "E*"));
}

#[test]
fn failed_gate_is_annotated() {
    let r = run_checks(&load("FIX-CONN-NEG"), &with_samples(10)).unwrap();
    let note = status_of(&r, "ID-5.7").note.clone().unwrap();
    assert!(note.starts_with("gate not satisfied: "), "{note}");
    assert!(note.ends_with("identity not implied"), "{note}");
}

#[test]
fn non_algebroid_raises_a_banner() {
    let text = "[scenario]\nname = \"bad\"\nmode = \"general\"\nm = 1\np = 2\nr = 2\n[algebroid]\nrho.1.1 = \"1\"\nLstruct.1.1.2 = \"1\"\nLstruct.1.2.1 = \"-1\"\n[lagrangian]\nL = \"(y1^2 + y2^2)/2\"\n";
    let sc = Scenario::parse(text).unwrap();
    let r = run_checks(&sc, &with_samples(10)).unwrap();
    assert!(r.banners.iter().any(|b| b.starts_with("not a Lie algebroid")), "{:?}", r.banners);
    assert_eq!(status_of(&r, "ID-2.5").status, Status::Fail);
}

#[test]
fn text_report_has_one_row_per_identity() {
    let r = run_checks(&load("FIX-EXP"), &with_samples(10)).unwrap();
    let t = r.to_text();
    for i in &r.identities {
        assert_eq!(t.lines().filter(|l| l.trim_start().starts_with(&format!("{} ", i.id))).count(), 1, "{}", i.id);
    }
}
