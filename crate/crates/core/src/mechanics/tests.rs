use super::identities::*;
use super::*;
use crate::algebroid::{AlgebroidData, Basis, ProlongSection};
use crate::expr::ScalarField;
use crate::legendre::LegendrePair;
use crate::model::Geometry;
use crate::numeric::SplitMix64;

fn f(s: &str) -> ScalarField {
    ScalarField::parse(s).unwrap()
}

fn mech(spray: &[&str], force: &[&str], morph: &[&[&str]]) -> MechanicsData {
    MechanicsData {
        spray: spray.iter().map(|s| f(s)).collect(),
        force: force.iter().map(|s| f(s)).collect(),
        morph: morph.iter().map(|row| row.iter().map(|s| f(s)).collect()).collect(),
    }
}

fn eucl() -> Geometry {
    let pair = LegendrePair::from_lagrangian(2, 2, f("(y1^2 + y2^2)/2"));
    Geometry::new(AlgebroidData::classical(2), Some(pair), 2)
}

/// x-dependent Hessian with the E* morphism set to its inverse over chi.
fn warped() -> Geometry {
    let pair = LegendrePair::from_lagrangian(2, 2, f("(1 + x1^2)*y1^2/2 + y2^2/2 + x2*y1*y2/4"));
    let mut g = Geometry::new(AlgebroidData::classical(2), Some(pair), 2);
    g.mech = Some(mech(&["y1*y2 + x2", "y1^2"], &["x1", "0"], &[]));
    let det = "((1 + chi1^2) - chi2^2/16)";
    let inv = [format!("1/{det}"), format!("-(chi2/4)/{det}"), format!("(1 + chi1^2)/{det}")];
    g.mech_star = Some(mech(&[], &[], &[&[&inv[0], &inv[1]], &[&inv[1], &inv[2]]]));
    g
}

fn points(g: &Geometry, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SplitMix64::new(seed);
    (0..n).map(|_| (0..g.dims.m + g.dims.r).map(|_| 2.0 * rng.next_f64() - 1.0).collect()).collect()
}

#[test]
fn geodesic_semispray_and_almost_tangent() {
    let g = eucl();
    let cx = Ctx::new(&g);
    let at = [0.2, -0.1, 0.7, 1.3];
    let s = Semispray(Side::E).eval(&cx, &at).unwrap();
    assert_eq!(s, SecVal { z: vec![0.7, 1.3], y: vec![0.0, 0.0] });
    let js = AlmostTangent(Semispray(Side::E)).eval(&cx, &at).unwrap();
    assert_eq!(js, Liouville(Side::E).eval(&cx, &at).unwrap());
    let j1 = AlmostTangent(Basis::Horizontal(Side::E, 0)).eval(&cx, &at).unwrap();
    assert_eq!(j1, SecVal { z: vec![0.0, 0.0], y: vec![1.0, 0.0] });
}

#[test]
fn almost_tangent_squares_to_zero() {
    let g = warped();
    let cx = Ctx::new(&g);
    let mut rng = SplitMix64::new(3);
    for side in [Side::E, Side::Estar] {
        for at in points(&g, 10, 4) {
            let x = ProlongSection::random_polynomial(side, 2, 2, 2, &mut rng);
            let v = AlmostTangent(AlmostTangent(&x)).eval(&cx, &at).unwrap();
            assert_eq!(v.max_abs(), 0.0);
        }
    }
}

#[test]
fn semispray_maps_to_liouville_for_any_morphism() {
    let g = warped();
    let cx = Ctx::new(&g);
    for side in [Side::E, Side::Estar] {
        for at in points(&g, 10, 5) {
            let js = AlmostTangent(Semispray(side)).eval(&cx, &at).unwrap();
            let c = Liouville(side).eval(&cx, &at).unwrap();
            assert!(js.max_abs_diff(&c) <= 1e-12);
        }
    }
}

#[test]
fn starred_semispray_example() {
    let mut g = eucl();
    g.mech_star = Some(mech(&["p1/2", "p2/2"], &[], &[]));
    let cx = Ctx::new(&g);
    let s = Semispray(Side::Estar).eval(&cx, &[0.0, 0.0, 0.4, -0.6]).unwrap();
    assert_eq!(s, SecVal { z: vec![0.4, -0.6], y: vec![-0.4, 0.6] });
}

#[test]
fn requires_square_bundle() {
    let pair = LegendrePair::from_lagrangian(2, 1, f("y1^2/2"));
    let g = Geometry::new(AlgebroidData::classical(2), Some(pair), 1);
    let cx = Ctx::new(&g);
    assert!(matches!(Semispray(Side::E).eval(&cx, &[0.0, 0.0, 1.0]), Err(EvalError::Dimension(_))));
}

#[test]
fn euclidean_forms() {
    let g = eucl();
    let cx = Ctx::new(&g);
    let at = [0.3, 0.1, -0.8, 0.5];
    let th = PoincareCartan(Side::E).components(&cx, &at).unwrap();
    assert_eq!(th.z, vec![-0.8, 0.5]);
    assert_eq!(th.y, vec![0.0, 0.0]);
    let th = PoincareCartan(Side::Estar).components(&cx, &at).unwrap();
    assert_eq!(th.z, vec![-0.8, 0.5]);
    assert!(theta_transfer(&cx, Side::E, &at).unwrap() <= 1e-12);
    let w = PoincareCartan2(Side::E);
    for i in 0..2 {
        for j in 0..2 {
            let v = w.apply(&cx, &Basis::Horizontal(Side::E, i), &Basis::Vertical(Side::E, j), &at[..]).unwrap();
            assert_eq!(v, if i == j { -1.0 } else { 0.0 });
            let v = w.apply(&cx, &Basis::Vertical(Side::E, i), &Basis::Vertical(Side::E, j), &at[..]).unwrap();
            assert_eq!(v, 0.0);
        }
    }
}

#[test]
fn two_form_is_antisymmetric_and_bilinear() {
    let g = warped();
    let cx = Ctx::new(&g);
    let mut rng = SplitMix64::new(6);
    for side in [Side::E, Side::Estar] {
        let w = PoincareCartan2(side);
        for at in points(&g, 5, 7) {
            let u = ProlongSection::random_polynomial(side, 2, 2, 2, &mut rng);
            let v = ProlongSection::random_polynomial(side, 2, 2, 2, &mut rng);
            let t = ProlongSection::random_polynomial(side, 2, 2, 2, &mut rng);
            assert!(w.apply(&cx, &u, &u, &at[..]).unwrap().abs() <= 1e-10);
            let uv = w.apply(&cx, &u, &v, &at[..]).unwrap();
            let vu = w.apply(&cx, &v, &u, &at[..]).unwrap();
            assert!((uv + vu).abs() <= 1e-10);
            let sum = crate::algebroid::Combo { a: 2.0, x: &v, b: -3.0, y: &t };
            let lhs = w.apply(&cx, &u, &sum, &at[..]).unwrap();
            let rhs = 2.0 * uv - 3.0 * w.apply(&cx, &u, &t, &at[..]).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10);
        }
    }
}

#[test]
fn derived_dual_semispray_satisfies_both_transfers() {
    let g = warped();
    let cx = Ctx::new(&g);
    assert_eq!(cx.spray_provenance(Side::Estar), Some(Provenance::Derived));
    for at in points(&g, 20, 8) {
        for side in [Side::E, Side::Estar] {
            let gate = semispray_gate(&cx, side, &at).unwrap();
            assert!(gate <= 1e-8, "{side:?} {gate}");
            let r = semispray_transfer(&cx, side, &at).unwrap();
            assert!(r[0] <= 1e-9 && r[1] <= 1e-8, "{side:?} {r:?}");
        }
    }
}

#[test]
fn hamiltonian_side_forces_zero_spray_in_flat_case() {
    let mut g = eucl();
    g.mech_star = Some(mech(&["0", "0"], &["0", "0"], &[]));
    let cx = Ctx::new(&g);
    let k = cx.spray_term(Side::E, &[0.1, 0.2], &[0.5, -0.5]).unwrap();
    assert!(k.iter().all(|v: &f64| v.abs() <= 1e-10));
    for at in points(&g, 5, 9) {
        assert!(semispray_transfer(&cx, Side::E, &at).unwrap()[1] <= 1e-10);
    }
}

#[test]
fn form_gates_imply_component_identities() {
    let g = warped();
    let cx = Ctx::new(&g);
    for at in points(&g, 10, 10) {
        for side in [Side::E, Side::Estar] {
            assert!(theta_gate(&cx, side, &at).unwrap() <= 1e-8);
            assert!(theta_transfer(&cx, side, &at).unwrap() <= 1e-8);
            let gate = omega_gate(&cx, side, &at).unwrap();
            assert!(gate <= 1e-8, "{side:?} {gate}");
            let r = omega_transfer(&cx, side, &at).unwrap();
            assert!(r.iter().all(|v| *v <= 1e-6), "{side:?} {r:?}");
        }
    }
}

#[test]
fn mismatched_morphism_breaks_theta_transfer() {
    let mut g = warped();
    g.mech_star = None;
    let cx = Ctx::new(&g);
    let at = [0.5, 0.5, 0.3, 0.2];
    assert!(theta_gate(&cx, Side::E, &at).unwrap() >= 1e-3);
    assert!(theta_transfer(&cx, Side::E, &at).unwrap() >= 1e-3);
}
