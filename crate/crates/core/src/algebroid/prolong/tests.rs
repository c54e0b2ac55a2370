use super::*;
use crate::algebroid::AlgebroidData;
use crate::model::Geometry;

fn f(s: &str) -> ScalarField {
    ScalarField::parse(s).unwrap()
}

fn eucl() -> Geometry {
    Geometry::new(AlgebroidData::classical(2), None, 2)
}

fn action() -> Geometry {
    let mut a = AlgebroidData::classical(2);
    a.rho = vec![vec![f("1"), f("chi1")], vec![f("0"), f("1")]];
    a.lstruct[0][0][1] = f("1");
    a.lstruct[0][1][0] = f("-1");
    Geometry::new(a, None, 2)
}

fn so3() -> Geometry {
    let mut l = vec![vec![vec![ScalarField::zero(); 3]; 3]; 3];
    for (g, a, b) in [(2, 0, 1), (0, 1, 2), (1, 2, 0)] {
        l[g][a][b] = f("1");
        l[g][b][a] = f("-1");
    }
    let alg = AlgebroidData {
        m: 1,
        p: 3,
        h: vec![f("x1")],
        eta: vec![f("chi1")],
        rho: vec![vec![ScalarField::zero(); 3]],
        lstruct: l,
    };
    Geometry::new(alg, None, 1)
}

fn point(g: &Geometry, rng: &mut SplitMix64) -> Vec<f64> {
    (0..g.dims.m + g.dims.r).map(|_| 2.0 * rng.next_f64() - 1.0).collect()
}

#[test]
fn flat_basis_brackets_vanish() {
    let g = eucl();
    let cx = Ctx::new(&g);
    let at = [0.3, -0.2, 1.1, 0.4];
    let basis = [
        Basis::Horizontal(Side::E, 0),
        Basis::Horizontal(Side::E, 1),
        Basis::Vertical(Side::E, 0),
        Basis::Vertical(Side::E, 1),
    ];
    for a in &basis {
        for b in &basis {
            assert_eq!(prolong_bracket(&cx, a, b, &at).unwrap().max_abs(), 0.0);
        }
    }
}

#[test]
fn so3_basis_bracket_lifts_structure_constants() {
    let g = so3();
    let cx = Ctx::new(&g);
    let v = prolong_bracket(&cx, &Basis::Horizontal(Side::E, 0), &Basis::Horizontal(Side::E, 1), &[0.5, 0.2]).unwrap();
    assert_eq!(v, SecVal { z: vec![0.0, 0.0, 1.0], y: vec![0.0] });
}

#[test]
fn fiber_dependent_coefficient_bracket() {
    let g = eucl();
    let cx = Ctx::new(&g);
    let x = ProlongSection { side: Side::E, z: vec![f("y1"), f("0")], y: vec![f("0"), f("0")] };
    let v = prolong_bracket(&cx, &x, &Basis::Vertical(Side::E, 0), &[0.1, 0.2, 0.7, -0.3]).unwrap();
    assert_eq!(v, SecVal { z: vec![-1.0, 0.0], y: vec![0.0, 0.0] });
}

#[test]
fn anchor_examples() {
    let g = eucl();
    let cx = Ctx::new(&g);
    let at = [0.1, 0.2, 0.3, 0.4];
    assert_eq!(prolong_anchor(&cx, &Basis::Vertical(Side::E, 0), &at).unwrap(), vec![0.0, 0.0, 1.0, 0.0]);
    assert_eq!(prolong_anchor(&cx, &Basis::Horizontal(Side::E, 0), &at).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
    let g = action();
    let cx = Ctx::new(&g);
    let v = prolong_anchor(&cx, &Basis::Horizontal(Side::E, 1), &[3.0, 0.0, 0.5, 0.5]).unwrap();
    assert_eq!(&v[..2], &[3.0, 1.0]);
    assert_eq!(&v[2..], &[0.0, 0.0]);
}

fn fixtures() -> Vec<Geometry> {
    vec![eucl(), so3(), action()]
}

#[test]
fn antisymmetry_on_random_sections() {
    let mut rng = SplitMix64::new(11);
    for g in fixtures() {
        let cx = Ctx::new(&g);
        let (m, p, r) = (g.dims.m, g.dims.p, g.dims.r);
        for side in [Side::E, Side::Estar] {
            for _ in 0..10 {
                let a = ProlongSection::random_polynomial(side, m, p, r, &mut rng);
                let b = ProlongSection::random_polynomial(side, m, p, r, &mut rng);
                let at = point(&g, &mut rng);
                let ab = prolong_bracket(&cx, &a, &b, &at).unwrap();
                let ba = prolong_bracket(&cx, &b, &a, &at).unwrap();
                assert!(ab.add(&ba).max_abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn leibniz_rule() {
    let mut rng = SplitMix64::new(12);
    for g in fixtures() {
        let cx = Ctx::new(&g);
        let (m, p, r) = (g.dims.m, g.dims.p, g.dims.r);
        for _ in 0..10 {
            let a = ProlongSection::random_polynomial(Side::E, m, p, r, &mut rng);
            let b = ProlongSection::random_polynomial(Side::E, m, p, r, &mut rng);
            let fpoly = ProlongSection::random_polynomial(Side::E, m, 1, 0, &mut rng).z.remove(0);
            let at = point(&g, &mut rng);
            let fb = Scaled { f: fpoly.clone(), inner: &b };
            let lhs = prolong_bracket(&cx, &a, &fb, &at).unwrap();
            let (x, y) = at.split_at(m);
            let fv: f64 = fpoly.eval(&env_side(Side::E, x, y)).unwrap();
            let seeded = Jet1::seed(&at);
            let (xs, ys) = seeded.split_at(m);
            let fj = fpoly.eval(&env_side(Side::E, xs, ys)).unwrap();
            let act = anchor_action_on(&cx, &a, &at, &fj).unwrap();
            let rhs = prolong_bracket(&cx, &a, &b, &at).unwrap().scale(&fv).add(&b.eval(&cx, &at).unwrap().scale(&act));
            assert!(lhs.max_abs_diff(&rhs) <= 1e-10, "{}", lhs.max_abs_diff(&rhs));
        }
    }
}

#[test]
fn jacobi_identity() {
    let mut rng = SplitMix64::new(13);
    for g in fixtures() {
        let cx = Ctx::new(&g);
        let (m, p, r) = (g.dims.m, g.dims.p, g.dims.r);
        for _ in 0..5 {
            let a = ProlongSection::random_polynomial(Side::E, m, p, r, &mut rng);
            let b = ProlongSection::random_polynomial(Side::E, m, p, r, &mut rng);
            let c = ProlongSection::random_polynomial(Side::E, m, p, r, &mut rng);
            let at = point(&g, &mut rng);
            let s1 = prolong_bracket(&cx, &Bracket(&a, &b), &c, &at).unwrap();
            let s2 = prolong_bracket(&cx, &Bracket(&b, &c), &a, &at).unwrap();
            let s3 = prolong_bracket(&cx, &Bracket(&c, &a), &b, &at).unwrap();
            assert!(s1.add(&s2).add(&s3).max_abs() <= 1e-9);
        }
    }
}

#[test]
fn anchor_is_a_bracket_homomorphism() {
    let mut rng = SplitMix64::new(14);
    for g in fixtures() {
        let cx = Ctx::new(&g);
        let (m, p, r) = (g.dims.m, g.dims.p, g.dims.r);
        for _ in 0..5 {
            let a = ProlongSection::random_polynomial(Side::Estar, m, p, r, &mut rng);
            let b = ProlongSection::random_polynomial(Side::Estar, m, p, r, &mut rng);
            let at = point(&g, &mut rng);
            let lhs = prolong_anchor(&cx, &Bracket(&a, &b), &at).unwrap();
            let seeded = Jet1::seed(&at);
            let va = prolong_anchor(&cx, &a, &seeded).unwrap();
            let vb = prolong_anchor(&cx, &b, &seeded).unwrap();
            let da: Vec<f64> = va.iter().map(|j| j.v).collect();
            let db: Vec<f64> = vb.iter().map(|j| j.v).collect();
            for k in 0..lhs.len() {
                let comm = directional(&da, &vb[k]) - directional(&db, &va[k]);
                assert!((lhs[k] - comm).abs() <= 1e-10);
            }
        }
    }
}
