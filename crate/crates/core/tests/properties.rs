use legendre_dual::expr::{eval_jet2, parse_expr, BinOp, Expr, Func, Point, ScalarField, Sym};
use legendre_dual::legendre::{LegendrePair, WarmStart};
use legendre_dual::numeric::{sample_points, DenseMatrix, SamplePlan};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..1000).prop_map(|k| Expr::Num(k as f64 / 8.0)),
        (0.0f64..1e6).prop_map(Expr::Num),
        (1e-12f64..1e-3).prop_map(Expr::Num),
        (0usize..3).prop_map(|i| Expr::Sym(Sym::x(i))),
        (0usize..2).prop_map(|i| Expr::Sym(Sym::chi(i))),
        (0usize..3).prop_map(|i| Expr::Sym(Sym::y(i))),
        (0usize..3).prop_map(|i| Expr::Sym(Sym::p(i))),
    ]
}

fn ast() -> impl Strategy<Value = Expr> {
    let ops = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow];
    let unary = [Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Sqrt];
    leaf().prop_recursive(7, 64, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (0..ops.len(), inner.clone(), inner.clone()).prop_map(move |(k, a, b)| Expr::bin(ops[k], a, b)),
            (0..unary.len(), inner.clone()).prop_map(move |(k, a)| Expr::Call(unary[k], vec![a])),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Call(Func::Pow, vec![a, b])),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1200, ..ProptestConfig::default() })]

    #[test]
    fn printed_ast_reparses_to_itself(e in ast()) {
        prop_assert!(e.depth() <= 8);
        let text = e.to_string();
        let back = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e, "{}", text);
    }
}

fn poly_field() -> impl Strategy<Value = String> {
    let terms = ["1", "x1", "y1", "y2", "x1*y1", "y1*y2", "y1^2", "x1*x1", "y2^2", "sin(x1)", "exp(y2/4)"];
    prop::collection::vec((-3i32..=3, 0..terms.len()), 1..6).prop_map(move |cs| {
        cs.iter().map(|(c, k)| format!("({c})*{}", terms[*k])).collect::<Vec<_>>().join(" + ")
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn evaluation_is_bitwise_repeatable(src in poly_field(), x in -2.0f64..2.0, y1 in -2.0f64..2.0, y2 in -2.0f64..2.0) {
        let f = ScalarField::parse(&src).unwrap();
        let pt = Point { x: vec![x], chi: vec![], y: vec![y1, y2], p: vec![] };
        let active = [Sym::x(0), Sym::y(0), Sym::y(1)];
        let a = eval_jet2(&f, &pt, &active).unwrap();
        let b = eval_jet2(&f, &pt, &active).unwrap();
        prop_assert_eq!(a.v.to_bits(), b.v.to_bits());
        prop_assert!(a.g.iter().zip(&b.g).all(|(u, v)| u.to_bits() == v.to_bits()));
        prop_assert!(a.h.iter().zip(&b.h).all(|(u, v)| u.to_bits() == v.to_bits()));
    }

    #[test]
    fn double_inverse_is_identity(entries in prop::collection::vec(-1.0f64..1.0, 9), shift in 2.5f64..4.0) {
        let m = DenseMatrix::from_fn(3, 3, |i, j| entries[3 * i + j] + if i == j { shift } else { 0.0 });
        let back = m.invert().unwrap().invert().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((back.at(i, j) - m.at(i, j)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn samples_stay_in_their_box(seed in any::<u64>(), lo in -5.0f64..0.0, width in 0.0f64..5.0, count in 0usize..64) {
        let plan = SamplePlan { count, seed, bounds: vec![(lo, lo + width); 3] };
        let pts = sample_points(&plan).unwrap();
        prop_assert_eq!(pts.len(), count);
        prop_assert!(pts.iter().flatten().all(|&v| v >= lo && v <= lo + width));
        prop_assert_eq!(pts, sample_points(&plan).unwrap());
    }

    #[test]
    fn young_identity_for_positive_quadratics(a in 0.5f64..3.0, b in -0.4f64..0.4, c in 0.5f64..3.0, x in -1.0f64..1.0, y1 in -3.0f64..3.0, y2 in -3.0f64..3.0) {
        let l = ScalarField::parse(&format!("({a})*y1^2/2 + ({b})*y1*y2 + ({c})*y2^2/2 + x1*y1")).unwrap();
        let pair = LegendrePair::from_lagrangian(1, 2, l);
        let warm = WarmStart::new();
        let (xs, y) = (vec![x], vec![y1, y2]);
        let p = pair.fiber_p(&xs, &y, &warm).unwrap();
        let h = pair.hamiltonian(&xs, &p, &warm).unwrap();
        let lv = pair.lagrangian(&xs, &y, &warm).unwrap();
        prop_assert!((h + lv - (p[0] * y1 + p[1] * y2)).abs() <= 1e-10 * (1.0 + h.abs()));
        let (bx, _) = pair.phi_l(&xs, &y, &warm).unwrap();
        prop_assert_eq!(bx[0].to_bits(), x.to_bits());
        prop_assert!(pair.round_trip_e(&xs, &y, &warm).unwrap() <= 1e-10);
    }
}
