use dirac2d::clifford::{CliffordElement, Representation};
use dirac2d::expr::{eval_jet, parse, BinOp, Bindings, Coord, ExprAst, Func};
use dirac2d::jets::{Jet2, Var};
use num_complex::Complex64;
use proptest::prelude::*;

const BASE: (f64, f64) = (0.3, -0.2);
const ORDER: usize = 4;

fn coeff() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(r, i)| Complex64::new(r, i))
}

fn jet() -> impl Strategy<Value = Jet2> {
    prop::collection::vec(coeff(), (ORDER + 1) * (ORDER + 2) / 2).prop_map(|c| {
        let mut it = c.into_iter();
        Jet2::from_fn(BASE, ORDER, |_, _| it.next().unwrap())
    })
}

fn close(a: &Jet2, b: &Jet2, tol: f64) -> bool {
    (a - b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

proptest! {
    #[test]
    fn jet_ring_axioms(a in jet(), b in jet(), c in jet()) {
        prop_assert!(close(&(&a + &b), &(&b + &a), 0.0));
        prop_assert!(close(&(&a * &b), &(&b * &a), 1e-14));
        prop_assert!(close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-13));
        prop_assert!(close(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)), 1e-13));
        let one = a.constant_like(1.0);
        prop_assert!(close(&(&a * &one), &a, 0.0));
        prop_assert!(close(&(&a - &a), &a.zero_like(), 0.0));
    }

    #[test]
    fn leibniz_rule(a in jet(), b in jet()) {
        for var in [Var::U, Var::V] {
            let lhs = (&a * &b).d(var);
            let rhs = &(&a.d(var) * &b) + &(&a * &b.d(var));
            prop_assert!(close(&lhs, &rhs, 1e-13));
        }
    }

    #[test]
    fn division_inverts_multiplication(a in jet(), b in jet()) {
        prop_assume!(b.value().norm() > 0.3);
        let q = (&a * &b).div(&b).unwrap();
        prop_assert!(close(&q, &a, 1e-9));
    }

    #[test]
    fn exp_matches_finite_differences(p in -1.0..1.0f64, q in -1.0..1.0f64, r in -1.0..1.0f64) {
        // f = exp(p u + q v + r u v)
        let f = |u: f64, v: f64| (p * u + q * v + r * u * v).exp();
        let u = Jet2::variable(BASE, 3, Var::U);
        let v = Jet2::variable(BASE, 3, Var::V);
        let j = (&(&u * p) + &(&v * q) + (&(&u * &v) * r)).exp();
        let h = 1e-4;
        let (x, y) = BASE;
        let fu = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
        let fv = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
        let fuv = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
        let fuu = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
        prop_assert!((j.value().re - f(x, y)).abs() < 1e-14 * f(x, y).max(1.0));
        prop_assert!((j.derivative(1, 0).re - fu).abs() < 1e-6);
        prop_assert!((j.derivative(0, 1).re - fv).abs() < 1e-6);
        prop_assert!((j.derivative(1, 1).re - fuv).abs() < 1e-5);
        prop_assert!((j.derivative(2, 0).re - fuu).abs() < 1e-5);
    }

    #[test]
    fn clifford_product_is_associative_and_represented(x in cl(), y in cl(), z in cl()) {
        let l = x.mul(&y).mul(&z);
        let r = x.mul(&y.mul(&z));
        prop_assert!(l.sub(&r).magnitude() <= 1e-12 * (1.0 + l.magnitude()));
        for rep in [Representation::pauli(), Representation::separation()] {
            let m = rep.image(&x.mul(&y));
            let mx = rep.image(&x);
            let my = rep.image(&y);
            for i in 0..2 {
                for j in 0..2 {
                    let e = mx[i][0] * my[0][j] + mx[i][1] * my[1][j];
                    prop_assert!((m[i][j] - e).norm() <= 1e-12 * (1.0 + e.norm()));
                }
            }
        }
    }

    #[test]
    fn expression_display_parses_back(ast in expr_ast(), x in 0.2..1.5f64) {
        let text = ast.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(back.to_string(), text.clone());
        let bind = Bindings::from([("a".to_string(), 0.7), ("k".to_string(), 1.9)]);
        let var = Jet2::variable((x, 0.0), 2, Var::U);
        let (e1, e2) = (eval_jet(&ast, &var, &bind), eval_jet(&back, &var, &bind));
        match (e1, e2) {
            (Ok(a), Ok(b)) => prop_assert!((&a - &b).max_abs() <= 1e-12 * (1.0 + a.max_abs()) || a.max_abs().is_nan()),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{text}: {a:?} vs {b:?}"),
        }
    }
}

fn cl() -> impl Strategy<Value = CliffordElement<Complex64>> {
    [coeff(), coeff(), coeff(), coeff()].prop_map(|c| CliffordElement::new(c[0], c[1], c[2], c[3]))
}

fn expr_ast() -> impl Strategy<Value = ExprAst> {
    let leaf = prop_oneof![
        (-3.0..3.0f64).prop_map(ExprAst::Num),
        Just(ExprAst::Coord(Coord::U)),
        Just(ExprAst::Param("a".into())),
        Just(ExprAst::Param("k".into())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| ExprAst::Neg(Box::new(a))),
            (inner.clone(), inner.clone(), 0..4usize).prop_map(|(a, b, op)| {
                let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][op];
                ExprAst::Binary(op, Box::new(a), Box::new(b))
            }),
            (inner.clone(), prop_oneof![Just(2.0), Just(-0.5), Just(3.0)]).prop_map(|(a, p)| ExprAst::Pow(Box::new(a), p)),
            (inner, 0..5usize).prop_map(|(a, f)| {
                let f = [Func::Sin, Func::Cos, Func::Exp, Func::Cosh, Func::Sinh][f];
                ExprAst::Call(f, Box::new(a))
            }),
        ]
    })
}
