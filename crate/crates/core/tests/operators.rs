use dirac2d::clifford::Representation;
use dirac2d::expr::Bindings;
use dirac2d::fields::{ScalarField, TensorField, VectorField};
use dirac2d::geometry::{frame_at, Domain, FrameConvention, LiouvilleSurface};
use dirac2d::killing::{assemble_symmetry_data, SymmetryInputs};
use dirac2d::spinor_ops::*;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sphere() -> LiouvilleSurface {
    LiouvilleSurface::from_exprs("sphere", "0", "cosh(v)^(-2)", &Bindings::new()).unwrap()
}

fn test_field() -> SpinorField {
    SpinorField::polynomial(vec![
        (0, 0, [c(0.3, -0.2), c(1.0, 0.5)]),
        (1, 2, [c(-0.7, 0.1), c(0.2, 0.0)]),
        (3, 0, [c(0.0, 0.4), c(-0.5, 0.3)]),
        (2, 2, [c(0.25, 0.0), c(0.0, -0.6)]),
    ])
}

#[test]
fn sphere_second_order_operator_commutes() {
    let s = sphere();
    let dom = Domain::new(-1.0, 1.0, -1.0, 1.0);
    let pts = dom.grid(4, 4);
    let data = assemble_symmetry_data(
        &s,
        SymmetryInputs::Second {
            k: TensorField::liouville(),
            alpha: VectorField::zero(),
            zeta: VectorField::zero(),
            a_const: c(0.0, 0.0),
            g0: 0.0,
            region: dom,
        },
        &pts,
    )
    .unwrap();
    let rep = Representation::pauli();
    for p in dom.grid(3, 3) {
        let g = frame_at(&s, p, 6, FrameConvention::Diagonal).unwrap();
        let co = build_coefficients(&g, &data).unwrap();
        let r = determining_equations_residuals(&g, &co).unwrap();
        assert!(r.iter().all(|x| *x < 1e-9), "{p:?} {r:?}");
        let psi = test_field().eval(&g).unwrap();
        let cr = commutator_residual(&g, &rep, 1.3, &PointOperator::symmetry(co), &psi).unwrap();
        assert!(cr < 1e-9, "{p:?} {cr}");
    }
}

#[test]
fn sphere_first_order_operator_commutes() {
    let s = sphere();
    let data = SymmetryData::first_order(VectorField::coordinate_u(), c(1.5, 0.0), ScalarField::constant(5.0));
    let rep = Representation::separation();
    for p in [(0.2, 0.3), (-0.5, 0.9)] {
        let g = frame_at(&s, p, 6, FrameConvention::Diagonal).unwrap();
        let co = build_coefficients(&g, &data).unwrap();
        let r = determining_equations_residuals(&g, &co).unwrap();
        assert!(r.iter().all(|x| *x < 1e-12), "{r:?}");
        let psi = test_field().eval(&g).unwrap();
        let cr = commutator_residual(&g, &rep, 0.7, &PointOperator::symmetry(co), &psi).unwrap();
        assert!(cr < 1e-12, "{cr}");
    }
}

#[test]
fn perturbing_g_breaks_the_determining_equations() {
    let s = sphere();
    let dom = Domain::new(-1.0, 1.0, -1.0, 1.0);
    let data = assemble_symmetry_data(
        &s,
        SymmetryInputs::Second {
            k: TensorField::liouville(),
            alpha: VectorField::zero(),
            zeta: VectorField::zero(),
            a_const: c(0.0, 0.0),
            g0: 0.0,
            region: dom,
        },
        &dom.grid(3, 3),
    )
    .unwrap();
    let bump = ScalarField::from_uv("0.1 u", |u, _| Ok(u.scale(0.1)));
    let bad = data.clone().with_g(data.g.clone().unwrap().add(&bump));
    let g = frame_at(&s, (0.3, -0.4), 4, FrameConvention::Diagonal).unwrap();
    let r = determining_equations_residuals(&g, &build_coefficients(&g, &bad).unwrap()).unwrap();
    assert!(r.iter().any(|x| *x > 1e-3), "{r:?}");
    let ok = determining_equations_residuals(&g, &build_coefficients(&g, &data).unwrap()).unwrap();
    assert!(ok.iter().all(|x| *x <= 1e-9));
}

#[test]
fn missing_g_is_reported() {
    let data = SymmetryData::second_order(TensorField::liouville(), VectorField::zero(), VectorField::zero(), c(0.0, 0.0), None);
    let g = frame_at(&sphere(), (0.1, 0.1), 4, FrameConvention::Diagonal).unwrap();
    assert!(matches!(build_coefficients(&g, &data), Err(dirac2d::Error::MissingG)));
}
