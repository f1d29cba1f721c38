use dirac2d::clifford::Representation;
use dirac2d::error::Error;
use dirac2d::expr::Bindings;
use dirac2d::fields::{ScalarField, TensorField, VectorField};
use dirac2d::geometry::{frame_at, FrameConvention};
use dirac2d::killing::{assemble_symmetry_data, killing_tensor_residual, killing_vector_residual, SymmetryInputs};
use dirac2d::presets::{preset, REVOLUTION_PRESETS};
use dirac2d::sample::{random_points, random_spinor_fields, rng};
use dirac2d::spinor_ops::*;
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn composed_first_order_operators_commute() {
    let rep = Representation::pauli();
    for name in REVOLUTION_PRESETS {
        let p = preset(name, &Bindings::new()).unwrap();
        let z = p.killing_vector.clone().unwrap();
        let d1 = SymmetryData::first_order(z.clone(), c(0.7), ScalarField::constant(0.3));
        let d2 = SymmetryData::first_order(z.clone(), c(-1.1), ScalarField::constant(2.0));
        let comp = compose_first_order(&d1, &d2).unwrap();
        let pts = random_points(&mut rng(21), &p.domain, 40);
        assert!(killing_tensor_residual(&p.surface, &comp.k, &pts).unwrap() <= 1e-10, "{name}");
        assert!(killing_vector_residual(&p.surface, &comp.alpha, &pts).unwrap() <= 1e-10, "{name}");
        let data = assemble_symmetry_data(
            &p.surface,
            SymmetryInputs::Second { k: comp.k, alpha: comp.alpha, zeta: comp.zeta, a_const: comp.a_const, g0: 0.0, region: p.domain },
            &pts,
        )
        .unwrap();
        let fields = random_spinor_fields(&mut rng(22), 2);
        for &q in pts.iter().take(10) {
            let g = frame_at(&p.surface, q, 4, FrameConvention::Diagonal).unwrap();
            let co = build_coefficients(&g, &data).unwrap();
            let r = determining_equations_residuals(&g, &co).unwrap();
            assert!(r.iter().all(|x| *x <= 1e-9), "{name} {r:?}");
            for f in &fields {
                let psi = f.eval(&g).unwrap();
                let cr = commutator_residual(&g, &rep, 0.8, &PointOperator::symmetry(co.clone()), &psi).unwrap();
                assert!(cr <= 1e-9, "{name} {q:?} {cr:e}");
            }
        }
    }
}

#[test]
fn dirac_after_first_order_operator_commutes() {
    let rep = Representation::separation();
    let m = 1.2;
    for name in REVOLUTION_PRESETS {
        let p = preset(name, &Bindings::new()).unwrap();
        let d1 = SymmetryData::first_order(p.killing_vector.clone().unwrap(), c(0.4), ScalarField::constant(-0.5));
        let fields = random_spinor_fields(&mut rng(23), 2);
        for q in random_points(&mut rng(24), &p.domain, 10) {
            let g = frame_at(&p.surface, q, 4, FrameConvention::Diagonal).unwrap();
            let k1 = PointOperator::symmetry(build_coefficients(&g, &d1).unwrap());
            let op = PointOperator::compose(PointOperator::Dirac { m }, k1);
            for f in &fields {
                let psi = f.eval(&g).unwrap();
                let cr = commutator_residual(&g, &rep, m, &op, &psi).unwrap();
                assert!(cr <= 1e-9, "{name} {q:?} {cr:e}");
            }
        }
    }
}

#[test]
fn compose_rejects_second_order_input() {
    let d2 = SymmetryData::second_order(TensorField::liouville(), VectorField::zero(), VectorField::zero(), c(0.0), None);
    let d1 = SymmetryData::first_order(VectorField::coordinate_u(), c(1.0), ScalarField::constant(0.0));
    assert!(matches!(compose_first_order(&d1, &d2), Err(Error::NotFirstOrder)));
}

#[test]
fn ellipsoid_tensor_is_killing_but_admits_no_operator() {
    let p = preset("ellipsoid", &Bindings::new()).unwrap();
    let pts = random_points(&mut rng(25), &p.domain, 100);
    assert!(killing_tensor_residual(&p.surface, &TensorField::liouville(), &pts).unwrap() <= 1e-9);
    let r = assemble_symmetry_data(
        &p.surface,
        SymmetryInputs::Second {
            k: TensorField::liouville(),
            alpha: VectorField::zero(),
            zeta: VectorField::zero(),
            a_const: c(0.0),
            g0: 0.0,
            region: p.domain,
        },
        &pts,
    );
    assert!(matches!(r, Err(Error::CurlViolation { .. })), "{r:?}");
}

#[test]
fn metric_multiple_is_trivial() {
    let p = preset("sphere", &Bindings::new()).unwrap();
    let pts = random_points(&mut rng(26), &p.domain, 10);
    let r = assemble_symmetry_data(
        &p.surface,
        SymmetryInputs::Second {
            k: TensorField::metric_multiple(2.0),
            alpha: VectorField::zero(),
            zeta: VectorField::zero(),
            a_const: c(0.0),
            g0: 0.0,
            region: p.domain,
        },
        &pts,
    );
    assert!(matches!(r, Err(Error::TrivialKillingTensor)));
}
