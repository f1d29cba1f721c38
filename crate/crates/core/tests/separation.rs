use dirac2d::separation::*;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn cartesian_scheme_verifies() {
    let cat = beta_catalog();
    let plane = &cat[0];
    for mu in [0.25, 0.999, 1.0] {
        let s = SeparationScheme::from_mu(plane.profile().unwrap(), 1.0, c(mu, 0.0), c(0.5, 0.2), [c(1.0, 0.3), c(-0.4, 0.0)], [c(0.2, -0.1), c(0.7, 0.0)], 0.0).unwrap();
        let r = assemble_and_verify(&s, plane.domain, 20, 20).unwrap();
        println!("{r:?}");
        assert!(r.dirac < 1e-10 && r.eigen < 1e-10 && r.mu_only < 1e-10 && r.matrix_form < 1e-10, "{r:?}");
        assert!(r.odes.a_first < 1e-12 && r.odes.a_second < 1e-12 && r.odes.b < 1e-10, "{r:?}");
    }
}

#[test]
fn curved_schemes_verify() {
    for preset in beta_catalog().iter().skip(1) {
        let v_ref = preset.domain.center().1;
        let s = SeparationScheme::from_mu(preset.profile().unwrap(), 1.0, c(0.6, 0.0), c(1.5, 0.0), [c(1.0, 0.0), c(0.5, 0.5)], [c(0.3, 0.0), c(1.0, -0.2)], v_ref).unwrap();
        let r = assemble_and_verify(&s, preset.domain, 20, 20).unwrap();
        println!("{} {:?} R={:?}", preset.name, (r.dirac, r.eigen, r.eigen_vs_duu, r.matrix_form, r.mu_only, r.odes), preset.ricci_range().unwrap());
        assert!(r.dirac < 1e-7 && r.eigen < 1e-10 && r.matrix_form < 1e-10, "{} {r:?}", preset.name);
    }
}
