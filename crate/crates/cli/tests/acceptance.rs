//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p dirac2d-cli --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use dirac2d::clifford::{concrete_representation_check, Blade, CliffordElement, Representation};
use dirac2d::error::Error;
use dirac2d::expr::Bindings;
use dirac2d::fields::{ScalarField, TensorField, VectorField};
use dirac2d::geometry::{frame_at, ricci_scalar, Domain, FrameConvention, LiouvilleSurface};
use dirac2d::jets::Jet2;
use dirac2d::killing::*;
use dirac2d::presets::{preset, Preset, PRESET_NAMES, REVOLUTION_PRESETS};
use dirac2d::sample::{random_points, random_spinor_fields, rng};
use dirac2d::separation::{assemble_and_verify, beta_catalog, SeparationScheme};
use dirac2d::spinor_ops::*;
use dirac2d_cli::commands::{symmetry_suite, trivial_suite, SuiteInput};
use num_complex::Complex64;
use rayon::prelude::*;

const POINTS: usize = 100;
const FIELDS: usize = 5;
const ORDER: usize = 4;
const MASS: f64 = 1.0;

type Check = Result<String, String>;

/// Name, check and runtime limit in seconds.
type Criterion = (&'static str, fn() -> Check, Option<u64>);

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn load(name: &str) -> Result<Preset, String> {
    preset(name, &Bindings::new()).map_err(|e| format!("{name}: {e}"))
}

fn pts(p: &Preset, seed: u64) -> Vec<(f64, f64)> {
    random_points(&mut rng(seed), &p.domain, POINTS)
}

/// Fails with `what` when `value > tol`.
fn within(what: &str, value: f64, tol: f64) -> Result<(), String> {
    if value <= tol {
        Ok(())
    } else {
        Err(format!("{what} = {value:.3e} > {tol:e}"))
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn liouville_data(s: &LiouvilleSurface, region: Domain, points: &[(f64, f64)]) -> dirac2d::Result<SymmetryData> {
    assemble_symmetry_data(
        s,
        SymmetryInputs::Second {
            k: TensorField::liouville(),
            alpha: VectorField::zero(),
            zeta: VectorField::zero(),
            a_const: c(0.0),
            g0: 0.0,
            region,
        },
        points,
    )
}

fn clifford() -> Check {
    let mut anti = 0.0f64;
    for a in 0..2 {
        for b in 0..2 {
            let ga = CliffordElement::blade(Blade::gamma(a));
            let gb = CliffordElement::blade(Blade::gamma(b));
            let expect = CliffordElement::scalar(c(if a == b { 2.0 } else { 0.0 }));
            anti = anti.max(ga.anticommutator(&gb).sub(&expect).magnitude());
        }
    }
    if anti != 0.0 {
        return Err(format!("abstract anticommutator error {anti:e}"));
    }
    let mut worst = 0.0f64;
    for rep in [Representation::pauli(), Representation::separation()] {
        let r = concrete_representation_check(&rep);
        if !r.passed() {
            return Err(r.to_string());
        }
        worst = worst.max(r.max_product_error);
    }
    Ok(format!("anticommutators exact, 16/16 products in pauli and separation (max err {worst:e})"))
}

fn frame_error(s: &LiouvilleSurface, q: (f64, f64), conv: FrameConvention) -> dirac2d::Result<f64> {
    let g = frame_at(s, q, 3, conv)?;
    let mut worst = 0.0f64;
    for mu in 0..2 {
        for nu in 0..2 {
            let mut gl = Jet2::zero(q, 3);
            let mut gu = Jet2::zero(q, 3);
            for a in 0..2 {
                gl += &g.coframe[a][mu] * &g.coframe[a][nu];
                gu += &g.frame[a][mu] * &g.frame[a][nu];
            }
            worst = worst.max((&gl - &g.metric[mu][nu]).max_abs());
            worst = worst.max((&gu - &g.inv_metric[mu][nu]).max_abs());
        }
    }
    Ok(worst)
}

fn geometry() -> Check {
    let mut flat = 0.0f64;
    for name in ["plane-cartesian", "plane-polar", "plane-parabolic"] {
        let p = load(name)?;
        for q in pts(&p, 11) {
            flat = flat.max(ricci_scalar(&p.surface, q, 0).map_err(e)?.value().norm());
        }
    }
    within("flat |R|", flat, 1e-10)?;
    let mut curved = 0.0f64;
    for (name, expect) in [("sphere", 2.0), ("pseudosphere", -2.0)] {
        let p = load(name)?;
        for q in pts(&p, 12) {
            curved = curved.max((ricci_scalar(&p.surface, q, 0).map_err(e)?.value().re - expect).abs());
        }
    }
    within("|R - (+/-2)| on cosh/sinh presets", curved, 1e-8)?;
    let (mut frame, mut killing) = (0.0f64, 0.0f64);
    for name in PRESET_NAMES {
        let p = load(name)?;
        let q = pts(&p, 13);
        for &x in &q {
            for conv in [FrameConvention::Diagonal, FrameConvention::Antidiagonal] {
                frame = frame.max(frame_error(&p.surface, x, conv).map_err(e)?);
            }
        }
        killing = killing.max(killing_tensor_residual(&p.surface, &TensorField::liouville(), &q).map_err(e)?);
    }
    within("frame reconstruction", frame, 1e-12)?;
    within("Killing tensor residual", killing, 1e-9)?;
    Ok(format!("flat |R| {flat:.1e}, |R-(+/-2)| {curved:.1e}, frame {frame:.1e}, Killing {killing:.1e} over {} presets", PRESET_NAMES.len()))
}

fn determining() -> Check {
    let (mut worst, mut weakest_break) = (0.0f64, f64::INFINITY);
    for name in REVOLUTION_PRESETS {
        let p = load(name)?;
        let q = pts(&p, 31);
        let data = liouville_data(&p.surface, p.domain, &q).map_err(|x| format!("{name}: {x}"))?;
        let bump = ScalarField::from_uv("0.1 u", |u, _| Ok(u.scale(0.1)));
        let bad = data.clone().with_g(data.g.clone().expect("solved g").add(&bump));
        let (r, broken) = q
            .par_iter()
            .map(|&x| -> dirac2d::Result<(f64, f64)> {
                let g = frame_at(&p.surface, x, ORDER, FrameConvention::Diagonal)?;
                let ok = determining_equations_residuals(&g, &build_coefficients(&g, &data)?)?;
                let no = determining_equations_residuals(&g, &build_coefficients(&g, &bad)?)?;
                Ok((ok.into_iter().fold(0.0, f64::max), no.into_iter().fold(0.0, f64::max)))
            })
            .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))
            .map_err(e)?;
        within(&format!("{name} determining residual"), r, 1e-9)?;
        if broken <= 1e-3 {
            return Err(format!("{name}: g + 0.1u leaves residuals at {broken:.3e}"));
        }
        worst = worst.max(r);
        weakest_break = weakest_break.min(broken);
    }
    Ok(format!("max residual {worst:.1e} on 6 presets; g + 0.1u raises it to >= {weakest_break:.1e}"))
}

fn commutators() -> Check {
    let mut worst = [0.0f64; 3];
    for rep in [Representation::pauli(), Representation::separation()] {
        for name in REVOLUTION_PRESETS {
            let p = load(name)?;
            let mut gen = rng(41);
            let q = random_points(&mut gen, &p.domain, POINTS);
            let fields = random_spinor_fields(&mut gen, FIELDS);
            let input = SuiteInput { surface: &p.surface, points: &q, fields: &fields, rep: &rep, mass: MASS, order: ORDER };
            let z = p.killing_vector.clone().ok_or(format!("{name}: no Killing vector"))?;
            let first = assemble_symmetry_data(&p.surface, SymmetryInputs::First { zeta: z, a_const: c(0.5), g: ScalarField::constant(0.25) }, &q)
                .map_err(e)?;
            let second = liouville_data(&p.surface, p.domain, &q).map_err(e)?;
            let r = [
                symmetry_suite(&input, &first).map_err(e)?.max(),
                symmetry_suite(&input, &second).map_err(e)?.max(),
                trivial_suite(&input, &first).map_err(e)?,
            ];
            for (label, (w, x)) in ["first order", "second order", "D K1"].iter().zip(worst.iter_mut().zip(r)) {
                within(&format!("{} {name} {label}", rep.name), x, 1e-9)?;
                *w = w.max(x);
            }
        }
    }
    Ok(format!(
        "first {:.1e}, second {:.1e}, D K1 {:.1e}; {FIELDS} fields x {POINTS} points x 6 presets x 2 representations",
        worst[0], worst[1], worst[2]
    ))
}

fn integrability() -> Check {
    let dom = Domain::new(-1.0, 1.0, -1.0, 1.0);
    let q = random_points(&mut rng(51), &dom, POINTS);
    let mut vanish = 0.0f64;
    for b in ["1 + v^2", "2 + sin(3*v)", "exp(v)*cosh(v)"] {
        let s = LiouvilleSurface::from_exprs("const A", "0.5", b, &Bindings::new()).map_err(e)?;
        for &x in &q {
            vanish = vanish.max(integrability_condition_lhs(&s, x).map_err(e)?.abs());
        }
    }
    let para = random_points(&mut rng(52), &Domain::new(0.3, 1.7, -1.5, -0.2), POINTS);
    for a in [0.25, 1.0, 3.0] {
        let s = LiouvilleSurface::from_exprs("parabolic", "a*u^2", "a*v^2", &Bindings::from([("a".to_string(), a)])).map_err(e)?;
        for &x in &para {
            vanish = vanish.max(integrability_condition_lhs(&s, x).map_err(e)?.abs());
        }
    }
    within("IntCond on A const and au^2, av^2", vanish, 1e-10)?;
    let ell = load("ellipsoid")?;
    let mut smallest = f64::INFINITY;
    for x in pts(&ell, 53) {
        smallest = smallest.min(integrability_condition_lhs(&ell.surface, x).map_err(e)?.abs());
    }
    if smallest <= 1e-3 {
        return Err(format!("ellipsoid IntCond drops to {smallest:.3e}"));
    }
    let mut two_path = 0.0f64;
    for name in REVOLUTION_PRESETS {
        let p = load(name)?;
        let sol = solve_g(&p.surface, &TensorField::liouville(), p.domain.center(), p.domain, 0.0, PathKind::UThenV).map_err(e)?;
        two_path = two_path.max(sol.two_path_difference(&pts(&p, 54)).map_err(e)?);
    }
    within("two-path difference", two_path, 1e-8)?;
    let out = Command::new(env!("CARGO_BIN_EXE_dirac2d"))
        .args(["verify", "--preset", "ellipsoid", "--points", "20", "--fields", "1"])
        .output()
        .map_err(|x| x.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    if out.status.code() != Some(2) || !stderr.contains("integrability curl nonzero") {
        return Err(format!("ellipsoid verify exited {:?}: {}", out.status.code(), stderr.trim()));
    }
    Ok(format!(
        "IntCond {vanish:.1e} where it must vanish, >= {smallest:.2e} on the ellipsoid; two-path {two_path:.1e}; ellipsoid verify exits 2 with curl report"
    ))
}

fn special_cases() -> Check {
    let mut sys = 0.0f64;
    let mut ricci = 0.0f64;
    for a in [0.5, 1.0, 1.3] {
        let params = SpecialCaseParams::case_ii(0.0, [0.0, 4.0 * a, 0.0, 0.0]);
        let s = LiouvilleSurface::from_exprs("parabolic", "a*u^2", "a*v^2", &Bindings::from([("a".to_string(), a)])).map_err(e)?;
        let q = random_points(&mut rng(61), &Domain::new(0.3, 1.7, 0.3, 1.7), POINTS);
        let (ra, rb) = special_system_residual(&s, &params, &q).map_err(e)?;
        sys = sys.max(ra).max(rb);
        ricci = ricci.max(special_case_ricci_check(&s, &params, &q).map_err(e)?);
    }
    within("parabolic special-system residual", sys, 1e-10)?;
    within("parabolic R vs closed form", ricci, 1e-8)?;
    let mut constant = 0.0f64;
    for (name, a3, expect) in [("sphere", -4.0, 2.0), ("pseudosphere", 4.0, -2.0)] {
        let params = SpecialCaseParams::case_ii(0.0, [0.0, 0.0, -4.0, a3]);
        let p = load(name)?;
        let q = pts(&p, 62);
        let (ra, rb) = special_system_residual(&p.surface, &params, &q).map_err(e)?;
        within(&format!("{name} special-system residual"), ra.max(rb), 1e-10)?;
        within(&format!("{name} R vs closed form"), special_case_ricci_check(&p.surface, &params, &q).map_err(e)?, 1e-8)?;
        if params.ricci(0.0, 0.0) != expect || params.ricci(0.0, 0.0) != -a3 / 2.0 {
            return Err(format!("{name}: closed-form R {} differs from {expect}", params.ricci(0.0, 0.0)));
        }
        for x in q {
            constant = constant.max((ricci_scalar(&p.surface, x, 0).map_err(e)?.value().re - expect).abs());
        }
    }
    within("k = 0 constant R", constant, 1e-8)?;
    Ok(format!(
        "parabolic system {sys:.1e}, R {ricci:.1e}; k=0 gives constant R = -a3/2 ({constant:.1e}) with R = +2 on the unit sphere, so the closed form (A-B)k + a3/2 enters with a minus sign"
    ))
}

fn separation() -> Check {
    let cat = beta_catalog();
    let plane = &cat[0];
    let (mut exact, mut odes, mut mu_only) = (0.0f64, 0.0f64, 0.0f64);
    for mu in [0.25, 0.999 * MASS * MASS, MASS * MASS] {
        let s = SeparationScheme::from_mu(plane.profile().map_err(e)?, MASS, c(mu), c(1.0), [c(1.0), c(0.5)], [c(0.3), c(1.0)], 0.0).map_err(e)?;
        let r = assemble_and_verify(&s, plane.domain, 20, 20).map_err(e)?;
        within(&format!("mu = {mu} |D psi - m psi|"), r.dirac, 1e-10)?;
        within(&format!("mu = {mu} |K psi - mu psi|"), r.eigen, 1e-10)?;
        within(&format!("mu = {mu} a-ODE residual"), r.odes.a_first.max(r.odes.a_second), 1e-12)?;
        within(&format!("mu = {mu} factorization dependence"), r.mu_only, 1e-10)?;
        exact = exact.max(r.dirac).max(r.eigen);
        odes = odes.max(r.odes.a_first).max(r.odes.a_second);
        mu_only = mu_only.max(r.mu_only);
    }
    let mut numeric = 0.0f64;
    for b in cat.iter().skip(1) {
        let s = SeparationScheme::from_mu(b.profile().map_err(e)?, MASS, c(0.6), c(1.0), [c(1.0), c(0.5)], [c(0.3), c(1.0)], b.domain.center().1)
            .map_err(e)?;
        let r = assemble_and_verify(&s, b.domain, 20, 20).map_err(e)?;
        if !r.numeric {
            return Err(format!("beta = {} did not take the numeric branch", b.beta));
        }
        within(&format!("beta = {} |D psi - m psi|", b.beta), r.dirac, 1e-7)?;
        numeric = numeric.max(r.dirac);
    }
    Ok(format!(
        "beta = 1: Dirac/eigen {exact:.1e}, a-ODE {odes:.1e}, factorization {mu_only:.1e}; numeric beta in {{e^v, cosh v, sinh v, 2 - cos v}}: {numeric:.1e}"
    ))
}

fn reducibility() -> Check {
    let rep = Representation::pauli();
    let (mut killing, mut comm) = (0.0f64, 0.0f64);
    for name in REVOLUTION_PRESETS {
        let p = load(name)?;
        let z = p.killing_vector.clone().ok_or(format!("{name}: no Killing vector"))?;
        let d1 = SymmetryData::first_order(z.clone(), c(0.7), ScalarField::constant(0.3));
        let d2 = SymmetryData::first_order(z, c(-1.1), ScalarField::constant(2.0));
        let comp = compose_first_order(&d1, &d2).map_err(e)?;
        let mut gen = rng(81);
        let q = random_points(&mut gen, &p.domain, POINTS);
        let fields = random_spinor_fields(&mut gen, FIELDS);
        let k = killing_tensor_residual(&p.surface, &comp.k, &q).map_err(e)?.max(killing_vector_residual(&p.surface, &comp.alpha, &q).map_err(e)?);
        within(&format!("{name} composed Killing residual"), k, 1e-10)?;
        let data = assemble_symmetry_data(
            &p.surface,
            SymmetryInputs::Second { k: comp.k, alpha: comp.alpha, zeta: comp.zeta, a_const: comp.a_const, g0: 0.0, region: p.domain },
            &q,
        )
        .map_err(e)?;
        let input = SuiteInput { surface: &p.surface, points: &q, fields: &fields, rep: &rep, mass: MASS, order: ORDER };
        let r = symmetry_suite(&input, &data).map_err(e)?.max();
        within(&format!("{name} composed operator"), r, 1e-9)?;
        killing = killing.max(k);
        comm = comm.max(r);
    }
    let ell = load("ellipsoid")?;
    let q = pts(&ell, 82);
    let k = killing_tensor_residual(&ell.surface, &TensorField::liouville(), &q).map_err(e)?;
    within("ellipsoid Killing residual", k, 1e-9)?;
    match liouville_data(&ell.surface, ell.domain, &q) {
        Err(Error::CurlViolation { max_curl, .. }) => Ok(format!(
            "composed Killing {killing:.1e}, commutator {comm:.1e}; ellipsoid tensor Killing ({k:.1e}) but rejected, curl {max_curl:.2e}"
        )),
        Ok(_) => Err("ellipsoid operator was accepted".into()),
        Err(x) => Err(format!("ellipsoid rejected for the wrong reason: {x}")),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("clifford", clifford, Some(1)),
        ("geometry", geometry, Some(10)),
        ("determining equations", determining, Some(30)),
        ("commutator", commutators, Some(60)),
        ("integrability", integrability, None),
        ("special cases", special_cases, None),
        ("separation", separation, Some(60)),
        ("reducibility", reducibility, None),
    ];
    let mut failed = 0;
    for (n, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let took = start.elapsed();
        if let (Ok(_), Some(l)) = (&result, limit) {
            if took > Duration::from_secs(l) {
                result = Err(format!("took {:.2} s, limit {l} s", took.as_secs_f64()));
            }
        }
        let limit = limit.map(|l| format!(" / {l} s")).unwrap_or_default();
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({:.2} s{limit}) {detail}", n + 1, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({:.2} s{limit}) {why}", n + 1, took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
