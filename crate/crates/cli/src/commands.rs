//! The `verify`, `separate` and `surface-info` pipelines.

use std::sync::Arc;

use dirac2d::clifford::Representation;
use dirac2d::error::Error;
use dirac2d::expr::parse;
use dirac2d::fields::{ScalarField, TensorField, VectorField};
use dirac2d::geometry::{frame_at, Domain, FrameConvention, LiouvilleSurface, Profile};
use dirac2d::killing::*;
use dirac2d::presets::preset;
use dirac2d::sample::{random_points, random_spinor_fields, rng};
use dirac2d::separation::{assemble_and_verify, SeparationScheme};
use dirac2d::spinor_ops::*;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{RunConfig, SurfaceSpec};
use crate::report::{sci, Report, Table};
use crate::Status;

/// A command that stopped before finishing its checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub status: Status,
    pub reason: String,
}

impl Failure {
    pub fn usage(reason: impl Into<String>) -> Self {
        Failure { status: Status::Usage, reason: reason.into() }
    }

    pub fn rejected(reason: impl Into<String>) -> Self {
        Failure { status: Status::Rejected, reason: reason.into() }
    }
}

/// Errors in user input are usage errors; everything else means the
/// mathematics refused.
fn classify(e: Error) -> Failure {
    match e {
        Error::Expr(_) | Error::WrongCoordinate(..) => Failure::usage(e.to_string()),
        _ => Failure::rejected(e.to_string()),
    }
}

/// Outcome of a command: the report and how it ended.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub status: Status,
}

fn finish(mut report: Report, status: Status, reason: Option<String>) -> Outcome {
    report.text("status", status.label());
    report.int("exit_code", status.code() as u64);
    if let Some(r) = reason {
        report.text("reason", r);
    }
    Outcome { report, status }
}

/// Run a stage; a failure ends the command with whatever has been reported.
macro_rules! stage {
    ($report:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(f) => {
                let f: Failure = f;
                return Ok(finish($report, f.status, Some(f.reason)));
            }
        }
    };
}

pub struct ResolvedSurface {
    pub label: String,
    pub surface: LiouvilleSurface,
    pub domain: Domain,
    pub killing_vector: Option<VectorField>,
    pub beta: Option<String>,
    pub catalog_label: Option<String>,
}

fn override_domain(d: Domain, cfg: &RunConfig) -> Domain {
    let (u0, u1) = cfg.grid.u.unwrap_or(d.u);
    let (v0, v1) = cfg.grid.v.unwrap_or(d.v);
    Domain::new(u0, u1, v0, v1)
}

const KILLING_SEARCH_TOL: f64 = 1e-9;

/// First of `∂_u`, `∂_v`, `−v∂_u + u∂_v` passing the Killing equation.
fn find_killing_vector(s: &LiouvilleSurface, pts: &[(f64, f64)]) -> Result<Option<VectorField>, Failure> {
    for z in [VectorField::coordinate_u(), VectorField::coordinate_v(), VectorField::rotation()] {
        if killing_vector_residual(s, &z, pts).map_err(classify)? <= KILLING_SEARCH_TOL {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

pub fn resolve_surface(cfg: &RunConfig) -> Result<ResolvedSurface, Failure> {
    let default_domain = Domain::new(-1.0, 1.0, -1.0, 1.0);
    let r = match &cfg.surface {
        SurfaceSpec::Preset(name) => {
            let p = preset(name, &cfg.bindings).map_err(|e| Failure::usage(e.to_string()))?;
            ResolvedSurface {
                label: name.clone(),
                surface: p.surface,
                domain: override_domain(p.domain, cfg),
                killing_vector: p.killing_vector,
                beta: p.beta,
                catalog_label: p.catalog_label.map(String::from),
            }
        }
        SurfaceSpec::Exprs { a, b } => {
            let s = LiouvilleSurface::from_exprs(format!("A = {a}, B = {b}"), a, b, &cfg.bindings).map_err(classify)?;
            let domain = override_domain(default_domain, cfg);
            let probe = domain.grid(4, 4);
            check_positive(&s, &probe)?;
            let kv = find_killing_vector(&s, &probe)?;
            ResolvedSurface { label: s.name.clone(), surface: s, domain, killing_vector: kv, beta: None, catalog_label: None }
        }
        SurfaceSpec::Beta(beta) => {
            let s = LiouvilleSurface::from_exprs(format!("beta = {beta}"), "0", &format!("({beta})^(-2)"), &cfg.bindings).map_err(classify)?;
            ResolvedSurface {
                label: s.name.clone(),
                surface: s,
                domain: override_domain(default_domain, cfg),
                killing_vector: Some(VectorField::coordinate_u()),
                beta: Some(beta.clone()),
                catalog_label: None,
            }
        }
    };
    Ok(r)
}

fn check_positive(s: &LiouvilleSurface, pts: &[(f64, f64)]) -> Result<(), Failure> {
    for &p in pts {
        let l = s.conformal_factor(p).map_err(classify)?;
        if l.is_nan() || l <= 0.0 {
            return Err(classify(Error::NonPositiveConformalFactor { u: p.0, v: p.1, value: l }));
        }
    }
    Ok(())
}

fn describe_surface(report: &mut Report, r: &ResolvedSurface) {
    report.text("surface", &r.label);
    report.text("surface.A", r.surface.a.describe());
    report.text("surface.B", r.surface.b.describe());
    if let Some(b) = &r.beta {
        report.text("surface.beta", b);
    }
    if let Some(l) = &r.catalog_label {
        report.text("surface.catalog_label", l);
    }
    report.text("domain", format!("[{}, {}] x [{}, {}]", r.domain.u.0, r.domain.u.1, r.domain.v.0, r.domain.v.1));
}

/// Maxima over points of the determining-equation residuals and of the
/// commutator over all sample fields.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SuiteResult {
    pub determining: [f64; 4],
    pub commutator: f64,
}

impl SuiteResult {
    pub fn max(&self) -> f64 {
        self.determining.iter().copied().fold(self.commutator, f64::max)
    }

    fn merge(self, o: SuiteResult) -> SuiteResult {
        SuiteResult {
            determining: std::array::from_fn(|i| self.determining[i].max(o.determining[i])),
            commutator: self.commutator.max(o.commutator),
        }
    }
}

/// Everything a suite run needs besides the operator.
pub struct SuiteInput<'a> {
    pub surface: &'a LiouvilleSurface,
    pub points: &'a [(f64, f64)],
    pub fields: &'a [SpinorField],
    pub rep: &'a Representation,
    pub mass: f64,
    pub order: usize,
}

/// Determining equations and `[K, D]` for a symmetry operator.
pub fn symmetry_suite(input: &SuiteInput, data: &SymmetryData) -> dirac2d::Result<SuiteResult> {
    input
        .points
        .par_iter()
        .map(|&p| {
            let g = frame_at(input.surface, p, input.order, FrameConvention::Diagonal)?;
            let co = build_coefficients(&g, data)?;
            let determining = determining_equations_residuals(&g, &co)?;
            let op = PointOperator::symmetry(co);
            let mut commutator = 0.0f64;
            for f in input.fields {
                commutator = commutator.max(commutator_residual(&g, input.rep, input.mass, &op, &f.eval(&g)?)?);
            }
            Ok(SuiteResult { determining, commutator })
        })
        .try_reduce(SuiteResult::default, |a, b| Ok(a.merge(b)))
}

/// `[D∘K₁, D]` for a first-order operator `K₁`.
pub fn trivial_suite(input: &SuiteInput, data: &SymmetryData) -> dirac2d::Result<f64> {
    input
        .points
        .par_iter()
        .map(|&p| {
            let g = frame_at(input.surface, p, input.order, FrameConvention::Diagonal)?;
            let k1 = PointOperator::symmetry(build_coefficients(&g, data)?);
            let op = PointOperator::compose(PointOperator::Dirac { m: input.mass }, k1);
            let mut worst = 0.0f64;
            for f in input.fields {
                worst = worst.max(commutator_residual(&g, input.rep, input.mass, &op, &f.eval(&g)?)?);
            }
            Ok(worst)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

fn suite_row(t: &mut Table, name: &str, r: &SuiteResult, tol: f64) {
    let mut cells = vec![name.to_string()];
    cells.extend(r.determining.iter().map(|x| sci(*x)));
    cells.push(sci(r.commutator));
    cells.push(if r.max() <= tol { "pass" } else { "FAIL" }.into());
    t.row(cells);
}

fn common_header(report: &mut Report, cfg: &RunConfig) {
    report.int("seed", cfg.seed);
    report.int("jet_order", cfg.order as u64);
}

/// Build first- and second-order operators and check them.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let mut report = Report::new("verify");
    common_header(&mut report, cfg);
    let tol = cfg.tol.unwrap_or(1e-9);
    report.num("tolerance", tol);
    let rs = stage!(report, resolve_surface(cfg));
    describe_surface(&mut report, &rs);
    let mut gen = rng(cfg.seed);
    let pts = random_points(&mut gen, &rs.domain, cfg.points);
    let fields = random_spinor_fields(&mut gen, cfg.fields);
    report.int("sample_points", pts.len() as u64);
    report.int("sample_fields", fields.len() as u64);
    report.num("mass", cfg.mass);
    report.text("representation", &cfg.representation);
    stage!(report, check_positive(&rs.surface, &pts));
    let rep = Representation::by_name(&cfg.representation).expect("validated");
    let input = SuiteInput { surface: &rs.surface, points: &pts, fields: &fields, rep: &rep, mass: cfg.mass, order: cfg.order };

    let mut table = Table::new("residuals", &["suite", "eq1_E", "eq2_F", "eq3_G", "eq4_scalar", "commutator", "result"]);
    let mut worst = 0.0f64;
    match &rs.killing_vector {
        Some(z) => {
            report.text("killing_vector", &z.name);
            let first = stage!(
                report,
                assemble_symmetry_data(&rs.surface, SymmetryInputs::First { zeta: z.clone(), a_const: cfg.sym_a, g: ScalarField::constant(cfg.sym_g) }, &pts)
                    .map_err(classify)
            );
            let r = stage!(report, symmetry_suite(&input, &first).map_err(classify));
            suite_row(&mut table, "first_order", &r, tol);
            worst = worst.max(r.max());
            let t = stage!(report, trivial_suite(&input, &first).map_err(classify));
            let mut cells = vec!["trivial_D_K1".to_string()];
            cells.extend(["-", "-", "-", "-"].map(String::from));
            cells.push(sci(t));
            cells.push(if t <= tol { "pass" } else { "FAIL" }.into());
            table.row(cells);
            worst = worst.max(t);
        }
        None => report.text("killing_vector", "none (first-order operators skipped)"),
    }

    let second = assemble_symmetry_data(
        &rs.surface,
        SymmetryInputs::Second {
            k: TensorField::liouville(),
            alpha: VectorField::zero(),
            zeta: VectorField::zero(),
            a_const: Complex64::new(0.0, 0.0),
            g0: cfg.g0,
            region: rs.domain,
        },
        &pts,
    );
    let second = match second {
        Ok(d) => d,
        Err(e) => {
            if !table.rows.is_empty() {
                report.table(table);
            }
            let f = classify(e);
            return Ok(finish(report, f.status, Some(f.reason)));
        }
    };
    let sol = stage!(
        report,
        solve_g(&rs.surface, &TensorField::liouville(), rs.domain.center(), rs.domain, cfg.g0, PathKind::UThenV).map_err(classify)
    );
    report.num("g.max_curl", sol.max_curl);
    report.num("g.two_path_difference", stage!(report, sol.two_path_difference(&pts).map_err(classify)));
    let mut spread = 0.0f64;
    for &p in &pts {
        spread = spread.max((stage!(report, sol.value(p).map_err(classify)) - cfg.g0).abs());
    }
    report.num("g.max_deviation_from_g0", spread);
    report.flag("g.constant", spread <= 1e-12);
    let r = stage!(report, symmetry_suite(&input, &second).map_err(classify));
    suite_row(&mut table, "second_order", &r, tol);
    worst = worst.max(r.max());
    report.table(table);
    report.num("max_residual", worst);
    let status = if worst <= tol { Status::Pass } else { Status::ToleranceFailure };
    Ok(finish(report, status, None))
}

/// The separation `β` of the configured surface, if it has one.
fn separation_beta(cfg: &RunConfig) -> Result<String, Failure> {
    match &cfg.surface {
        SurfaceSpec::Beta(b) => Ok(b.clone()),
        SurfaceSpec::Preset(name) => {
            let p = preset(name, &cfg.bindings).map_err(|e| Failure::usage(e.to_string()))?;
            p.beta.ok_or_else(|| Failure::rejected(format!("non-revolution surface: preset `{name}` is not of the form A = 0, B = beta^-2")))
        }
        SurfaceSpec::Exprs { a, b } => {
            let ast = parse(a).map_err(|e| Failure::usage(e.to_string()))?;
            let zero = ast.is_constant() && ast.eval(0.0, &cfg.bindings).map_err(|e| Failure::usage(e.to_string()))? == 0.0;
            if zero {
                Ok(format!("({b})^(-0.5)"))
            } else {
                Err(Failure::rejected(format!("non-revolution surface: separation needs A = 0, got A = {a}")))
            }
        }
    }
}

/// Assemble the separated solution and verify it over the grid.
pub fn cmd_separate(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let mu = cfg.mu.ok_or_else(|| Failure::usage("separate needs the eigenvalue: set `mu` (or --mu)"))?;
    let mut report = Report::new("separate");
    common_header(&mut report, cfg);
    let rs = stage!(report, resolve_surface(cfg));
    let beta_text = stage!(report, separation_beta(cfg));
    describe_surface(&mut report, &rs);
    let beta: Arc<dyn Profile> = stage!(report, SeparationScheme::parse_beta(&beta_text, &cfg.bindings).map_err(classify));
    let [c1, c2, d1, d2] = cfg.amplitudes;
    let v_ref = rs.domain.center().1;
    let scheme = stage!(report, SeparationScheme::from_mu(beta, cfg.mass, mu, cfg.mu1, [c1, c2], [d1, d2], v_ref).map_err(classify));
    report.num("mass", cfg.mass);
    report.text("mu", mu);
    report.text("mu1", scheme.mu1);
    report.text("mu2", scheme.mu2);
    report.text("amplitudes", format!("c = ({c1}, {c2}), d = ({d1}, {d2})"));
    report.text("grid", format!("{} x {}", cfg.grid.nu, cfg.grid.nv));
    let r = stage!(report, assemble_and_verify(&scheme, rs.domain, cfg.grid.nu, cfg.grid.nv).map_err(classify));
    let tol = cfg.tol.unwrap_or(if r.numeric { 1e-7 } else { 1e-10 });
    report.text("b_solution", if r.numeric { "numeric (Dormand-Prince)" } else { "closed form" });
    report.num("tolerance", tol);
    let mut table = Table::new("residuals", &["check", "max_residual", "tolerance", "result"]);
    let mut ok = true;
    let mut row = |name: &str, x: f64, t: f64| {
        let pass = x <= t;
        ok &= pass;
        table.row(vec![name.into(), sci(x), sci(t), if pass { "pass" } else { "FAIL" }.into()]);
    };
    row("dirac: |D psi - m psi|", r.dirac, tol);
    row("eigen: |K psi - mu psi|", r.eigen, tol);
    row("eigen operator vs -d_uu", r.eigen_vs_duu, tol);
    row("matrix form vs general D", r.matrix_form, tol);
    row("a ODE (first)", r.odes.a_first, A_ODE_TOL);
    row("a ODE (second)", r.odes.a_second, A_ODE_TOL);
    row("b ODE", r.odes.b, tol);
    row("mu-only dependence", r.mu_only, tol);
    report.table(table);
    if let Some(p) = r.printed_b2 {
        report.num("printed_b2_difference", p);
    }
    let mut samples = Table::new("psi_samples", &["u", "v", "re_psi1", "im_psi1", "re_psi2", "im_psi2"]);
    for ((u, v), psi) in &r.samples {
        samples.row(vec![sci(*u), sci(*v), sci(psi[0].re), sci(psi[0].im), sci(psi[1].re), sci(psi[1].im)]);
    }
    report.table(samples);
    let status = if ok { Status::Pass } else { Status::ToleranceFailure };
    Ok(finish(report, status, None))
}

/// The `a` solutions are closed form, so their ODEs hold to rounding.
const A_ODE_TOL: f64 = 1e-12;

const FLAT_TOL: f64 = 1e-10;
const CONSTANT_R_TOL: f64 = 1e-8;
const INTCOND_TOL: f64 = 1e-10;

/// Curvature, Killing and integrability statistics for a surface.
pub fn cmd_surface_info(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let mut report = Report::new("surface-info");
    common_header(&mut report, cfg);
    let rs = stage!(report, resolve_surface(cfg));
    describe_surface(&mut report, &rs);
    let pts = random_points(&mut rng(cfg.seed), &rs.domain, cfg.points);
    report.int("sample_points", pts.len() as u64);
    stage!(report, check_positive(&rs.surface, &pts));

    let mut ricci = Vec::with_capacity(pts.len());
    let mut ic = Vec::with_capacity(pts.len());
    for &p in &pts {
        let g = stage!(report, frame_at(&rs.surface, p, 2, FrameConvention::Diagonal).map_err(classify));
        ricci.push(g.ricci.value().re);
        ic.push(stage!(report, integrability_condition_lhs(&rs.surface, p).map_err(classify)).abs());
    }
    let (rmin, rmax) = ricci.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let rmean = ricci.iter().sum::<f64>() / ricci.len() as f64;
    report.num("ricci.min", rmin);
    report.num("ricci.max", rmax);
    report.num("ricci.mean", rmean);
    report.flag("ricci.flat", rmin.abs().max(rmax.abs()) <= FLAT_TOL);
    report.flag("ricci.constant", rmax - rmin <= CONSTANT_R_TOL);

    let kres = stage!(report, killing_tensor_residual(&rs.surface, &TensorField::liouville(), &pts).map_err(classify));
    report.num("killing_tensor.residual", kres);
    match &rs.killing_vector {
        Some(z) => {
            report.text("killing_vector", &z.name);
            let r = stage!(report, killing_vector_residual(&rs.surface, z, &pts).map_err(classify));
            report.num("killing_vector.residual", r);
        }
        None => report.text("killing_vector", "none: the surface admits no Killing vector among d_u, d_v, rotation"),
    }

    let (icmin, icmax) = ic.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    report.num("intcond.max_abs", icmax);
    report.num("intcond.min_abs", icmin);
    report.flag("intcond.zero", icmax <= INTCOND_TOL);

    if let Some(params) = &cfg.special {
        report.text("special.k", params.k);
        report.text("special.a", format!("{:?}", params.a));
        report.text("special.b", format!("{:?}", params.b));
        report.flag("special.case_ii", params.is_case_ii());
        let (ra, rb) = stage!(report, special_system_residual(&rs.surface, params, &pts).map_err(classify));
        report.num("special.residual_A", ra);
        report.num("special.residual_B", rb);
        let rr = stage!(report, special_case_ricci_check(&rs.surface, params, &pts).map_err(classify));
        report.num("special.ricci_vs_closed_form", rr);
        report.text("special.closed_form", "R = -((A - B) k + a3/2)  (unit sphere R = +2)");
        let cr = stage!(report, case_relation_residual(&rs.surface, params, &pts).map_err(classify));
        report.num("special.case_relation", cr);
    }
    Ok(finish(report, Status::Pass, None))
}
