//! Separation of variables for `A = 0`, `B = β(v)^{-2}` in the antidiagonal
//! frame `e_1 = β∂_v`, `e_2 = −β∂_u`, with `ψ = (a₁(u)b₁(v), a₂(u)b₂(v))`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::clifford::Representation;
use crate::error::{Error, Result};
use crate::expr::Bindings;
use crate::fields::{ScalarField, TensorField, VectorField};
use crate::geometry::{frame_at, spinor_norm, spinor_sub, Domain, ExprProfile, FrameConvention, LiouvilleSurface, PointGeometry, Profile, SpinorJet};
use crate::jets::{taylor_ode, Jet2, JetError, Var};
use crate::numerics::{Dopri5, OdeOptions};
use crate::spinor_ops::{build_coefficients, dirac_apply, symmetry_apply, SpinorField, SymmetryData};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Jet order used by the verification sweep: two orders for `K`, one spare.
const SWEEP_ORDER: usize = 4;

/// `B = β^{-2}` for a profile `β(v)`.
#[derive(Debug, Clone)]
pub struct InverseSquare {
    pub beta: Arc<dyn Profile>,
}

impl Profile for InverseSquare {
    fn jet(&self, arg: &Jet2) -> Result<Jet2> {
        let b = self.beta.jet(arg)?;
        if b.value().norm() == 0.0 {
            return Err(Error::BetaZero(arg.value().re));
        }
        Ok(b.powi(-2)?)
    }

    fn is_constant(&self) -> bool {
        self.beta.is_constant()
    }

    fn describe(&self) -> String {
        format!("({})^(-2)", self.beta.describe())
    }
}

#[derive(Debug, Clone)]
struct Zero;

impl Profile for Zero {
    fn jet(&self, arg: &Jet2) -> Result<Jet2> {
        Ok(arg.zero_like())
    }

    fn is_constant(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        "0".into()
    }
}

/// A separation problem: `β`, mass, separation constants and amplitudes.
#[derive(Debug, Clone)]
pub struct SeparationScheme {
    pub beta: Arc<dyn Profile>,
    pub m: f64,
    /// Stored as given; `μ₂ = μ/μ₁` when built with [`SeparationScheme::from_mu`].
    pub mu: Complex64,
    pub mu1: Complex64,
    pub mu2: Complex64,
    pub c: [Complex64; 2],
    pub d: [Complex64; 2],
    /// Where the numerically integrated `b` starts, with
    /// `b(v_ref) = (d₁, d₂/μ₁)`.
    pub v_ref: f64,
}

impl SeparationScheme {
    pub fn new(beta: Arc<dyn Profile>, m: f64, mu1: Complex64, mu2: Complex64, c: [Complex64; 2], d: [Complex64; 2], v_ref: f64) -> Result<Self> {
        if mu1.norm() == 0.0 || mu2.norm() == 0.0 {
            return Err(Error::InvalidScheme("mu1 and mu2 must be nonzero".into()));
        }
        Ok(SeparationScheme { beta, m, mu: mu1 * mu2, mu1, mu2, c, d, v_ref })
    }

    /// Split `μ = μ₁ · (μ/μ₁)`.
    pub fn from_mu(beta: Arc<dyn Profile>, m: f64, mu: Complex64, mu1: Complex64, c: [Complex64; 2], d: [Complex64; 2], v_ref: f64) -> Result<Self> {
        if mu1.norm() == 0.0 {
            return Err(Error::InvalidScheme("mu1 must be nonzero".into()));
        }
        let mut s = Self::new(beta, m, mu1, mu / mu1, c, d, v_ref)?;
        s.mu = mu;
        Ok(s)
    }

    pub fn parse_beta(text: &str, bindings: &Bindings) -> Result<Arc<dyn Profile>> {
        let p = ExprProfile::parse(text, bindings)?;
        if p.ast.coords().contains(&crate::expr::Coord::U) {
            return Err(Error::WrongCoordinate(text.to_string(), "v"));
        }
        Ok(Arc::new(p))
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn surface(&self) -> LiouvilleSurface {
        LiouvilleSurface::new(
            format!("beta = {}", self.beta.describe()),
            Arc::new(Zero),
            Arc::new(InverseSquare { beta: self.beta.clone() }),
        )
    }

    /// Constant `β`, where `b` has a closed form.
    pub fn is_cartesian(&self) -> bool {
        self.beta.is_constant()
    }

    /// Same `μ`, different split `μ₁ → factor·μ₁`.
    pub fn refactored(&self, factor: Complex64) -> Result<Self> {
        Self::from_mu(self.beta.clone(), self.m, self.mu(), self.mu1 * factor, self.c, self.d, self.v_ref)
    }

    pub fn a_solution(&self) -> ASolution {
        ASolution { mu: self.mu, mu1: self.mu1, mu2: self.mu2, c: self.c }
    }

    pub fn b_solution(&self) -> Result<BSolution> {
        b_solutions(self)
    }

    /// `ψ = (a₁b₁, a₂b₂)`.
    pub fn field(&self) -> Result<SpinorField> {
        let a = self.a_solution();
        let b = self.b_solution()?;
        Ok(SpinorField::new("separated", move |u, v| {
            let a = a.eval(u);
            let b = b.eval(v)?;
            Ok([&a[0] * &b[0], &a[1] * &b[1]])
        }))
    }

    /// Data of the eigen-operator `−∂_uu`: `K = −(∂_u⊗∂_u)` with
    /// `g = β′²/(4β²)`.
    pub fn eigen_operator_data(&self) -> SymmetryData {
        let beta = self.beta.clone();
        let g = ScalarField::from_uv("beta'^2/(4 beta^2)", move |_, v| {
            let b = beta.jet(v)?;
            let db = b.d(Var::V);
            Ok((&db * &db * 0.25) * b.powi(-2)?)
        });
        SymmetryData::second_order(TensorField::liouville().scaled(-1.0), VectorField::zero(), VectorField::zero(), Complex64::new(0.0, 0.0), Some(g))
    }
}

/// Frame data in the separation frame; fails where `β` vanishes.
pub fn d5_frame(beta: &Arc<dyn Profile>, p: (f64, f64), order: usize) -> Result<PointGeometry> {
    let b0 = beta.jet(&Jet2::constant(p, 0, p.1))?.value();
    if b0.norm() == 0.0 {
        return Err(Error::BetaZero(p.1));
    }
    let s = LiouvilleSurface::new("d5", Arc::new(Zero), Arc::new(InverseSquare { beta: beta.clone() }));
    frame_at(&s, p, order, FrameConvention::Antidiagonal)
}

/// `β[(0,−1;1,0)∂_u + (i,0;0,−i)∂_v]ψ + (i/2)diag(−β′, β′)ψ − mψ`.
pub fn dirac_matrix_form(beta: &dyn Profile, m: f64, psi: &SpinorJet, v: &Jet2) -> Result<SpinorJet> {
    let b = beta.jet(v)?;
    let db = b.d(Var::V);
    let du = |k: usize| psi[k].d(Var::U);
    let dv = |k: usize| psi[k].d(Var::V);
    let half_i = Complex64::new(0.0, 0.5);
    let first = &b * &(-du(1) + dv(0) * I) - &(&db * &psi[0]).scale(half_i) - &psi[0] * m;
    let second = &b * &(du(0) - dv(1) * I) + (&db * &psi[1]).scale(half_i) - &psi[1] * m;
    Ok([first, second])
}

/// `a₁ = c₁ sin(√μ u) + c₂ cos(√μ u)`, `a₂ = (√μ/μ₂)(−c₂ sin(√μ u) + c₁ cos(√μ u))`.
#[derive(Debug, Clone, Copy)]
pub struct ASolution {
    pub mu: Complex64,
    pub mu1: Complex64,
    pub mu2: Complex64,
    pub c: [Complex64; 2],
}

impl ASolution {
    pub fn eval(&self, u: &Jet2) -> [Jet2; 2] {
        let r = self.mu.sqrt();
        let x = u.scale(r);
        let (s, c) = (x.sin(), x.cos());
        let a1 = s.scale(self.c[0]) + c.scale(self.c[1]);
        let a2 = (c.scale(self.c[0]) - s.scale(self.c[1])).scale(r / self.mu2);
        [a1, a2]
    }
}

/// `a` from the separation constants; `μ₂ = 0` is rejected.
pub fn a_solutions(mu1: Complex64, mu2: Complex64, c: [Complex64; 2]) -> Result<ASolution> {
    if mu2.norm() == 0.0 {
        return Err(Error::InvalidScheme("mu2 must be nonzero".into()));
    }
    Ok(ASolution { mu: mu1 * mu2, mu1, mu2, c })
}

/// Solutions of the `b` equations.
#[derive(Debug, Clone)]
pub enum BSolution {
    /// Constant `β = β₀`: `b₁ = d₁ sin(Mv) + d₂ cos(Mv)` with
    /// `M = √(m²/β₀² − μ)` (`b₁ = d₁v + d₂` when `M = 0`), and
    /// `b₂ = (−ib₁′ + (m/β₀)b₁)/μ₁`.
    Closed {
        beta0: f64,
        m: f64,
        mu1: Complex64,
        big_m: Complex64,
        d: [Complex64; 2],
    },
    /// Integrated from `b(v_ref) = (d₁, d₂/μ₁)`.
    Numeric {
        beta: Arc<dyn Profile>,
        m: f64,
        mu1: Complex64,
        mu2: Complex64,
        v_ref: f64,
        start: [Complex64; 2],
    },
}

/// `b` for the scheme: closed form for constant `β`, otherwise numerical.
pub fn b_solutions(s: &SeparationScheme) -> Result<BSolution> {
    if s.mu1.norm() == 0.0 {
        return Err(Error::InvalidScheme("mu1 must be nonzero".into()));
    }
    if s.is_cartesian() {
        let beta0 = s.beta.jet(&Jet2::constant((0.0, 0.0), 0, 0.0))?.value().re;
        if beta0 == 0.0 {
            return Err(Error::BetaZero(0.0));
        }
        let big_m = (Complex64::new(s.m * s.m / (beta0 * beta0), 0.0) - s.mu()).sqrt();
        Ok(BSolution::Closed { beta0, m: s.m, mu1: s.mu1, big_m, d: s.d })
    } else {
        Ok(BSolution::Numeric {
            beta: s.beta.clone(),
            m: s.m,
            mu1: s.mu1,
            mu2: s.mu2,
            v_ref: s.v_ref,
            start: [s.d[0], s.d[1] / s.mu1],
        })
    }
}

/// Right-hand side of `b′ = M(v) b`.
fn b_rhs(beta: &Jet2, m: f64, mu1: Complex64, mu2: Complex64, b: &[Jet2]) -> Vec<Jet2> {
    let db = beta.d(Var::U);
    let inv = beta.recip().expect("beta checked nonzero");
    let half_log = &db * &inv * 0.5;
    let m_over = &inv * m;
    let b1 = b[1].scale(mu1 * I) + &half_log * &b[0] - (&m_over * &b[0]).scale(I);
    let b2 = b[0].scale(-mu2 * I) + &half_log * &b[1] + (&m_over * &b[1]).scale(I);
    vec![b1, b2]
}

impl BSolution {
    pub fn is_numeric(&self) -> bool {
        matches!(self, BSolution::Numeric { .. })
    }

    pub fn eval(&self, v: &Jet2) -> Result<[Jet2; 2]> {
        match self {
            BSolution::Closed { beta0, m, mu1, big_m, d } => {
                let (b1, b1p) = if big_m.norm() == 0.0 {
                    (v.scale(d[0]) + v.constant_like(d[1]), v.constant_like(d[0]))
                } else {
                    let x = v.scale(*big_m);
                    let (s, c) = (x.sin(), x.cos());
                    (s.scale(d[0]) + c.scale(d[1]), (c.scale(d[0]) - s.scale(d[1])).scale(*big_m))
                };
                let b2 = (b1p.scale(-I) + &b1 * (m / beta0)).scale(mu1.inv());
                Ok([b1, b2])
            }
            BSolution::Numeric { beta, m, mu1, mu2, .. } => {
                let x = v.value().re;
                let st = self.state(x)?;
                let series = taylor_ode(x, &st, v.order(), |t, b| {
                    let bj = beta.jet(t).map_err(|e| match e {
                        Error::Jet(j) => j,
                        _ => JetError::Singular { function: "beta", at: t.value() },
                    })?;
                    if bj.value().norm() == 0.0 {
                        return Err(JetError::Singular { function: "1/beta", at: t.value() });
                    }
                    Ok(b_rhs(&bj, *m, *mu1, *mu2, b))
                })?;
                Ok([v.compose_series(&series[0]), v.compose_series(&series[1])])
            }
        }
    }

    /// `(b₁, b₂)` at `v` for the numerical branch.
    fn state(&self, v: f64) -> Result<Vec<Complex64>> {
        let BSolution::Numeric { beta, m, mu1, mu2, v_ref, start } = self else {
            let b = self.eval(&Jet2::constant((0.0, v), 0, v))?;
            return Ok(vec![b[0].value(), b[1].value()]);
        };
        let mut y = [start[0].re, start[0].im, start[1].re, start[1].im];
        let mut failure = None;
        let opts = OdeOptions { abs_tol: 1e-12, rel_tol: 1e-12, ..OdeOptions::default() };
        Dopri5::new(
            |t, s: &[f64], ds: &mut [f64]| {
                let bj = match beta.jet(&Jet2::variable((t, 0.0), 1, Var::U)) {
                    Ok(j) if j.value().norm() != 0.0 => j,
                    Ok(_) => {
                        failure.get_or_insert(Error::BetaZero(t));
                        ds.iter_mut().for_each(|x| *x = 0.0);
                        return;
                    }
                    Err(e) => {
                        failure.get_or_insert(e);
                        ds.iter_mut().for_each(|x| *x = 0.0);
                        return;
                    }
                };
                let b = [
                    Jet2::constant((t, 0.0), 1, Complex64::new(s[0], s[1])),
                    Jet2::constant((t, 0.0), 1, Complex64::new(s[2], s[3])),
                ];
                let r = b_rhs(&bj, *m, *mu1, *mu2, &b);
                ds[0] = r[0].value().re;
                ds[1] = r[0].value().im;
                ds[2] = r[1].value().re;
                ds[3] = r[1].value().im;
            },
            opts,
        )
        .integrate(*v_ref, v, &mut y)?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(vec![Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])])
    }
}

/// `b₂` exactly as printed for `β = 1`:
/// `((d₁ + iMd₂) sin(Mv) + (d₂ − iMd₁) cos(Mv))/μ₁` with `M = √(m² − μ)`.
pub fn printed_cartesian_b2(m: f64, mu: Complex64, mu1: Complex64, d: [Complex64; 2], v: f64) -> Complex64 {
    let big_m = (Complex64::new(m * m, 0.0) - mu).sqrt();
    let (s, c) = ((big_m * v).sin(), (big_m * v).cos());
    ((d[0] + I * big_m * d[1]) * s + (d[1] - I * big_m * d[0]) * c) / mu1
}

/// Residuals of the separated equations at the listed points.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OdeResiduals {
    /// `a₂′ + μ₁a₁`, `a₁′ − μ₂a₂`
    pub a_first: f64,
    /// `a″ᵢ + μaᵢ`
    pub a_second: f64,
    /// the two `b` relations
    pub b: f64,
}

pub fn separated_ode_residuals(s: &SeparationScheme, a: &ASolution, b: &BSolution, points: &[(f64, f64)]) -> Result<OdeResiduals> {
    let mut r = OdeResiduals::default();
    let mu = s.mu;
    for &p in points {
        let u = Jet2::variable(p, 2, Var::U);
        let [a1, a2] = a.eval(&u);
        let (a1p, a2p) = (a1.d(Var::U), a2.d(Var::U));
        r.a_first = r.a_first.max((a2p.value() + s.mu1 * a1.value()).norm()).max((a1p.value() - s.mu2 * a2.value()).norm());
        r.a_second = r
            .a_second
            .max((a1p.d(Var::U).value() + mu * a1.value()).norm())
            .max((a2p.d(Var::U).value() + mu * a2.value()).norm());

        let v = Jet2::variable(p, 1, Var::V);
        let [b1, b2] = b.eval(&v)?;
        let beta = s.beta.jet(&v)?;
        let (bv, dbv) = (beta.value(), beta.d(Var::V).value());
        let hl = dbv / (2.0 * bv);
        let mb = s.m / bv;
        let (b1v, b2v) = (b1.value(), b2.value());
        let (b1p, b2p) = (b1.d(Var::V).value(), b2.d(Var::V).value());
        let e1 = -I * b1p + I * hl * b1v + mb * b1v - s.mu1 * b2v;
        let e2 = I * b2p - I * hl * b2v + mb * b2v - s.mu2 * b1v;
        r.b = r.b.max(e1.norm()).max(e2.norm());
    }
    Ok(r)
}

/// Outcome of [`assemble_and_verify`]; all residuals are maxima over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    pub beta: String,
    pub m: f64,
    pub mu: Complex64,
    pub mu1: Complex64,
    pub mu2: Complex64,
    pub numeric: bool,
    pub points: usize,
    /// `‖Dψ − mψ‖`
    pub dirac: f64,
    /// `‖Kψ − μψ‖` with the built eigen-operator
    pub eigen: f64,
    /// `‖Kψ + ∂_uu ψ‖`: the built operator against `−∂_uu`
    pub eigen_vs_duu: f64,
    /// `‖matrix form − general Dirac operator‖` on `ψ`
    pub matrix_form: f64,
    pub odes: OdeResiduals,
    /// `max |ψᵢ − ψ̃ᵢ|` for the split `μ₁ → 2μ₁`
    pub mu_only: f64,
    /// `max |printed b₂ − derived b₂|`, only for `β = 1`
    pub printed_b2: Option<f64>,
    pub samples: Vec<((f64, f64), [Complex64; 2])>,
}

/// Assemble `ψ` and check it over an `nu × nv` grid on `domain`.
pub fn assemble_and_verify(s: &SeparationScheme, domain: Domain, nu: usize, nv: usize) -> Result<SeparationReport> {
    let rep = Representation::separation();
    let field = s.field()?;
    let alt = s.refactored(Complex64::new(2.0, 0.0))?.field()?;
    let data = s.eigen_operator_data();
    let a = s.a_solution();
    let b = s.b_solution()?;
    let grid = domain.grid(nu, nv);
    let mut r = SeparationReport {
        beta: s.beta.describe(),
        m: s.m,
        mu: s.mu(),
        mu1: s.mu1,
        mu2: s.mu2,
        numeric: b.is_numeric(),
        points: grid.len(),
        dirac: 0.0,
        eigen: 0.0,
        eigen_vs_duu: 0.0,
        matrix_form: 0.0,
        odes: separated_ode_residuals(s, &a, &b, &grid)?,
        mu_only: 0.0,
        printed_b2: None,
        samples: Vec::new(),
    };
    for (idx, &p) in grid.iter().enumerate() {
        let g = d5_frame(&s.beta, p, SWEEP_ORDER)?;
        let psi = field.eval(&g)?;
        r.dirac = r.dirac.max(spinor_norm(&dirac_apply(&g, &rep, s.m, &psi)?));
        let mf = dirac_matrix_form(s.beta.as_ref(), s.m, &psi, &g.v)?;
        r.matrix_form = r.matrix_form.max(spinor_norm(&spinor_sub(&mf, &dirac_apply(&g, &rep, s.m, &psi)?)));
        let coeffs = build_coefficients(&g, &data)?;
        let kpsi = symmetry_apply(&g, &rep, &coeffs, &psi)?;
        let mupsi = [psi[0].scale(s.mu()), psi[1].scale(s.mu())];
        r.eigen = r.eigen.max(spinor_norm(&spinor_sub(&kpsi, &mupsi)));
        let duu = [-psi[0].d(Var::U).d(Var::U), -psi[1].d(Var::U).d(Var::U)];
        r.eigen_vs_duu = r.eigen_vs_duu.max(spinor_norm(&spinor_sub(&kpsi, &duu)));
        let other = alt.eval(&g)?;
        r.mu_only = r.mu_only.max(spinor_norm(&spinor_sub(&psi, &other)));
        if idx % nv.max(1) == 0 {
            r.samples.push((p, [psi[0].value(), psi[1].value()]));
        }
    }
    if let BSolution::Closed { beta0, .. } = b {
        if beta0 == 1.0 {
            let mut d = 0.0f64;
            for &(_, v) in &grid {
                let derived = b.eval(&Jet2::constant((0.0, v), 0, v))?[1].value();
                d = d.max((printed_cartesian_b2(s.m, s.mu, s.mu1, s.d, v) - derived).norm());
            }
            r.printed_b2 = Some(d);
        }
    }
    Ok(r)
}

/// One `β` preset of the separation catalog.
#[derive(Debug, Clone)]
pub struct BetaPreset {
    /// Named by the computed geometry.
    pub name: &'static str,
    pub beta: &'static str,
    /// What the catalog listing calls this `β`.
    pub catalog_label: &'static str,
    pub domain: Domain,
    pub bindings: Bindings,
}

impl BetaPreset {
    pub fn profile(&self) -> Result<Arc<dyn Profile>> {
        SeparationScheme::parse_beta(self.beta, &self.bindings)
    }

    pub fn surface(&self) -> Result<LiouvilleSurface> {
        let beta = self.profile()?;
        Ok(LiouvilleSurface::new(self.name, Arc::new(Zero), Arc::new(InverseSquare { beta })))
    }

    /// `(min R, max R)` over a grid on the domain.
    pub fn ricci_range(&self) -> Result<(f64, f64)> {
        let s = self.surface()?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in self.domain.grid(5, 5) {
            let r = frame_at(&s, p, 2, FrameConvention::Diagonal)?.ricci.value().re;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        Ok((lo, hi))
    }
}

/// `β ∈ {1, e^v, cosh v, sinh v, k − cos v}` with `k = 2`.
pub fn beta_catalog() -> Vec<BetaPreset> {
    let torus = Bindings::from([("k".to_string(), 2.0)]);
    vec![
        BetaPreset { name: "plane-cartesian", beta: "1", catalog_label: "plane, Cartesian coordinates", domain: Domain::new(-1.0, 1.0, -1.0, 1.0), bindings: Bindings::new() },
        BetaPreset { name: "plane-polar", beta: "exp(v)", catalog_label: "plane, polar coordinates", domain: Domain::new(-1.0, 1.0, -1.0, 1.0), bindings: Bindings::new() },
        BetaPreset { name: "sphere", beta: "cosh(v)", catalog_label: "pseudo-sphere", domain: Domain::new(-1.0, 1.0, -1.0, 1.0), bindings: Bindings::new() },
        BetaPreset { name: "pseudosphere", beta: "sinh(v)", catalog_label: "sphere", domain: Domain::new(-1.0, 1.0, 0.5, 2.0), bindings: Bindings::new() },
        BetaPreset { name: "torus", beta: "k - cos(v)", catalog_label: "torus", domain: Domain::new(-1.0, 1.0, -1.0, 1.0), bindings: torus },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn beta(text: &str) -> Arc<dyn Profile> {
        SeparationScheme::parse_beta(text, &Bindings::new()).unwrap()
    }

    #[test]
    fn a_solutions_unit_case() {
        let a = a_solutions(c(1.0), c(1.0), [c(1.0), c(0.0)]).unwrap();
        let u = Jet2::variable((0.7, 0.0), 0, Var::U);
        let [a1, a2] = a.eval(&u);
        assert!((a1.value() - 0.7f64.sin()).norm() < 1e-15);
        assert!((a2.value() - 0.7f64.cos()).norm() < 1e-15);
        assert!(a_solutions(c(1.0), c(0.0), [c(1.0), c(0.0)]).is_err());
    }

    #[test]
    fn big_m_for_unit_mass() {
        let s = SeparationScheme::from_mu(beta("1"), 1.0, c(0.75), c(1.0), [c(1.0), c(0.0)], [c(1.0), c(0.0)], 0.0).unwrap();
        match s.b_solution().unwrap() {
            BSolution::Closed { big_m, .. } => assert!((big_m - 0.5).norm() < 1e-15),
            _ => panic!("expected closed form"),
        }
    }

    #[test]
    fn matrix_form_constant_spinor_with_exponential_beta() {
        let v = Jet2::variable((0.0, 0.3), 2, Var::V);
        let psi = [v.constant_like(c(1.0)), v.constant_like(c(2.0))];
        let out = dirac_matrix_form(beta("exp(v)").as_ref(), 0.0, &psi, &v).unwrap();
        let b1 = 0.3f64.exp();
        assert!((out[0].value() - Complex64::new(0.0, -0.5 * b1)).norm() < 1e-14);
        assert!((out[1].value() - Complex64::new(0.0, b1)).norm() < 1e-14);
    }

    #[test]
    fn zero_beta_rejected_by_frame() {
        assert!(matches!(d5_frame(&beta("v"), (0.0, 0.0), 2), Err(Error::BetaZero(_))));
    }

    #[test]
    fn catalog_labels() {
        let cat = beta_catalog();
        assert_eq!(cat.len(), 5);
        let sphere = cat.iter().find(|b| b.name == "sphere").unwrap();
        assert_eq!(sphere.beta, "cosh(v)");
    }
}
