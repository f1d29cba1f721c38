//! Killing vectors and tensors, the integrability machinery for the scalar
//! coefficient `g`, the special-case system and assembly of symmetry data.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{ScalarField, TensorField, VectorField};
use crate::geometry::{frame_at, Domain, FrameConvention, FrameTensor, LiouvilleSurface, PointGeometry, Profile};
use crate::jets::{taylor_ode, Jet2, Var};
use crate::numerics::{integrate_real, Dopri5, OdeOptions};
use crate::spinor_ops::SymmetryData;

/// Closedness tolerance on `∂_u ω_v − ∂_v ω_u`, relative to `1 + |∂ω|`.
pub const CURL_TOL: f64 = 1e-9;

/// Jet order used when a geometric quantity is only needed at a point.
const POINT_ORDER: usize = 4;

/// `max |∇^{(a}ζ^{b)}|` at the base point.
pub fn killing_vector_pointwise(g: &PointGeometry, z: &[Jet2; 2]) -> f64 {
    let d = g.vector_derivative(z);
    let mut r = 0.0f64;
    for a in 0..2 {
        for b in 0..2 {
            r = r.max(((&d[a][b] + &d[b][a]) * 0.5).value().norm());
        }
    }
    r
}

/// `max |∇^{(d}K^{ab)}|` at the base point.
pub fn killing_tensor_pointwise(g: &PointGeometry, k: &[[Jet2; 2]; 2]) -> f64 {
    g.covariant_derivative(&FrameTensor::matrix(k.clone())).symmetrized().magnitude()
}

/// Largest Killing-equation residual of `z` over `points`.
pub fn killing_vector_residual(s: &LiouvilleSurface, z: &VectorField, points: &[(f64, f64)]) -> Result<f64> {
    let mut r = 0.0f64;
    for &p in points {
        let g = frame_at(s, p, POINT_ORDER, FrameConvention::Diagonal)?;
        r = r.max(killing_vector_pointwise(&g, &z.eval(&g)?));
    }
    Ok(r)
}

/// Largest Killing-equation residual of `k` over `points`.
pub fn killing_tensor_residual(s: &LiouvilleSurface, k: &TensorField, points: &[(f64, f64)]) -> Result<f64> {
    let mut r = 0.0f64;
    for &p in points {
        let g = frame_at(s, p, POINT_ORDER, FrameConvention::Diagonal)?;
        r = r.max(killing_tensor_pointwise(&g, &k.eval(&g)?));
    }
    Ok(r)
}

/// `ω_μ = −¼ ∇^ν(R K_{μν})` in coordinates, from frame components of `K`.
pub fn integrability_one_form(g: &PointGeometry, k_frame: &[[Jet2; 2]; 2]) -> [Jet2; 2] {
    let low = g.lower_tensor(&g.to_coord_tensor(k_frame));
    let rk: [[Jet2; 2]; 2] = std::array::from_fn(|m| std::array::from_fn(|n| &g.ricci * &low[m][n]));
    let d = g.coord_derivative_lower(&rk);
    std::array::from_fn(|mu| {
        let mut acc = g.zero();
        for nu in 0..2 {
            for sg in 0..2 {
                acc += &g.inv_metric[nu][sg] * &d[sg][mu][nu];
            }
        }
        acc * -0.25
    })
}

/// `∂_u ω_v − ∂_v ω_u`
pub fn curl(omega: &[Jet2; 2]) -> Jet2 {
    omega[1].d(Var::U) - omega[0].d(Var::V)
}

/// `(A+B)²(A′B‴+A‴B′) + 6A′B′(A′²+B′²) − 6A′B′(A+B)(A″+B″)` at `p`.
pub fn integrability_condition_lhs(s: &LiouvilleSurface, p: (f64, f64)) -> Result<f64> {
    let (a, b) = profile_derivatives(s, p, 3)?;
    let l = a[0] + b[0];
    Ok(l * l * (a[1] * b[3] + a[3] * b[1]) + 6.0 * a[1] * b[1] * (a[1] * a[1] + b[1] * b[1])
        - 6.0 * a[1] * b[1] * l * (a[2] + b[2]))
}

/// `[A, A′, …]` and `[B, B′, …]` at `p` up to derivative `n`.
pub fn profile_derivatives(s: &LiouvilleSurface, p: (f64, f64), n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let a = s.a.jet(&Jet2::variable(p, n, Var::U))?;
    let b = s.b.jet(&Jet2::variable(p, n, Var::V))?;
    Ok(((0..=n).map(|k| a.derivative(k, 0).re).collect(), (0..=n).map(|k| b.derivative(0, k).re).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    /// Along `u` at fixed `v0`, then along `v`.
    UThenV,
    /// Along `v` at fixed `u0`, then along `u`.
    VThenU,
}

/// A solved scalar coefficient `g` with `dg = ω`.
#[derive(Debug, Clone)]
pub struct GSolution {
    pub surface: LiouvilleSurface,
    pub k: TensorField,
    pub base: (f64, f64),
    pub g0: f64,
    pub path: PathKind,
    pub max_curl: f64,
    pub flat: bool,
}

impl GSolution {
    fn omega_at(&self, p: (f64, f64)) -> Result<[f64; 2]> {
        let g = frame_at(&self.surface, p, 3, FrameConvention::Diagonal)?;
        let w = integrability_one_form(&g, &self.k.eval(&g)?);
        Ok([w[0].value().re, w[1].value().re])
    }

    fn segment(&self, fixed: f64, from: f64, to: f64, along_u: bool) -> Result<f64> {
        let mut err = None;
        let val = integrate_real(
            |t| {
                let p = if along_u { (t, fixed) } else { (fixed, t) };
                match self.omega_at(p) {
                    Ok(w) => w[if along_u { 0 } else { 1 }],
                    Err(e) => {
                        err.get_or_insert(e);
                        0.0
                    }
                }
            },
            from,
            to,
            1e-13,
            1e-13,
        )?;
        match err {
            Some(e) => Err(e),
            None => Ok(val),
        }
    }

    /// `g(p)` by quadrature along the given staircase path.
    pub fn value_along(&self, p: (f64, f64), path: PathKind) -> Result<f64> {
        if self.flat {
            return Ok(self.g0);
        }
        let (u0, v0) = self.base;
        let total = match path {
            PathKind::UThenV => self.segment(v0, u0, p.0, true)? + self.segment(p.0, v0, p.1, false)?,
            PathKind::VThenU => self.segment(u0, v0, p.1, false)? + self.segment(p.1, u0, p.0, true)?,
        };
        Ok(self.g0 + total)
    }

    pub fn value(&self, p: (f64, f64)) -> Result<f64> {
        self.value_along(p, self.path)
    }

    /// `max |g_UV − g_VU|` over `points`.
    pub fn two_path_difference(&self, points: &[(f64, f64)]) -> Result<f64> {
        let mut d = 0.0f64;
        for &p in points {
            d = d.max((self.value_along(p, PathKind::UThenV)? - self.value_along(p, PathKind::VThenU)?).abs());
        }
        Ok(d)
    }

    /// Jet of `g` at the point of `geom`: the value from quadrature, higher
    /// coefficients from the jets of `ω`.
    pub fn jet(&self, geom: &PointGeometry) -> Result<Jet2> {
        let w = integrability_one_form(geom, &self.k.eval(geom)?);
        let order = w[0].order() + 1;
        let value = self.value(geom.point)?;
        Ok(Jet2::from_fn(geom.point, order, |i, j| {
            if i == 0 && j == 0 {
                Complex64::new(value, 0.0)
            } else if i >= 1 {
                w[0].coeff(i - 1, j) / i as f64
            } else {
                w[1].coeff(0, j - 1) / j as f64
            }
        }))
    }

    pub fn field(&self) -> ScalarField {
        let me = self.clone();
        ScalarField::new(format!("g[{}]", self.k.name), move |geom| me.jet(geom))
    }
}

/// Solve `dg = ω` for the tensor `k` after checking `dω = 0` on a grid over
/// `region`.
pub fn solve_g(s: &LiouvilleSurface, k: &TensorField, base: (f64, f64), region: Domain, g0: f64, path: PathKind) -> Result<GSolution> {
    let mut max_curl = 0.0f64;
    let mut worst = base;
    let mut max_omega = 0.0f64;
    let mut max_excess = f64::NEG_INFINITY;
    for p in region.grid(9, 9).into_iter().chain(std::iter::once(base)) {
        let g = frame_at(s, p, POINT_ORDER, FrameConvention::Diagonal)?;
        let w = integrability_one_form(&g, &k.eval(&g)?);
        let c = curl(&w).value().norm();
        let scale = 1.0 + w[1].d(Var::U).value().norm().max(w[0].d(Var::V).value().norm());
        max_omega = max_omega.max(w[0].max_abs()).max(w[1].max_abs());
        if c - CURL_TOL * scale > max_excess {
            max_excess = c - CURL_TOL * scale;
        }
        if c > max_curl {
            max_curl = c;
            worst = p;
        }
    }
    if max_excess > 0.0 {
        return Err(Error::CurlViolation { max_curl, at: worst });
    }
    Ok(GSolution {
        surface: s.clone(),
        k: k.clone(),
        base,
        g0,
        path,
        max_curl,
        flat: max_omega == 0.0,
    })
}

/// Integration constants of the special system
/// `A′² = kA⁴ + a₃A³ + a₂A² + a₁A + a₀`, `B′² = −kB⁴ + b₃B³ + b₂B² + b₁B + b₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialCaseParams {
    pub k: f64,
    /// `[a₀, a₁, a₂, a₃]`
    pub a: [f64; 4],
    /// `[b₀, b₁, b₂, b₃]`
    pub b: [f64; 4],
}

impl SpecialCaseParams {
    /// Case II: `b₃ = a₃`, `b₂ = −a₂`, `b₁ = a₁`, `b₀ = −a₀`.
    pub fn case_ii(k: f64, a: [f64; 4]) -> Self {
        SpecialCaseParams { k, a, b: [-a[0], a[1], -a[2], a[3]] }
    }

    pub fn is_case_ii(&self) -> bool {
        self.b == [-self.a[0], self.a[1], -self.a[2], self.a[3]]
    }

    /// Quartic for `A′²`.
    pub fn a_quartic(&self) -> [f64; 5] {
        [self.a[0], self.a[1], self.a[2], self.a[3], self.k]
    }

    /// Quartic for `B′²`.
    pub fn b_quartic(&self) -> [f64; 5] {
        [self.b[0], self.b[1], self.b[2], self.b[3], -self.k]
    }

    /// Closed-form curvature of the special solutions under the `R = +2`
    /// sphere convention: `R = −((A−B)k + a₃/2)`.
    pub fn ricci(&self, a: f64, b: f64) -> f64 {
        -((a - b) * self.k + 0.5 * self.a[3])
    }
}

fn quartic(c: &[f64; 5], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// `(max |A′² − P_A(A)|, max |B′² − P_B(B)|)` over `points`.
pub fn special_system_residual(s: &LiouvilleSurface, params: &SpecialCaseParams, points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let (mut ra, mut rb) = (0.0f64, 0.0f64);
    for &p in points {
        let (a, b) = profile_derivatives(s, p, 1)?;
        ra = ra.max((a[1] * a[1] - quartic(&params.a_quartic(), a[0])).abs());
        rb = rb.max((b[1] * b[1] - quartic(&params.b_quartic(), b[0])).abs());
    }
    Ok((ra, rb))
}

/// `max |R − R_closed|` over `points`, with `R_closed` from
/// [`SpecialCaseParams::ricci`].
pub fn special_case_ricci_check(s: &LiouvilleSurface, params: &SpecialCaseParams, points: &[(f64, f64)]) -> Result<f64> {
    let mut d = 0.0f64;
    for &p in points {
        let g = frame_at(s, p, 2, FrameConvention::Diagonal)?;
        let r = g.ricci.value().re;
        d = d.max((r - params.ricci(g.a.value().re, g.b.value().re)).abs());
    }
    Ok(d)
}

/// `max |3(a₃−b₃)(A+B) − 2(a₂+b₂)|`: the relation the two quartics must obey
/// when the surface is not flat.
pub fn case_relation_residual(s: &LiouvilleSurface, params: &SpecialCaseParams, points: &[(f64, f64)]) -> Result<f64> {
    let mut d = 0.0f64;
    for &p in points {
        let lam = s.conformal_factor(p)?;
        d = d.max((3.0 * (params.a[3] - params.b[3]) * lam - 2.0 * (params.a[2] + params.b[2])).abs());
    }
    Ok(d)
}

/// Profile solving `y′² = P(y)` through `y(x0) = y0`, in the branch
/// `y′(x0) = sign·√P(y0)`. Values come from integrating `y″ = P′(y)/2`,
/// jets from its Taylor recursion.
#[derive(Debug, Clone)]
pub struct QuarticOdeProfile {
    pub poly: [f64; 5],
    pub x0: f64,
    pub y0: f64,
    pub dy0: f64,
    pub label: String,
}

impl QuarticOdeProfile {
    pub fn new(poly: [f64; 5], x0: f64, y0: f64, sign: f64, label: impl Into<String>) -> Result<Self> {
        let p = quartic(&poly, y0);
        if p < 0.0 {
            return Err(Error::Invalid(format!("P(y0) = {p} < 0: no real solution through y0 = {y0}")));
        }
        Ok(QuarticOdeProfile { poly, x0, y0, dy0: sign.signum() * p.sqrt(), label: label.into() })
    }

    fn half_dp(&self, y: f64) -> f64 {
        let c = &self.poly;
        0.5 * (c[1] + 2.0 * c[2] * y + 3.0 * c[3] * y * y + 4.0 * c[4] * y * y * y)
    }

    /// `(y, y′)` at `x`.
    pub fn state(&self, x: f64) -> Result<[f64; 2]> {
        let mut y = [self.y0, self.dy0];
        let opts = OdeOptions { abs_tol: 1e-13, rel_tol: 1e-13, ..OdeOptions::default() };
        Dopri5::new(|_, s: &[f64], d: &mut [f64]| {
            d[0] = s[1];
            d[1] = self.half_dp(s[0]);
        }, opts)
        .integrate(self.x0, x, &mut y)?;
        Ok(y)
    }
}

impl Profile for QuarticOdeProfile {
    fn jet(&self, arg: &Jet2) -> Result<Jet2> {
        let x = arg.value().re;
        let st = self.state(x)?;
        let c = self.poly;
        let series = taylor_ode(x, &[st[0].into(), st[1].into()], arg.order(), |_, y| {
            let y0 = &y[0];
            let y2 = y0 * y0;
            let dp = (y0 * (2.0 * c[2]) + &y2 * (3.0 * c[3]) + &(&y2 * y0) * (4.0 * c[4]) + c[1]) * 0.5;
            Ok(vec![y[1].clone(), dp])
        })?;
        Ok(arg.compose_series(&series[0]))
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Surface whose profiles solve the special system for `params`, starting
/// from `A(x0) = a0`, `B(x0) = b0`.
pub fn special_solution_surface(params: &SpecialCaseParams, x0: f64, a0: f64, b0: f64) -> Result<LiouvilleSurface> {
    let a = QuarticOdeProfile::new(params.a_quartic(), x0, a0, 1.0, "A: A'^2 = P_A(A)")?;
    let b = QuarticOdeProfile::new(params.b_quartic(), x0, b0, 1.0, "B: B'^2 = P_B(B)")?;
    Ok(LiouvilleSurface::new("special solution", Arc::new(a), Arc::new(b)))
}

/// Inputs for [`assemble_symmetry_data`].
#[derive(Debug, Clone)]
pub enum SymmetryInputs {
    First {
        zeta: VectorField,
        a_const: Complex64,
        g: ScalarField,
    },
    Second {
        k: TensorField,
        alpha: VectorField,
        zeta: VectorField,
        a_const: Complex64,
        g0: f64,
        region: Domain,
    },
}

/// Validated symmetry data: Killing checks at `points`, and for second
/// order a nontrivial `K` with closed `ω` and `g` solved over `region`.
pub fn assemble_symmetry_data(s: &LiouvilleSurface, inputs: SymmetryInputs, points: &[(f64, f64)]) -> Result<SymmetryData> {
    let check_vector = |name: &str, z: &VectorField| -> Result<()> {
        let r = killing_vector_residual(s, z, points)?;
        if r > 1e-9 {
            return Err(Error::KillingViolation { what: format!("{name} = {}", z.name), residual: r });
        }
        Ok(())
    };
    match inputs {
        SymmetryInputs::First { zeta, a_const, g } => {
            check_vector("zeta", &zeta)?;
            Ok(SymmetryData::first_order(zeta, a_const, g))
        }
        SymmetryInputs::Second { k, alpha, zeta, a_const, g0, region } => {
            check_vector("zeta", &zeta)?;
            check_vector("alpha", &alpha)?;
            let r = killing_tensor_residual(s, &k, points)?;
            if r > 1e-9 {
                return Err(Error::KillingViolation { what: format!("K = {}", k.name), residual: r });
            }
            if is_metric_multiple(s, &k, points)? {
                return Err(Error::TrivialKillingTensor);
            }
            let sol = solve_g(s, &k, region.center(), region, g0, PathKind::UThenV)?;
            Ok(SymmetryData::second_order(k, alpha, zeta, a_const, Some(sol.field())))
        }
    }
}

fn is_metric_multiple(s: &LiouvilleSurface, k: &TensorField, points: &[(f64, f64)]) -> Result<bool> {
    let (mut dev, mut size) = (0.0f64, 0.0f64);
    for &p in points {
        let g = frame_at(s, p, 1.max(POINT_ORDER), FrameConvention::Diagonal)?;
        let m = k.eval(&g)?;
        dev = dev.max((&m[0][0] - &m[1][1]).value().norm()).max(m[0][1].value().norm()).max(m[1][0].value().norm());
        size = size.max(m[0][0].value().norm());
    }
    Ok(dev <= 1e-12 * (1.0 + size))
}
