//! The Dirac operator `D = iγ^a∇_a − m`, second-order symmetry operators
//! `E^{ab}∇_{ab} + F^a∇_a + G` and the residuals of their defining equations.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::clifford::{Blade, CliffordElement, Representation};
use crate::error::{Error, Result};
use crate::fields::{ScalarField, TensorField, VectorField};
use crate::geometry::{spinor_add, spinor_norm, spinor_scale_c, spinor_sub, FrameTensor, PointGeometry, SpinorJet, EPS};
use crate::jets::{Jet2, Var};
use crate::killing::{killing_tensor_pointwise, killing_vector_pointwise};

/// Clifford element with jet coefficients.
pub type Cl = CliffordElement<Jet2>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Killing residual allowed when assembling coefficients at a point,
/// relative to the size of the field.
pub const BUILD_KILLING_TOL: f64 = 1e-8;

type SpinorFn = dyn Fn(&Jet2, &Jet2) -> Result<SpinorJet> + Send + Sync;

/// A two-component spinor field given as a function of the coordinate jets.
#[derive(Clone)]
pub struct SpinorField {
    pub name: String,
    f: Arc<SpinorFn>,
}

impl fmt::Debug for SpinorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinorField({})", self.name)
    }
}

impl SpinorField {
    pub fn new(name: impl Into<String>, f: impl Fn(&Jet2, &Jet2) -> Result<SpinorJet> + Send + Sync + 'static) -> Self {
        SpinorField { name: name.into(), f: Arc::new(f) }
    }

    pub fn zero() -> Self {
        Self::new("0", |u, _| Ok([u.zero_like(), u.zero_like()]))
    }

    pub fn constant(c: [Complex64; 2]) -> Self {
        Self::new(format!("({}, {})", c[0], c[1]), move |u, _| Ok([u.constant_like(c[0]), u.constant_like(c[1])]))
    }

    /// `ψ_k = Σ c_k u^i v^j` over the listed monomials.
    pub fn polynomial(terms: Vec<(u32, u32, [Complex64; 2])>) -> Self {
        Self::new("polynomial", move |u, v| {
            let mut out = [u.zero_like(), u.zero_like()];
            for &(i, j, c) in &terms {
                let mono = &u.powi(i as i32)? * &v.powi(j as i32)?;
                out[0] += mono.scale(c[0]);
                out[1] += mono.scale(c[1]);
            }
            Ok(out)
        })
    }

    /// `ψ_k = Σ c_k sin(p u + q v + φ)` over the listed waves `(p, q, φ, c)`.
    pub fn trigonometric(waves: Vec<(f64, f64, f64, [Complex64; 2])>) -> Self {
        Self::new("trigonometric", move |u, v| {
            let mut out = [u.zero_like(), u.zero_like()];
            for &(p, q, phi, c) in &waves {
                let w = (u * p + v * q + phi).sin();
                out[0] += w.scale(c[0]);
                out[1] += w.scale(c[1]);
            }
            Ok(out)
        })
    }

    pub fn eval(&self, g: &PointGeometry) -> Result<SpinorJet> {
        (self.f)(&g.u, &g.v)
    }

    pub fn eval_uv(&self, u: &Jet2, v: &Jet2) -> Result<SpinorJet> {
        (self.f)(u, v)
    }
}

/// Coefficients of `E^{ab}∇_{ab} + F^a∇_a + G` at one point.
#[derive(Debug, Clone)]
pub struct OperatorCoefficients {
    pub e: [[Cl; 2]; 2],
    pub f: [Cl; 2],
    pub g: Cl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorOrder {
    First,
    Second,
}

/// Geometric data a symmetry operator is built from.
#[derive(Debug, Clone)]
pub struct SymmetryData {
    pub order: OperatorOrder,
    /// Killing tensor `K^{ab}`.
    pub k: TensorField,
    /// Killing vector `α`.
    pub alpha: VectorField,
    /// Killing vector `ζ`.
    pub zeta: VectorField,
    pub a_const: Complex64,
    pub g: Option<ScalarField>,
}

impl SymmetryData {
    /// First-order data (`K = 0`, `α = 0`): the operator `(ζ^a + Aγ^a)∇_a + G`.
    pub fn first_order(zeta: VectorField, a_const: Complex64, g: ScalarField) -> Self {
        SymmetryData {
            order: OperatorOrder::First,
            k: TensorField::zero(),
            alpha: VectorField::zero(),
            zeta,
            a_const,
            g: Some(g),
        }
    }

    pub fn second_order(k: TensorField, alpha: VectorField, zeta: VectorField, a_const: Complex64, g: Option<ScalarField>) -> Self {
        SymmetryData { order: OperatorOrder::Second, k, alpha, zeta, a_const, g }
    }

    pub fn with_g(mut self, g: ScalarField) -> Self {
        self.g = Some(g);
        self
    }
}

fn one(g: &PointGeometry) -> Jet2 {
    g.lambda.constant_like(1.0)
}

fn gamma(g: &PointGeometry, b: Blade) -> Cl {
    Cl::from_blade(b, one(g))
}

fn scalar_el(j: Jet2) -> Cl {
    Cl::scalar(j)
}

/// `iγ^a∇_aψ − mψ`.
pub fn dirac_apply(g: &PointGeometry, rep: &Representation, m: f64, psi: &SpinorJet) -> Result<SpinorJet> {
    let fd = g.spinor_frame_derivative(rep, psi)?;
    let mut out = spinor_scale_c(psi, Complex64::new(-m, 0.0));
    for (a, d) in fd.iter().enumerate() {
        out = spinor_add(&out, &spinor_scale_c(&rep.act_blade(Blade::gamma(a), d), I));
    }
    Ok(out)
}

/// Assemble `E`, `F`, `G` from symmetry data at a point.
pub fn build_coefficients(g: &PointGeometry, d: &SymmetryData) -> Result<OperatorCoefficients> {
    let k = d.k.eval(g)?;
    let alpha = d.alpha.eval(g)?;
    let zeta = d.zeta.eval(g)?;
    for (what, field, res) in [
        ("K", &d.k.name, killing_tensor_pointwise(g, &k)),
        ("alpha", &d.alpha.name, killing_vector_pointwise(g, &alpha)),
        ("zeta", &d.zeta.name, killing_vector_pointwise(g, &zeta)),
    ] {
        let scale = match what {
            "K" => 1.0 + k.iter().flatten().map(|c| c.value().norm()).fold(0.0, f64::max),
            "alpha" => 1.0 + alpha.iter().map(|c| c.value().norm()).fold(0.0, f64::max),
            _ => 1.0 + zeta.iter().map(|c| c.value().norm()).fold(0.0, f64::max),
        };
        if res > BUILD_KILLING_TOL * scale {
            return Err(Error::KillingViolation { what: format!("{what} = {field}"), residual: res });
        }
    }
    let gval = d.g.as_ref().ok_or(Error::MissingG)?.eval(g)?;
    Ok(coefficients_from_parts(g, &k, &alpha, &zeta, d.a_const, &gval))
}

/// The coefficient formulas without any Killing checks.
pub fn coefficients_from_parts(
    g: &PointGeometry,
    k: &[[Jet2; 2]; 2],
    alpha: &[Jet2; 2],
    zeta: &[Jet2; 2],
    a_const: Complex64,
    gval: &Jet2,
) -> OperatorCoefficients {
    let dk = g.covariant_derivative(&FrameTensor::matrix(k.clone()));
    let dalpha = g.vector_derivative(alpha);
    let dzeta = g.vector_derivative(zeta);
    let r = &g.ricci;
    let gam = [gamma(g, Blade::G1), gamma(g, Blade::G2)];
    let g12 = gamma(g, Blade::G);

    let e: [[Cl; 2]; 2] = std::array::from_fn(|a| {
        std::array::from_fn(|b| scalar_el(k[a][b].clone()).add(&gam[b].scale_by(&alpha[a])).add(&gam[a].scale_by(&alpha[b])))
    });
    let f: [Cl; 2] = std::array::from_fn(|a| {
        let mut s = zeta[a].clone();
        for c in 0..2 {
            s += dk.get(&[c, a, c]);
        }
        let mut out = scalar_el(s);
        for (c, gc) in gam.iter().enumerate() {
            out = out.add(&gc.scale_by(&dalpha[c][a]));
        }
        out = out.add(&gam[a].scale(a_const));
        let mut eps_term = g.zero();
        for b in 0..2 {
            for c in 0..2 {
                eps_term += dk.get(&[b, a, c]) * (EPS[b][c] / 3.0);
            }
        }
        out.add(&g12.scale_by(&eps_term))
    });
    let mut gg = scalar_el(gval.clone());
    for (b, gb) in gam.iter().enumerate() {
        gg = gg.sub(&gb.scale_by(&(r * &alpha[b] * 0.25)));
    }
    let mut zt = g.zero();
    for a in 0..2 {
        for b in 0..2 {
            zt += &dzeta[b][a] * (0.25 * EPS[b][a]);
        }
    }
    gg = gg.add(&g12.scale_by(&zt));
    OperatorCoefficients { e, f, g: gg }
}

/// `E^{ab}∇_{ab}ψ + F^a∇_aψ + Gψ`.
pub fn symmetry_apply(g: &PointGeometry, rep: &Representation, c: &OperatorCoefficients, psi: &SpinorJet) -> Result<SpinorJet> {
    let second = g.spinor_second_derivative(rep, psi)?;
    let first = g.spinor_frame_derivative(rep, psi)?;
    let mut out = rep.act(&c.g, psi);
    for a in 0..2 {
        out = spinor_add(&out, &rep.act(&c.f[a], &first[a]));
        for b in 0..2 {
            out = spinor_add(&out, &rep.act(&c.e[a][b], &second[a][b]));
        }
    }
    Ok(out)
}

/// An operator on spinor jets at one point.
#[derive(Debug, Clone)]
pub enum PointOperator {
    Dirac { m: f64 },
    Symmetry(Box<OperatorCoefficients>),
    /// `outer ∘ inner`
    Compose(Box<PointOperator>, Box<PointOperator>),
}

impl PointOperator {
    pub fn symmetry(c: OperatorCoefficients) -> Self {
        PointOperator::Symmetry(Box::new(c))
    }

    pub fn compose(outer: PointOperator, inner: PointOperator) -> Self {
        PointOperator::Compose(Box::new(outer), Box::new(inner))
    }

    /// Number of jet orders consumed.
    pub fn derivative_order(&self) -> usize {
        match self {
            PointOperator::Dirac { .. } => 1,
            PointOperator::Symmetry(_) => 2,
            PointOperator::Compose(a, b) => a.derivative_order() + b.derivative_order(),
        }
    }

    pub fn apply(&self, g: &PointGeometry, rep: &Representation, psi: &SpinorJet) -> Result<SpinorJet> {
        match self {
            PointOperator::Dirac { m } => dirac_apply(g, rep, *m, psi),
            PointOperator::Symmetry(c) => symmetry_apply(g, rep, c, psi),
            PointOperator::Compose(outer, inner) => outer.apply(g, rep, &inner.apply(g, rep, psi)?),
        }
    }
}

/// `‖(K∘D − D∘K)ψ‖` at the base point.
pub fn commutator_residual(g: &PointGeometry, rep: &Representation, m: f64, op: &PointOperator, psi: &SpinorJet) -> Result<f64> {
    let needed = op.derivative_order() + 1;
    let available = psi[0].order().min(psi[1].order());
    if available < needed {
        return Err(Error::InsufficientOrder { needed, available });
    }
    let d = PointOperator::Dirac { m };
    let kd = op.apply(g, rep, &d.apply(g, rep, psi)?)?;
    let dk = d.apply(g, rep, &op.apply(g, rep, psi)?)?;
    Ok(spinor_norm(&spinor_sub(&kd, &dk)))
}

/// Clifford-valued frame tensor, indices stored like [`FrameTensor`].
#[derive(Debug, Clone)]
pub struct CliffordTensor {
    pub rank: usize,
    pub comps: Vec<Cl>,
}

impl CliffordTensor {
    pub fn from_fn(rank: usize, mut f: impl FnMut(&[usize]) -> Cl) -> Self {
        let comps = (0..1usize << rank)
            .map(|flat| {
                let idx: Vec<usize> = (0..rank).map(|k| (flat >> (rank - 1 - k)) & 1).collect();
                f(&idx)
            })
            .collect();
        CliffordTensor { rank, comps }
    }

    pub fn get(&self, idx: &[usize]) -> &Cl {
        &self.comps[idx.iter().fold(0, |acc, &i| acc * 2 + i)]
    }
}

/// `∇_c X^{a..}`, new index first. The spinor connection acts by
/// commutator, the frame connection on every index.
pub fn clifford_derivative(g: &PointGeometry, x: &CliffordTensor) -> CliffordTensor {
    let g12 = gamma(g, Blade::G);
    CliffordTensor::from_fn(x.rank + 1, |idx| {
        let c = idx[0];
        let inner = &idx[1..];
        let mut acc = Cl::zero(&g.zero());
        for mu in 0..2 {
            let var = Var::from_index(mu);
            let xi = x.get(inner);
            let mut t = xi.map(|j| j.d(var)).add(&g12.commutator(xi).scale_by(&g.spinor_connection(mu)));
            for k in 0..x.rank {
                for e in 0..2 {
                    let mut j = inner.to_vec();
                    j[k] = e;
                    t = t.add(&x.get(&j).scale_by(&g.spin_connection[inner[k]][e][mu]));
                }
            }
            acc = acc.add(&t.scale_by(&g.frame[c][mu]));
        }
        acc
    })
}

/// Magnitudes of the four determining equations at the base point.
pub fn determining_equations_residuals(g: &PointGeometry, c: &OperatorCoefficients) -> Result<[f64; 4]> {
    let order = c.g.coeff(Blade::I).order().min(g.ricci.order());
    if order < 1 {
        return Err(Error::InsufficientOrder { needed: 1, available: order });
    }
    let gam = [gamma(g, Blade::G1), gamma(g, Blade::G2)];
    let g12 = gamma(g, Blade::G);
    let r = &g.ricci;
    let dr = g.grad(r);
    let e_t = CliffordTensor::from_fn(2, |i| c.e[i[0]][i[1]].clone());
    let f_t = CliffordTensor::from_fn(1, |i| c.f[i[0]].clone());
    let g_t = CliffordTensor::from_fn(0, |_| c.g.clone());
    let de = clifford_derivative(g, &e_t);
    let df = clifford_derivative(g, &f_t);
    let dg = clifford_derivative(g, &g_t);
    let mut res = [0.0f64; 4];

    // E^{(ab}γ^{c)} − γ^{(c}E^{ab)}
    for a in 0..2 {
        for b in 0..2 {
            for cc in 0..2 {
                let idx = [a, b, cc];
                let mut t = Cl::zero(&g.zero());
                for p in PERMS3 {
                    let (x, y, z) = (idx[p[0]], idx[p[1]], idx[p[2]]);
                    t = t.add(&c.e[x][y].commutator(&gam[z]));
                }
                res[0] = res[0].max(t.scale(Complex64::new(1.0 / 6.0, 0.0)).magnitude());
            }
        }
    }

    // F^{(a}γ^{b)} − γ^{(b}F^{a)} = γ^c∇_cE^{ab}
    for a in 0..2 {
        for b in 0..2 {
            let lhs = c.f[a]
                .mul(&gam[b])
                .add(&c.f[b].mul(&gam[a]))
                .sub(&gam[b].mul(&c.f[a]))
                .sub(&gam[a].mul(&c.f[b]))
                .scale(Complex64::new(0.5, 0.0));
            let mut rhs = Cl::zero(&g.zero());
            for (cc, gc) in gam.iter().enumerate() {
                rhs = rhs.add(&gc.mul(de.get(&[cc, a, b])));
            }
            res[1] = res[1].max(lhs.sub(&rhs).magnitude());
        }
    }

    // Gγ^a − γ^aG = γ^c∇_cF^a − (R/4)(E^{ab}γ^c + γ^cE^{ab})ε_{bc}γ
    //               + (R/6)(E^{bd}γ^c + 2γ^cE^{bd})ε_{ad}ε_{bc}
    for a in 0..2 {
        let lhs = c.g.commutator(&gam[a]);
        let mut rhs = Cl::zero(&g.zero());
        for (cc, gc) in gam.iter().enumerate() {
            rhs = rhs.add(&gc.mul(df.get(&[cc, a])));
        }
        for b in 0..2 {
            for cc in 0..2 {
                let w = EPS[b][cc];
                if w != 0.0 {
                    let t = c.e[a][b].anticommutator(&gam[cc]).mul(&g12);
                    rhs = rhs.sub(&t.scale_by(&(r * (0.25 * w))));
                }
                for d in 0..2 {
                    let w = EPS[a][d] * EPS[b][cc];
                    if w != 0.0 {
                        let t = c.e[b][d].mul(&gam[cc]).add(&gam[cc].mul(&c.e[b][d]).scale(Complex64::new(2.0, 0.0)));
                        rhs = rhs.add(&t.scale_by(&(r * (w / 6.0))));
                    }
                }
            }
        }
        res[2] = res[2].max(lhs.sub(&rhs).magnitude());
    }

    // γ^a∇_aG = (R/8)(F^aγ^b + γ^bF^a)γε_{ab} + (1/12)(2E^{ab}γ^c + γ^cE^{ab})γε_{ac}∇_bR
    let mut lhs = Cl::zero(&g.zero());
    for (a, ga) in gam.iter().enumerate() {
        lhs = lhs.add(&ga.mul(dg.get(&[a])));
    }
    let mut rhs = Cl::zero(&g.zero());
    for a in 0..2 {
        for b in 0..2 {
            let w = EPS[a][b];
            if w != 0.0 {
                let t = c.f[a].anticommutator(&gam[b]).mul(&g12);
                rhs = rhs.add(&t.scale_by(&(r * (w / 8.0))));
            }
            for cc in 0..2 {
                let w = EPS[a][cc];
                if w != 0.0 {
                    let t = c.e[a][b]
                        .mul(&gam[cc])
                        .scale(Complex64::new(2.0, 0.0))
                        .add(&gam[cc].mul(&c.e[a][b]))
                        .mul(&g12);
                    rhs = rhs.add(&t.scale_by(&(&dr[b] * (w / 12.0))));
                }
            }
        }
    }
    res[3] = lhs.sub(&rhs).magnitude();
    Ok(res)
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Product of two first-order operators as second-order data:
/// `K^{ab} = ζ₁^{(a}ζ₂^{b)} + 2A₁A₂η^{ab}`, `α^a = ½(A₁ζ₂^a + A₂ζ₁^a)`.
/// `g` is left unset.
pub fn compose_first_order(d1: &SymmetryData, d2: &SymmetryData) -> Result<SymmetryData> {
    if d1.order != OperatorOrder::First || d2.order != OperatorOrder::First {
        return Err(Error::NotFirstOrder);
    }
    let k = TensorField::symmetric_product(&d1.zeta, &d2.zeta).add(&TensorField::metric_multiple(d1.a_const * d2.a_const * 2.0));
    let (z1, z2, a1, a2) = (d1.zeta.clone(), d2.zeta.clone(), d1.a_const, d2.a_const);
    let alpha = VectorField::new(format!("alpha({}, {})", d1.zeta.name, d2.zeta.name), move |g| {
        let x = z1.eval(g)?;
        let y = z2.eval(g)?;
        Ok(std::array::from_fn(|i| (y[i].scale(a1) + x[i].scale(a2)) * 0.5))
    });
    Ok(SymmetryData::second_order(k, alpha, VectorField::zero(), Complex64::new(0.0, 0.0), None))
}

/// Adds `ε γ δ^{ab}` to `E`, a part the first determining equation forbids.
pub fn perturb_e_gamma(c: &OperatorCoefficients, eps: f64) -> OperatorCoefficients {
    let mut out = c.clone();
    for a in 0..2 {
        let like = c.e[a][a].coeff(Blade::I).constant_like(eps);
        out.e[a][a] = out.e[a][a].add(&Cl::from_blade(Blade::G, like));
    }
    out
}

/// Adds `δ^a I` to `F`.
pub fn perturb_f(c: &OperatorCoefficients, delta: &[Jet2; 2]) -> OperatorCoefficients {
    let mut out = c.clone();
    for a in 0..2 {
        out.f[a] = out.f[a].add(&Cl::scalar(delta[a].clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Bindings;
    use crate::geometry::{frame_at, FrameConvention, LiouvilleSurface};

    fn plane() -> LiouvilleSurface {
        LiouvilleSurface::from_exprs("plane", "0", "1", &Bindings::new()).unwrap()
    }

    #[test]
    fn dirac_of_zero_is_zero() {
        let g = frame_at(&plane(), (0.1, 0.2), 3, FrameConvention::Diagonal).unwrap();
        let psi = SpinorField::zero().eval(&g).unwrap();
        let out = dirac_apply(&g, &Representation::pauli(), 1.0, &psi).unwrap();
        assert_eq!(spinor_norm(&out), 0.0);
    }

    #[test]
    fn flat_dirac_on_plane_wave() {
        // ψ = (e^{iku}, 0), γ1 = σx: iγ^1∂_u ψ = i·(0, ik e^{iku}) = (0, −k e^{iku})
        let k = 1.7;
        let g = frame_at(&plane(), (0.3, 0.0), 3, FrameConvention::Diagonal).unwrap();
        let psi = [(&g.u * Complex64::new(0.0, k)).exp(), g.zero()];
        let out = dirac_apply(&g, &Representation::pauli(), 0.0, &psi).unwrap();
        let expect = -Complex64::new(0.0, k * 0.3).exp() * k;
        assert!(out[0].value().norm() < 1e-14);
        assert!((out[1].value() - expect).norm() < 1e-13);
    }

    #[test]
    fn trivial_first_order_coefficients() {
        let g = frame_at(&plane(), (0.1, 0.2), 4, FrameConvention::Diagonal).unwrap();
        let a = Complex64::new(0.5, -1.0);
        let d = SymmetryData::first_order(VectorField::zero(), a, ScalarField::constant(3.0));
        let c = build_coefficients(&g, &d).unwrap();
        for x in 0..2 {
            assert!(c.f[x].sub(&gamma(&g, Blade::gamma(x)).scale(a)).magnitude() < 1e-15);
            for y in 0..2 {
                assert_eq!(c.e[x][y].magnitude(), 0.0);
            }
        }
        assert!((c.g.coeff(Blade::I).value() - 3.0).norm() < 1e-15);
    }

    #[test]
    fn missing_g_is_reported() {
        let g = frame_at(&plane(), (0.0, 0.0), 4, FrameConvention::Diagonal).unwrap();
        let d = SymmetryData::second_order(TensorField::liouville(), VectorField::zero(), VectorField::zero(), Complex64::new(0.0, 0.0), None);
        assert_eq!(build_coefficients(&g, &d).unwrap_err(), Error::MissingG);
    }

    #[test]
    fn non_killing_zeta_is_rejected() {
        let s = LiouvilleSurface::from_exprs("s", "u^2", "1", &Bindings::new()).unwrap();
        let g = frame_at(&s, (0.5, 0.1), 4, FrameConvention::Diagonal).unwrap();
        let d = SymmetryData::first_order(VectorField::coordinate_u(), Complex64::new(0.0, 0.0), ScalarField::constant(0.0));
        assert!(matches!(build_coefficients(&g, &d), Err(Error::KillingViolation { .. })));
    }

    #[test]
    fn commutator_needs_enough_order() {
        let g = frame_at(&plane(), (0.0, 0.0), 4, FrameConvention::Diagonal).unwrap();
        let c = build_coefficients(&g, &SymmetryData::first_order(VectorField::coordinate_u(), Complex64::new(0.0, 0.0), ScalarField::constant(0.0))).unwrap();
        let psi = [Jet2::constant((0.0, 0.0), 2, 1.0), Jet2::constant((0.0, 0.0), 2, 0.0)];
        assert!(matches!(
            commutator_residual(&g, &Representation::pauli(), 1.0, &PointOperator::symmetry(c), &psi),
            Err(Error::InsufficientOrder { needed: 3, .. })
        ));
    }

    #[test]
    fn compose_rejects_second_order_input() {
        let d = SymmetryData::second_order(TensorField::zero(), VectorField::zero(), VectorField::zero(), Complex64::new(0.0, 0.0), None);
        assert_eq!(compose_first_order(&d, &d).unwrap_err(), Error::NotFirstOrder);
    }
}
