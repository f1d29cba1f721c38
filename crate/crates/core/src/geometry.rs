//! Liouville surfaces `g = (A(u) + B(v)) (du² + dv²)` and their frame,
//! connection and curvature data, evaluated as jets at a query point.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::clifford::{Blade, Representation};
use crate::error::{Error, Result};
use crate::expr::{self, eval_jet, Bindings, Coord, ExprAst};
use crate::jets::{sum_jets, Jet2, Var};

/// Permutation symbol in the frame, `ε_12 = +1`.
pub const EPS: [[f64; 2]; 2] = [[0.0, 1.0], [-1.0, 0.0]];

/// A two-component spinor as jets.
pub type SpinorJet = [Jet2; 2];

/// One-variable profile function `A(u)` or `B(v)`.
pub trait Profile: Send + Sync + fmt::Debug {
    /// Jet of the profile composed with `arg` (the coordinate jet).
    fn jet(&self, arg: &Jet2) -> Result<Jet2>;

    fn is_constant(&self) -> bool {
        false
    }

    fn describe(&self) -> String;
}

/// Profile given by a parsed expression.
#[derive(Debug, Clone)]
pub struct ExprProfile {
    pub ast: ExprAst,
    pub bindings: Bindings,
}

impl ExprProfile {
    pub fn parse(text: &str, bindings: &Bindings) -> Result<Self> {
        let names: Vec<&str> = expr::DEFAULT_PARAMETERS
            .iter()
            .copied()
            .chain(bindings.keys().map(String::as_str))
            .collect();
        Ok(ExprProfile {
            ast: expr::parse_with(text, &names)?,
            bindings: bindings.clone(),
        })
    }
}

impl Profile for ExprProfile {
    fn jet(&self, arg: &Jet2) -> Result<Jet2> {
        Ok(eval_jet(&self.ast, arg, &self.bindings)?)
    }

    fn is_constant(&self) -> bool {
        self.ast.is_constant()
    }

    fn describe(&self) -> String {
        self.ast.to_string()
    }
}

/// A Liouville surface; `A` depends on `u` only and `B` on `v` only.
#[derive(Debug, Clone)]
pub struct LiouvilleSurface {
    pub name: String,
    pub a: Arc<dyn Profile>,
    pub b: Arc<dyn Profile>,
}

impl LiouvilleSurface {
    pub fn new(name: impl Into<String>, a: Arc<dyn Profile>, b: Arc<dyn Profile>) -> Self {
        LiouvilleSurface { name: name.into(), a, b }
    }

    pub fn from_exprs(name: impl Into<String>, a: &str, b: &str, bindings: &Bindings) -> Result<Self> {
        let pa = ExprProfile::parse(a, bindings)?;
        let pb = ExprProfile::parse(b, bindings)?;
        if pa.ast.coords().contains(&Coord::V) {
            return Err(Error::WrongCoordinate(a.to_string(), "u"));
        }
        if pb.ast.coords().contains(&Coord::U) {
            return Err(Error::WrongCoordinate(b.to_string(), "v"));
        }
        Ok(Self::new(name, Arc::new(pa), Arc::new(pb)))
    }

    /// `A + B` at a point.
    pub fn conformal_factor(&self, p: (f64, f64)) -> Result<f64> {
        let a = self.a.jet(&Jet2::constant(p, 0, p.0))?;
        let b = self.b.jet(&Jet2::constant(p, 0, p.1))?;
        Ok((a + b).value().re)
    }

    /// A surface of revolution has a constant profile.
    pub fn is_revolution(&self) -> bool {
        self.a.is_constant() || self.b.is_constant()
    }
}

/// Rectangle `[u0, u1] × [v0, v1]` in the coordinate plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Domain {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Self {
        Domain { u: (u0, u1), v: (v0, v1) }
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u.0 + self.u.1), 0.5 * (self.v.0 + self.v.1))
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        p.0 >= self.u.0 && p.0 <= self.u.1 && p.1 >= self.v.0 && p.1 <= self.v.1
    }

    /// Map unit-square coordinates into the rectangle.
    pub fn lerp(&self, s: f64, t: f64) -> (f64, f64) {
        (self.u.0 + s * (self.u.1 - self.u.0), self.v.0 + t * (self.v.1 - self.v.0))
    }

    /// `nu × nv` grid including the boundary.
    pub fn grid(&self, nu: usize, nv: usize) -> Vec<(f64, f64)> {
        let frac = |k: usize, n: usize| if n <= 1 { 0.5 } else { k as f64 / (n - 1) as f64 };
        (0..nu).flat_map(|i| (0..nv).map(move |j| (i, j))).map(|(i, j)| self.lerp(frac(i, nu), frac(j, nv))).collect()
    }
}

/// Which orthonormal frame to attach to the coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameConvention {
    /// `e_a = λ^{-1/2} ∂_a`
    Diagonal,
    /// `e_1 = λ^{-1/2} ∂_v`, `e_2 = -λ^{-1/2} ∂_u` (the separation frame).
    Antidiagonal,
}

/// Frame, connection and curvature jets at one point.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub point: (f64, f64),
    pub order: usize,
    pub convention: FrameConvention,
    pub u: Jet2,
    pub v: Jet2,
    pub a: Jet2,
    pub b: Jet2,
    pub lambda: Jet2,
    /// `frame[a][mu] = e_a^mu`
    pub frame: [[Jet2; 2]; 2],
    /// `coframe[a][mu] = e^a_mu`
    pub coframe: [[Jet2; 2]; 2],
    pub metric: [[Jet2; 2]; 2],
    pub inv_metric: [[Jet2; 2]; 2],
    /// `christoffel[alpha][beta][mu] = Γ^alpha_{beta mu}`
    pub christoffel: [[[Jet2; 2]; 2]; 2],
    /// `spin_connection[a][b][mu] = Γ^{ab}_mu`
    pub spin_connection: [[[Jet2; 2]; 2]; 2],
    pub ricci: Jet2,
}

fn arr2<T>(mut f: impl FnMut(usize, usize) -> T) -> [[T; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
}

fn arr3<T>(mut f: impl FnMut(usize, usize, usize) -> T) -> [[[T; 2]; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| f(i, j, k))))
}

/// Frame data at `p`, with jets of order `order` for the metric.
pub fn frame_at(s: &LiouvilleSurface, p: (f64, f64), order: usize, convention: FrameConvention) -> Result<PointGeometry> {
    if order < 2 {
        return Err(Error::InsufficientOrder { needed: 2, available: order });
    }
    let u = Jet2::variable(p, order, Var::U);
    let v = Jet2::variable(p, order, Var::V);
    let a = s.a.jet(&u)?;
    let b = s.b.jet(&v)?;
    let lambda = &a + &b;
    let lv = lambda.value();
    if lv.re.is_nan() || lv.re <= 0.0 || lv.im.abs() > 1e-12 * lv.re.abs() {
        return Err(Error::NonPositiveConformalFactor { u: p.0, v: p.1, value: lv.re });
    }
    let inv_sqrt = lambda.compose(crate::jets::Analytic::Pow(-0.5))?;
    let sqrt = lambda.sqrt()?;
    let zero = lambda.zero_like();
    let (frame, coframe) = match convention {
        FrameConvention::Diagonal => (
            arr2(|a, m| if a == m { inv_sqrt.clone() } else { zero.clone() }),
            arr2(|a, m| if a == m { sqrt.clone() } else { zero.clone() }),
        ),
        FrameConvention::Antidiagonal => (
            [[zero.clone(), inv_sqrt.clone()], [-&inv_sqrt, zero.clone()]],
            [[zero.clone(), sqrt.clone()], [-&sqrt, zero.clone()]],
        ),
    };
    let metric = arr2(|m, n| sum_jets((0..2).map(|a| &coframe[a][m] * &coframe[a][n])));
    let inv_metric = arr2(|m, n| sum_jets((0..2).map(|a| &frame[a][m] * &frame[a][n])));
    let dmetric: [[[Jet2; 2]; 2]; 2] = arr3(|s, m, n| metric[m][n].d(Var::from_index(s)));
    // Γ^α_{βμ} = ½ g^{ασ}(∂_μ g_{σβ} + ∂_β g_{σμ} − ∂_σ g_{βμ})
    let christoffel = arr3(|al, be, mu| {
        sum_jets((0..2).map(|sg| {
            let t = &(&dmetric[mu][sg][be] + &dmetric[be][sg][mu]) - &dmetric[sg][be][mu];
            &inv_metric[al][sg] * &t * 0.5
        }))
    });
    // Γ^{ab}_μ = e^a_α (Γ^α_{βμ} e_b^β + ∂_μ e_b^α)
    let spin_connection = arr3(|a, b, mu| {
        sum_jets((0..2).map(|al| {
            let conn = sum_jets((0..2).map(|be| &christoffel[al][be][mu] * &frame[b][be]));
            &coframe[a][al] * &(conn + frame[b][al].d(Var::from_index(mu)))
        }))
    });
    let ricci = ricci_from_christoffel(&christoffel, &inv_metric);
    Ok(PointGeometry {
        point: p,
        order,
        convention,
        u,
        v,
        a,
        b,
        lambda,
        frame,
        coframe,
        metric,
        inv_metric,
        christoffel,
        spin_connection,
        ricci,
    })
}

/// `R = g^{βν} R^α_{βαν}` with
/// `R^α_{βμν} = ∂_μ Γ^α_{βν} − ∂_ν Γ^α_{βμ} + Γ^α_{μλ}Γ^λ_{βν} − Γ^α_{νλ}Γ^λ_{βμ}`.
/// With this contraction the unit sphere has `R = +2`.
fn ricci_from_christoffel(ch: &[[[Jet2; 2]; 2]; 2], inv_metric: &[[Jet2; 2]; 2]) -> Jet2 {
    let riemann = |al: usize, be: usize, mu: usize, nu: usize| -> Jet2 {
        let mut r = ch[al][be][nu].d(Var::from_index(mu)) - ch[al][be][mu].d(Var::from_index(nu));
        for la in 0..2 {
            r += &ch[al][mu][la] * &ch[la][be][nu];
            r -= &ch[al][nu][la] * &ch[la][be][mu];
        }
        r
    };
    sum_jets((0..2).flat_map(|be| (0..2).map(move |nu| (be, nu))).map(|(be, nu)| {
        let ric = sum_jets((0..2).map(|al| riemann(al, be, al, nu)));
        &inv_metric[be][nu] * &ric
    }))
}

/// Ricci scalar jet at `p`.
pub fn ricci_scalar(s: &LiouvilleSurface, p: (f64, f64), order: usize) -> Result<Jet2> {
    Ok(frame_at(s, p, order + 2, FrameConvention::Diagonal)?.ricci)
}

/// Frame tensor with `rank` upper frame indices; components stored with the
/// first index most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTensor {
    pub rank: usize,
    pub comps: Vec<Jet2>,
}

impl FrameTensor {
    pub fn scalar(f: Jet2) -> Self {
        FrameTensor { rank: 0, comps: vec![f] }
    }

    pub fn vector(v: [Jet2; 2]) -> Self {
        FrameTensor { rank: 1, comps: v.to_vec() }
    }

    pub fn matrix(m: [[Jet2; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = m;
        FrameTensor { rank: 2, comps: vec![a, b, c, d] }
    }

    pub fn from_fn(rank: usize, mut f: impl FnMut(&[usize]) -> Jet2) -> Self {
        let comps = (0..1usize << rank).map(|flat| f(&unflatten(flat, rank))).collect();
        FrameTensor { rank, comps }
    }

    pub fn get(&self, idx: &[usize]) -> &Jet2 {
        debug_assert_eq!(idx.len(), self.rank);
        &self.comps[flatten(idx)]
    }

    /// Largest component magnitude at the base point.
    pub fn magnitude(&self) -> f64 {
        self.comps.iter().map(|c| c.value().norm()).fold(0.0, f64::max)
    }

    /// Average over all permutations of the indices.
    pub fn symmetrized(&self) -> FrameTensor {
        let perms = permutations(self.rank);
        let scale = 1.0 / perms.len() as f64;
        FrameTensor::from_fn(self.rank, |idx| {
            let terms = perms.iter().map(|p| {
                let permuted: Vec<usize> = p.iter().map(|&k| idx[k]).collect();
                self.get(&permuted).clone()
            });
            sum_jets(terms) * scale
        })
    }
}

fn flatten(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * 2 + i)
}

fn unflatten(mut flat: usize, rank: usize) -> Vec<usize> {
    let mut out = vec![0; rank];
    for k in (0..rank).rev() {
        out[k] = flat & 1;
        flat >>= 1;
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn spinor_add(a: &SpinorJet, b: &SpinorJet) -> SpinorJet {
    [&a[0] + &b[0], &a[1] + &b[1]]
}

pub fn spinor_sub(a: &SpinorJet, b: &SpinorJet) -> SpinorJet {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

pub fn spinor_scale(a: &SpinorJet, s: &Jet2) -> SpinorJet {
    [&a[0] * s, &a[1] * s]
}

pub fn spinor_scale_c(a: &SpinorJet, s: Complex64) -> SpinorJet {
    [a[0].scale(s), a[1].scale(s)]
}

/// Max modulus of the spinor's value at the base point.
pub fn spinor_norm(a: &SpinorJet) -> f64 {
    a[0].value().norm().max(a[1].value().norm())
}

impl PointGeometry {
    pub fn zero(&self) -> Jet2 {
        self.lambda.zero_like()
    }

    /// `e_a(f)` for a scalar jet.
    pub fn grad(&self, f: &Jet2) -> [Jet2; 2] {
        std::array::from_fn(|a| sum_jets((0..2).map(|m| &self.frame[a][m] * &f.d(Var::from_index(m)))))
    }

    /// Frame components `V^a = e^a_μ V^μ` of a coordinate vector.
    pub fn to_frame_vector(&self, coord: &[Jet2; 2]) -> [Jet2; 2] {
        std::array::from_fn(|a| sum_jets((0..2).map(|m| &self.coframe[a][m] * &coord[m])))
    }

    pub fn to_coord_vector(&self, frame: &[Jet2; 2]) -> [Jet2; 2] {
        std::array::from_fn(|m| sum_jets((0..2).map(|a| &self.frame[a][m] * &frame[a])))
    }

    /// Frame components `T^{ab} = e^a_μ e^b_ν T^{μν}`.
    pub fn to_frame_tensor(&self, coord: &[[Jet2; 2]; 2]) -> [[Jet2; 2]; 2] {
        arr2(|a, b| {
            sum_jets((0..2).flat_map(|m| (0..2).map(move |n| (m, n))).map(|(m, n)| &(&self.coframe[a][m] * &self.coframe[b][n]) * &coord[m][n]))
        })
    }

    /// Coordinate components `T^{μν} = e_a^μ e_b^ν T^{ab}`.
    pub fn to_coord_tensor(&self, frame: &[[Jet2; 2]; 2]) -> [[Jet2; 2]; 2] {
        arr2(|m, n| sum_jets((0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| &(&self.frame[a][m] * &self.frame[b][n]) * &frame[a][b])))
    }

    /// `T_{μν} = g_{μα} g_{νβ} T^{αβ}`
    pub fn lower_tensor(&self, up: &[[Jet2; 2]; 2]) -> [[Jet2; 2]; 2] {
        arr2(|m, n| {
            sum_jets((0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| &(&self.metric[m][a] * &self.metric[n][b]) * &up[a][b]))
        })
    }

    /// Frame covariant derivative `∇_c T^{a1..ar}`, new index first, using
    /// the spin connection on every frame index.
    pub fn covariant_derivative(&self, t: &FrameTensor) -> FrameTensor {
        FrameTensor::from_fn(t.rank + 1, |idx| {
            let c = idx[0];
            let inner = &idx[1..];
            sum_jets((0..2).map(|mu| {
                let mut d = t.get(inner).d(Var::from_index(mu));
                for k in 0..t.rank {
                    for e in 0..2 {
                        let mut j = inner.to_vec();
                        j[k] = e;
                        d += &self.spin_connection[inner[k]][e][mu] * t.get(&j);
                    }
                }
                &self.frame[c][mu] * &d
            }))
        })
    }

    /// `∇_b V^a`, returned as `[b][a]`.
    pub fn vector_derivative(&self, v: &[Jet2; 2]) -> [[Jet2; 2]; 2] {
        let d = self.covariant_derivative(&FrameTensor::vector(v.clone()));
        arr2(|b, a| d.get(&[b, a]).clone())
    }

    /// `∇_σ T_{μν}` for a covariant coordinate tensor, returned as `[σ][μ][ν]`.
    pub fn coord_derivative_lower(&self, t: &[[Jet2; 2]; 2]) -> [[[Jet2; 2]; 2]; 2] {
        arr3(|s, m, n| {
            let mut d = t[m][n].d(Var::from_index(s));
            for l in 0..2 {
                d -= &self.christoffel[l][m][s] * &t[l][n];
                d -= &self.christoffel[l][n][s] * &t[m][l];
            }
            d
        })
    }

    /// `¼ ε_ab Γ^{ab}_μ`: the coefficient of `γ` in the spinor connection.
    pub fn spinor_connection(&self, mu: usize) -> Jet2 {
        sum_jets((0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| &self.spin_connection[a][b][mu] * (0.25 * EPS[a][b])))
    }

    /// `∇_μ ψ = ∂_μ ψ + ¼ ε_ab Γ^{ab}_μ γ ψ` for `μ = u, v`.
    pub fn spinor_derivative(&self, rep: &Representation, psi: &SpinorJet) -> Result<[SpinorJet; 2]> {
        check_order(psi, 1)?;
        Ok(std::array::from_fn(|mu| {
            let dpsi = [psi[0].d(Var::from_index(mu)), psi[1].d(Var::from_index(mu))];
            let gpsi = rep.act_blade(Blade::G, psi);
            spinor_add(&dpsi, &spinor_scale(&gpsi, &self.spinor_connection(mu)))
        }))
    }

    /// `∇_a ψ = e_a^μ ∇_μ ψ`.
    pub fn spinor_frame_derivative(&self, rep: &Representation, psi: &SpinorJet) -> Result<[SpinorJet; 2]> {
        let n = self.spinor_derivative(rep, psi)?;
        Ok(std::array::from_fn(|a| spinor_add(&spinor_scale(&n[0], &self.frame[a][0]), &spinor_scale(&n[1], &self.frame[a][1]))))
    }

    /// Symmetrized second covariant derivative `∇_(ab) ψ`.
    pub fn spinor_second_derivative(&self, rep: &Representation, psi: &SpinorJet) -> Result<[[SpinorJet; 2]; 2]> {
        check_order(psi, 2)?;
        let n = self.spinor_derivative(rep, psi)?;
        // D[mu][nu] = ∂_mu(∇_nu ψ) − Γ^λ_{nu mu} ∇_λ ψ + s_mu γ ∇_nu ψ
        let d: [[SpinorJet; 2]; 2] = arr2(|mu, nu| {
            let var = Var::from_index(mu);
            let mut t = [n[nu][0].d(var), n[nu][1].d(var)];
            for l in 0..2 {
                t = spinor_sub(&t, &spinor_scale(&n[l], &self.christoffel[l][nu][mu]));
            }
            let g = rep.act_blade(Blade::G, &n[nu]);
            spinor_add(&t, &spinor_scale(&g, &self.spinor_connection(mu)))
        });
        let second = |a: usize, b: usize| -> SpinorJet {
            let mut acc = [self.zero(), self.zero()];
            for mu in 0..2 {
                for nu in 0..2 {
                    let c = &self.frame[a][mu] * &self.frame[b][nu];
                    acc = spinor_add(&acc, &spinor_scale(&d[mu][nu], &c));
                }
            }
            acc
        };
        let raw = arr2(second);
        Ok(arr2(|a, b| spinor_scale_c(&spinor_add(&raw[a][b], &raw[b][a]), Complex64::new(0.5, 0.0))))
    }

    /// Coordinate components of the Liouville Killing tensor
    /// `K = B/(A+B) ∂u⊗∂u − A/(A+B) ∂v⊗∂v`.
    pub fn liouville_killing_tensor(&self) -> Result<[[Jet2; 2]; 2]> {
        let inv = self.lambda.recip()?;
        Ok([[&self.b * &inv, self.zero()], [self.zero(), -(&self.a * &inv)]])
    }
}

fn check_order(psi: &SpinorJet, needed: usize) -> Result<()> {
    let available = psi[0].order().min(psi[1].order());
    if available < needed {
        return Err(Error::InsufficientOrder { needed, available });
    }
    Ok(())
}

type JetMatrix = [[Jet2; 2]; 2];

/// Coordinate and frame components of the Liouville Killing tensor at `p`.
pub fn killing_tensor_liouville(s: &LiouvilleSurface, p: (f64, f64), order: usize) -> Result<(JetMatrix, JetMatrix)> {
    let geom = frame_at(s, p, order.max(2), FrameConvention::Diagonal)?;
    let coord = geom.liouville_killing_tensor()?;
    let frame = geom.to_frame_tensor(&coord);
    Ok((coord, frame))
}
