//! The Clifford algebra C(2) with Euclidean signature.
//!
//! Elements are stored over the basis `{I, γ1, γ2, γ}` with `γ := γ1 γ2`.
//! Products follow from `γa γb + γb γa = 2 δab I` alone; no matrix
//! representation is involved. A [`Representation`] is only needed to act
//! on two-component spinors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::jets::Jet2;

/// Scalars the algebra can be built over: plain complex numbers or jets.
pub trait Scalar:
    Clone + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + Mul<Complex64, Output = Self>
{
    fn zero_like(&self) -> Self;
    /// Modulus of the value at the base point.
    fn magnitude(&self) -> f64;
}

impl Scalar for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for Jet2 {
    fn zero_like(&self) -> Self {
        Jet2::zero_like(self)
    }
    fn magnitude(&self) -> f64 {
        self.value().norm()
    }
}

/// Basis blades of C(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Blade {
    I,
    G1,
    G2,
    /// The pseudoscalar `γ1 γ2`.
    G,
}

impl Blade {
    pub const ALL: [Blade; 4] = [Blade::I, Blade::G1, Blade::G2, Blade::G];

    pub fn index(self) -> usize {
        match self {
            Blade::I => 0,
            Blade::G1 => 1,
            Blade::G2 => 2,
            Blade::G => 3,
        }
    }

    pub fn from_index(i: usize) -> Blade {
        Blade::ALL[i]
    }

    /// Generator `γ_a` for frame index `a ∈ {0, 1}`.
    pub fn gamma(a: usize) -> Blade {
        if a == 0 {
            Blade::G1
        } else {
            Blade::G2
        }
    }
}

/// Structure table: `x * y = sign * blade`.
pub fn blade_product(x: Blade, y: Blade) -> (f64, Blade) {
    use Blade::*;
    match (x, y) {
        (I, b) | (b, I) => (1.0, b),
        (G1, G1) | (G2, G2) => (1.0, I),
        (G1, G2) => (1.0, G),
        (G2, G1) => (-1.0, G),
        (G1, G) => (1.0, G2),
        (G, G1) => (-1.0, G2),
        (G2, G) => (-1.0, G1),
        (G, G2) => (1.0, G1),
        (G, G) => (-1.0, I),
    }
}

/// Element `c_I I + c_1 γ1 + c_2 γ2 + c_γ γ` of C(2).
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElement<S> {
    pub coeffs: [S; 4],
}

impl<S: Scalar> CliffordElement<S> {
    pub fn new(c_i: S, c_1: S, c_2: S, c_g: S) -> Self {
        CliffordElement { coeffs: [c_i, c_1, c_2, c_g] }
    }

    pub fn zero(like: &S) -> Self {
        let z = like.zero_like();
        CliffordElement { coeffs: [z.clone(), z.clone(), z.clone(), z] }
    }

    /// `s * blade`.
    pub fn from_blade(blade: Blade, s: S) -> Self {
        let mut out = Self::zero(&s);
        out.coeffs[blade.index()] = s;
        out
    }

    pub fn scalar(s: S) -> Self {
        Self::from_blade(Blade::I, s)
    }

    pub fn coeff(&self, blade: Blade) -> &S {
        &self.coeffs[blade.index()]
    }

    /// Coefficients `(c_I, c_1, c_2, c_γ)`.
    pub fn decompose(&self) -> (S, S, S, S) {
        let [a, b, c, d] = self.coeffs.clone();
        (a, b, c, d)
    }

    pub fn add(&self, other: &Self) -> Self {
        CliffordElement {
            coeffs: std::array::from_fn(|i| self.coeffs[i].clone() + other.coeffs[i].clone()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CliffordElement {
            coeffs: std::array::from_fn(|i| self.coeffs[i].clone() - other.coeffs[i].clone()),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CliffordElement {
            coeffs: std::array::from_fn(|i| self.coeffs[i].clone() * s),
        }
    }

    /// Multiply every coefficient by a scalar field value.
    pub fn scale_by(&self, s: &S) -> Self {
        CliffordElement {
            coeffs: std::array::from_fn(|i| self.coeffs[i].clone() * s.clone()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.coeffs[0]);
        for x in Blade::ALL {
            for y in Blade::ALL {
                let (sign, z) = blade_product(x, y);
                let term = self.coeffs[x.index()].clone() * other.coeffs[y.index()].clone();
                let k = z.index();
                out.coeffs[k] = if sign > 0.0 {
                    out.coeffs[k].clone() + term
                } else {
                    out.coeffs[k].clone() - term
                };
            }
        }
        out
    }

    /// `xy - yx`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `xy + yx`
    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// Largest coefficient magnitude (at the base point for jets).
    pub fn magnitude(&self) -> f64 {
        self.coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }
}

impl CliffordElement<Complex64> {
    pub fn blade(b: Blade) -> Self {
        Self::from_blade(b, Complex64::new(1.0, 0.0))
    }
}

impl CliffordElement<Jet2> {
    /// A constant element lifted to jets shaped like `like`.
    pub fn lift(c: &CliffordElement<Complex64>, like: &Jet2) -> Self {
        CliffordElement {
            coeffs: std::array::from_fn(|i| like.constant_like(c.coeffs[i])),
        }
    }

    /// Frame-independent derivative of each coefficient.
    pub fn map(&self, f: impl Fn(&Jet2) -> Jet2) -> Self {
        CliffordElement {
            coeffs: std::array::from_fn(|i| f(&self.coeffs[i])),
        }
    }

    pub fn value(&self) -> CliffordElement<Complex64> {
        CliffordElement {
            coeffs: std::array::from_fn(|i| self.coeffs[i].value()),
        }
    }
}

/// 2x2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

pub fn mat_add(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + b[i][j]))
}

pub fn mat_scale(a: &Mat2, s: Complex64) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] * s))
}

fn mat_dist(a: &Mat2, b: &Mat2) -> f64 {
    (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (a[i][j] - b[i][j]).norm())
        .fold(0.0, f64::max)
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const IM: Complex64 = Complex64::new(0.0, 1.0);

pub const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];
pub const SIGMA_X: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub const SIGMA_Y: Mat2 = [[ZERO, Complex64::new(0.0, -1.0)], [IM, ZERO]];
pub const SIGMA_Z: Mat2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

/// A concrete faithful representation of C(2) on C^2, fixed by the images
/// of `γ1` and `γ2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub name: String,
    pub gamma1: Mat2,
    pub gamma2: Mat2,
}

impl Representation {
    /// `γ1 = σx`, `γ2 = σy`, so `γ = i σz`.
    pub fn pauli() -> Self {
        Representation {
            name: "pauli".into(),
            gamma1: SIGMA_X,
            gamma2: SIGMA_Y,
        }
    }

    /// `γ1 = σz`, `γ2 = σy`: the representation in which the Dirac operator
    /// in the antidiagonal separation frame takes its standard matrix form.
    pub fn separation() -> Self {
        Representation {
            name: "separation".into(),
            gamma1: SIGMA_Z,
            gamma2: SIGMA_Y,
        }
    }

    /// Conjugate by a unitary: `γa -> U γa U†`.
    pub fn conjugated(&self, name: &str, unitary: &Mat2) -> Self {
        let dag: Mat2 = std::array::from_fn(|i| std::array::from_fn(|j| unitary[j][i].conj()));
        let conj = |m: &Mat2| mat_mul(&mat_mul(unitary, m), &dag);
        Representation {
            name: name.into(),
            gamma1: conj(&self.gamma1),
            gamma2: conj(&self.gamma2),
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "pauli" => Some(Self::pauli()),
            "separation" => Some(Self::separation()),
            _ => None,
        }
    }

    pub fn matrix(&self, blade: Blade) -> Mat2 {
        match blade {
            Blade::I => IDENTITY,
            Blade::G1 => self.gamma1,
            Blade::G2 => self.gamma2,
            Blade::G => mat_mul(&self.gamma1, &self.gamma2),
        }
    }

    pub fn image(&self, x: &CliffordElement<Complex64>) -> Mat2 {
        Blade::ALL
            .iter()
            .fold([[ZERO; 2]; 2], |acc, &b| mat_add(&acc, &mat_scale(&self.matrix(b), x.coeffs[b.index()])))
    }

    /// Action of a Clifford element on a two-component spinor.
    pub fn act<S: Scalar>(&self, x: &CliffordElement<S>, psi: &[S; 2]) -> [S; 2] {
        let mut out = [psi[0].zero_like(), psi[1].zero_like()];
        for b in Blade::ALL {
            let m = self.matrix(b);
            let c = &x.coeffs[b.index()];
            for (i, o) in out.iter_mut().enumerate() {
                let row = psi[0].clone() * m[i][0] + psi[1].clone() * m[i][1];
                *o = o.clone() + c.clone() * row;
            }
        }
        out
    }

    /// Action of the bare blade `b` on a spinor.
    pub fn act_blade<S: Scalar>(&self, b: Blade, psi: &[S; 2]) -> [S; 2] {
        let m = self.matrix(b);
        std::array::from_fn(|i| psi[0].clone() * m[i][0] + psi[1].clone() * m[i][1])
    }
}

/// Outcome of checking the abstract structure table against a matrix
/// representation.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationReport {
    pub representation: String,
    /// max |γaγb + γbγa − 2δab I| over all generator pairs.
    pub anticommutator_error: f64,
    /// Number of the 16 blade products whose image matches the table.
    pub matching_products: usize,
    pub max_product_error: f64,
    pub gamma_trace: Complex64,
}

impl RepresentationReport {
    pub fn passed(&self) -> bool {
        self.anticommutator_error == 0.0 && self.matching_products == 16 && self.gamma_trace.norm() == 0.0
    }
}

impl fmt::Display for RepresentationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: anticommutator error {:e}, {}/16 products match (max err {:e}), tr γ = {}",
            self.representation, self.anticommutator_error, self.matching_products, self.max_product_error, self.gamma_trace
        )
    }
}

/// Map every basis product through `rep` and compare with the table.
pub fn concrete_representation_check(rep: &Representation) -> RepresentationReport {
    let gens = [rep.gamma1, rep.gamma2];
    let mut anti = 0.0f64;
    for a in 0..2 {
        for b in 0..2 {
            let s = mat_add(&mat_mul(&gens[a], &gens[b]), &mat_mul(&gens[b], &gens[a]));
            let expect = if a == b { mat_scale(&IDENTITY, Complex64::new(2.0, 0.0)) } else { [[ZERO; 2]; 2] };
            anti = anti.max(mat_dist(&s, &expect));
        }
    }
    let mut matching = 0;
    let mut max_err = 0.0f64;
    for x in Blade::ALL {
        for y in Blade::ALL {
            let (sign, z) = blade_product(x, y);
            let lhs = mat_mul(&rep.matrix(x), &rep.matrix(y));
            let rhs = mat_scale(&rep.matrix(z), Complex64::new(sign, 0.0));
            let err = mat_dist(&lhs, &rhs);
            max_err = max_err.max(err);
            if err == 0.0 {
                matching += 1;
            }
        }
    }
    let g = rep.matrix(Blade::G);
    RepresentationReport {
        representation: rep.name.clone(),
        anticommutator_error: anti,
        matching_products: matching,
        max_product_error: max_err,
        gamma_trace: g[0][0] + g[1][1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = CliffordElement<Complex64>;

    fn b(x: Blade) -> C {
        C::blade(x)
    }

    #[test]
    fn generator_squares_and_products() {
        assert_eq!(b(Blade::G1).mul(&b(Blade::G1)), b(Blade::I));
        assert_eq!(b(Blade::G1).mul(&b(Blade::G2)), b(Blade::G));
        assert_eq!(b(Blade::G).mul(&b(Blade::G)), b(Blade::I).scale(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn commutators() {
        let z = C::zero(&Complex64::new(0.0, 0.0));
        assert_eq!(b(Blade::G1).anticommutator(&b(Blade::G2)), z);
        assert_eq!(b(Blade::I).commutator(&b(Blade::G)), z);
        assert_eq!(b(Blade::G1).commutator(&b(Blade::G)), b(Blade::G2).scale(Complex64::new(2.0, 0.0)));
    }

    #[test]
    fn decompose_examples() {
        let x = b(Blade::I).scale(Complex64::new(3.0, 0.0)).add(&b(Blade::G2).scale(Complex64::new(2.0, 0.0)));
        let (i, g1, g2, g) = x.decompose();
        assert_eq!((i.re, g1.re, g2.re, g.re), (3.0, 0.0, 2.0, 0.0));
        let (i, g1, g2, g) = b(Blade::G1).mul(&b(Blade::G2)).decompose();
        assert_eq!((i.re, g1.re, g2.re, g.re), (0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn builtin_representations_pass() {
        for rep in [Representation::pauli(), Representation::separation()] {
            let r = concrete_representation_check(&rep);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn broken_representation_fails() {
        let rep = Representation {
            name: "broken".into(),
            gamma1: SIGMA_X,
            gamma2: SIGMA_X,
        };
        assert!(!concrete_representation_check(&rep).passed());
    }
}
