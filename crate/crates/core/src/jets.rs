//! Truncated bivariate Taylor jets.
//!
//! A [`Jet2`] of order `N` at base point `(u0, v0)` stores the monomial
//! coefficients `c_ij` (`i + j <= N`) of
//!
//! ```text
//! sum c_ij (u - u0)^i (v - v0)^j
//! ```
//!
//! Coefficients are plain monomial coefficients, so `d^i_u d^j_v f = i! j! c_ij`.
//! Every analytic quantity in the crate (frames, connections, curvature,
//! spinor components, operator coefficients) is carried as a jet, which makes
//! derivatives exact up to rounding.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by jet arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("jets live at different base points: {0:?} vs {1:?}")]
    BaseMismatch((f64, f64), (f64, f64)),
    #[error("jets have different orders: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("cannot differentiate a jet of order 0")]
    ZeroOrder,
    #[error("{function} is singular at {at}")]
    Singular { function: &'static str, at: Complex64 },
}

/// Coordinate direction of a partial derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    U,
    V,
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::U => 0,
            Var::V => 1,
        }
    }

    pub fn from_index(i: usize) -> Var {
        if i == 0 {
            Var::U
        } else {
            Var::V
        }
    }
}

/// Univariate analytic functions that can be composed with a jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Analytic {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
    Recip,
    /// `x^p` for a real exponent.
    Pow(f64),
}

impl Analytic {
    pub fn name(self) -> &'static str {
        match self {
            Analytic::Sin => "sin",
            Analytic::Cos => "cos",
            Analytic::Sinh => "sinh",
            Analytic::Cosh => "cosh",
            Analytic::Exp => "exp",
            Analytic::Ln => "ln",
            Analytic::Sqrt => "sqrt",
            Analytic::Recip => "reciprocal",
            Analytic::Pow(_) => "pow",
        }
    }

    pub fn eval(self, x: Complex64) -> Result<Complex64, JetError> {
        Ok(self.taylor(x, 0)?[0])
    }

    /// Taylor coefficients `f^(k)(x0) / k!` for `k = 0..=n`.
    pub fn taylor(self, x0: Complex64, n: usize) -> Result<Vec<Complex64>, JetError> {
        let singular = |function| JetError::Singular { function, at: x0 };
        let on_cut = x0.im == 0.0 && x0.re <= 0.0;
        let mut out = Vec::with_capacity(n + 1);
        match self {
            Analytic::Exp => {
                let e = x0.exp();
                let mut fact = 1.0;
                for k in 0..=n {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    out.push(e / fact);
                }
            }
            Analytic::Sin | Analytic::Cos => {
                let (s, c) = (x0.sin(), x0.cos());
                // derivative cycle of sin: sin, cos, -sin, -cos
                let cycle = [s, c, -s, -c];
                let shift = if self == Analytic::Sin { 0 } else { 1 };
                let mut fact = 1.0;
                for k in 0..=n {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    out.push(cycle[(k + shift) % 4] / fact);
                }
            }
            Analytic::Sinh | Analytic::Cosh => {
                let (s, c) = (x0.sinh(), x0.cosh());
                let cycle = [s, c];
                let shift = if self == Analytic::Sinh { 0 } else { 1 };
                let mut fact = 1.0;
                for k in 0..=n {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    out.push(cycle[(k + shift) % 2] / fact);
                }
            }
            Analytic::Ln => {
                if on_cut {
                    return Err(singular("ln"));
                }
                out.push(x0.ln());
                let mut p = Complex64::new(1.0, 0.0);
                for k in 1..=n {
                    p *= x0;
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    out.push(sign / (k as f64 * p));
                }
            }
            Analytic::Sqrt => {
                if on_cut {
                    return Err(singular("sqrt"));
                }
                return Analytic::Pow(0.5).taylor(x0, n);
            }
            Analytic::Recip => {
                if x0 == Complex64::new(0.0, 0.0) {
                    return Err(singular("reciprocal"));
                }
                return Analytic::Pow(-1.0).taylor(x0, n);
            }
            Analytic::Pow(p) => {
                let is_int = p.fract() == 0.0;
                if is_int && p >= 0.0 {
                    // polynomial: binomial expansion, no domain restriction
                    let pi = p as i64;
                    for k in 0..=n {
                        if (k as i64) > pi {
                            out.push(Complex64::new(0.0, 0.0));
                        } else {
                            out.push(binomial(p, k) * x0.powi((pi - k as i64) as i32));
                        }
                    }
                } else {
                    if is_int {
                        if x0 == Complex64::new(0.0, 0.0) {
                            return Err(singular("pow"));
                        }
                    } else if on_cut {
                        return Err(singular("pow"));
                    }
                    let lead = if is_int { x0.powi(p as i32) } else { x0.powf(p) };
                    let inv = x0.inv();
                    let mut xp = lead;
                    for k in 0..=n {
                        if k > 0 {
                            xp *= inv;
                        }
                        out.push(binomial(p, k) * xp);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn binomial(p: f64, k: usize) -> f64 {
    let mut b = 1.0;
    for i in 0..k {
        b *= (p - i as f64) / (i as f64 + 1.0);
    }
    b
}

#[inline]
fn tri(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

#[inline]
fn len_for(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Truncated bivariate Taylor polynomial with complex coefficients.
#[derive(Clone, PartialEq)]
pub struct Jet2 {
    base: (f64, f64),
    order: usize,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet2@({}, {})[N={}]{{", self.base.0, self.base.1, self.order)?;
        let mut first = true;
        for (i, j, c) in self.terms() {
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "c{i}{j}={c}")?;
        }
        write!(f, "}}")
    }
}

impl Jet2 {
    pub fn zero(base: (f64, f64), order: usize) -> Self {
        Jet2 {
            base,
            order,
            coeffs: vec![Complex64::new(0.0, 0.0); len_for(order)],
        }
    }

    pub fn constant(base: (f64, f64), order: usize, value: impl Into<Complex64>) -> Self {
        let mut j = Self::zero(base, order);
        j.coeffs[0] = value.into();
        j
    }

    /// The coordinate function `var` itself, expanded at `base`.
    pub fn variable(base: (f64, f64), order: usize, var: Var) -> Self {
        let x0 = match var {
            Var::U => base.0,
            Var::V => base.1,
        };
        let mut j = Self::constant(base, order, x0);
        if order >= 1 {
            match var {
                Var::U => j.coeffs[tri(1, 0)] = Complex64::new(1.0, 0.0),
                Var::V => j.coeffs[tri(0, 1)] = Complex64::new(1.0, 0.0),
            }
        }
        j
    }

    /// Build a jet from a coefficient function `(i, j) -> c_ij`.
    pub fn from_fn(base: (f64, f64), order: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut j = Self::zero(base, order);
        for d in 0..=order {
            for jj in 0..=d {
                j.coeffs[tri(d - jj, jj)] = f(d - jj, jj);
            }
        }
        j
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.base, self.order)
    }

    pub fn constant_like(&self, value: impl Into<Complex64>) -> Self {
        Self::constant(self.base, self.order, value)
    }

    pub fn base(&self) -> (f64, f64) {
        self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Constant term, i.e. the value at the base point.
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        if i + j > self.order {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[tri(i, j)]
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: Complex64) {
        assert!(i + j <= self.order, "coefficient ({i},{j}) outside order {}", self.order);
        self.coeffs[tri(i, j)] = c;
    }

    /// `d^i_u d^j_v` of the represented function at the base point.
    pub fn derivative(&self, i: usize, j: usize) -> Complex64 {
        self.coeff(i, j) * (factorial(i) * factorial(j))
    }

    /// Iterator over `(i, j, c_ij)` ordered by total degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..=self.order).flat_map(move |d| (0..=d).map(move |j| (d - j, j, self.coeffs[tri(d - j, j)])))
    }

    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order {
            return self.clone();
        }
        Jet2 {
            base: self.base,
            order,
            coeffs: self.coeffs[..len_for(order)].to_vec(),
        }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluate the truncated polynomial at an offset from the base point.
    pub fn eval_offset(&self, du: f64, dv: f64) -> Complex64 {
        self.terms().map(|(i, j, c)| c * du.powi(i as i32) * dv.powi(j as i32)).sum()
    }

    fn check_compatible(&self, other: &Jet2) -> Result<(), JetError> {
        if self.base != other.base {
            return Err(JetError::BaseMismatch(self.base, other.base));
        }
        if self.order != other.order {
            return Err(JetError::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.check_compatible(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.check_compatible(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Jet2 {
        let s = s.into();
        Jet2 {
            base: self.base,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Partial derivative; the result has order `N - 1`.
    pub fn partial(&self, var: Var) -> Result<Jet2, JetError> {
        if self.order == 0 {
            return Err(JetError::ZeroOrder);
        }
        let n = self.order - 1;
        Ok(Jet2::from_fn(self.base, n, |i, j| match var {
            Var::U => self.coeff(i + 1, j) * (i + 1) as f64,
            Var::V => self.coeff(i, j + 1) * (j + 1) as f64,
        }))
    }

    /// Partial derivative that panics on order-0 input; for pipelines that
    /// have already checked their order budget.
    pub fn d(&self, var: Var) -> Jet2 {
        self.partial(var).expect("jet order exhausted")
    }

    /// `sum_k series[k] * (self - self(0))^k`, truncated at this jet's order.
    pub fn compose_series(&self, series: &[Complex64]) -> Jet2 {
        let mut delta = self.clone();
        delta.coeffs[0] = Complex64::new(0.0, 0.0);
        // Horner; the series beyond the jet order contributes nothing.
        let top = series.len().min(self.order + 1);
        let mut acc = self.constant_like(if top > 0 { series[top - 1] } else { Complex64::new(0.0, 0.0) });
        for k in (0..top.saturating_sub(1)).rev() {
            acc = &acc * &delta;
            acc.coeffs[0] += series[k];
        }
        acc
    }

    /// Compose a univariate analytic function with this jet.
    pub fn compose(&self, f: Analytic) -> Result<Jet2, JetError> {
        if let Analytic::Pow(p) = f {
            if p.fract() == 0.0 && p.abs() <= 16.0 {
                return self.powi(p as i32);
            }
        }
        let series = f.taylor(self.value(), self.order)?;
        Ok(self.compose_series(&series))
    }

    pub fn powi(&self, n: i32) -> Result<Jet2, JetError> {
        let base = if n < 0 { self.compose_recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.constant_like(1.0);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    fn compose_recip(&self) -> Result<Jet2, JetError> {
        let series = Analytic::Recip.taylor(self.value(), self.order)?;
        Ok(self.compose_series(&series))
    }

    pub fn recip(&self) -> Result<Jet2, JetError> {
        self.compose_recip()
    }

    pub fn sqrt(&self) -> Result<Jet2, JetError> {
        self.compose(Analytic::Sqrt)
    }

    pub fn div(&self, other: &Jet2) -> Result<Jet2, JetError> {
        Ok(self * &other.recip()?)
    }

    pub fn exp(&self) -> Jet2 {
        self.compose(Analytic::Exp).expect("exp is entire")
    }

    pub fn sin(&self) -> Jet2 {
        self.compose(Analytic::Sin).expect("sin is entire")
    }

    pub fn cos(&self) -> Jet2 {
        self.compose(Analytic::Cos).expect("cos is entire")
    }

    pub fn sinh(&self) -> Jet2 {
        self.compose(Analytic::Sinh).expect("sinh is entire")
    }

    pub fn cosh(&self) -> Jet2 {
        self.compose(Analytic::Cosh).expect("cosh is entire")
    }

    fn same_base(&self, other: &Jet2) {
        assert!(
            self.base == other.base,
            "jet arithmetic across base points {:?} and {:?}",
            self.base,
            other.base
        );
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl<'a> Add<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &'a Jet2) -> Jet2 {
        self.same_base(rhs);
        let n = self.order.min(rhs.order);
        let len = len_for(n);
        Jet2 {
            base: self.base,
            order: n,
            coeffs: self.coeffs[..len].iter().zip(&rhs.coeffs[..len]).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &'a Jet2) -> Jet2 {
        self.same_base(rhs);
        let n = self.order.min(rhs.order);
        let len = len_for(n);
        Jet2 {
            base: self.base,
            order: n,
            coeffs: self.coeffs[..len].iter().zip(&rhs.coeffs[..len]).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &'a Jet2) -> Jet2 {
        self.same_base(rhs);
        let n = self.order.min(rhs.order);
        let mut out = Jet2::zero(self.base, n);
        for d1 in 0..=n {
            for j1 in 0..=d1 {
                let a = self.coeffs[tri(d1 - j1, j1)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for d2 in 0..=(n - d1) {
                    for j2 in 0..=d2 {
                        let b = rhs.coeffs[tri(d2 - j2, j2)];
                        out.coeffs[tri(d1 - j1 + d2 - j2, j1 + j2)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Jet2> for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Jet2> for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: &'a Jet2) -> Jet2 {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Jet2> for &'a Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Mul<Complex64> for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Complex64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Complex64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Add<f64> for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: f64) -> Jet2 {
        let mut out = self.clone();
        out.coeffs[0] += rhs;
        out
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, rhs: f64) -> Jet2 {
        self.coeffs[0] += rhs;
        self
    }
}

impl AddAssign<&Jet2> for Jet2 {
    fn add_assign(&mut self, rhs: &Jet2) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Jet2> for Jet2 {
    fn add_assign(&mut self, rhs: Jet2) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Jet2> for Jet2 {
    fn sub_assign(&mut self, rhs: &Jet2) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Jet2> for Jet2 {
    fn sub_assign(&mut self, rhs: Jet2) {
        *self = &*self - &rhs;
    }
}

/// Sum of a non-empty iterator of jets.
pub fn sum_jets<I: IntoIterator<Item = Jet2>>(iter: I) -> Jet2 {
    let mut it = iter.into_iter();
    let first = it.next().expect("sum of no jets");
    it.fold(first, |acc, j| acc + j)
}

/// Taylor coefficients at `t0` of the solution of `y' = rhs(t, y)` with
/// `y(t0) = y0`, to degree `n`. The jets handed to `rhs` are univariate
/// (in `u`, based at `(t0, 0)`).
pub fn taylor_ode<F>(t0: f64, y0: &[Complex64], n: usize, mut rhs: F) -> Result<Vec<Vec<Complex64>>, JetError>
where
    F: FnMut(&Jet2, &[Jet2]) -> Result<Vec<Jet2>, JetError>,
{
    let base = (t0, 0.0);
    let t = Jet2::variable(base, n, Var::U);
    let mut ys: Vec<Jet2> = y0.iter().map(|&c| Jet2::constant(base, n, c)).collect();
    for k in 1..=n {
        let f = rhs(&t, &ys)?;
        for (y, fi) in ys.iter_mut().zip(&f) {
            y.set_coeff(k, 0, fi.coeff(k - 1, 0) / k as f64);
        }
    }
    Ok(ys.iter().map(|y| (0..=n).map(|k| y.coeff(k, 0)).collect()).collect())
}
