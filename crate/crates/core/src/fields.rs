//! Scalar, vector and symmetric-tensor fields, evaluated to jets against the
//! frame data of a point. Vector and tensor fields always report frame
//! components in whatever frame the [`PointGeometry`] carries.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::PointGeometry;
use crate::jets::Jet2;

type ScalarFn = dyn Fn(&PointGeometry) -> Result<Jet2> + Send + Sync;
type VectorFn = dyn Fn(&PointGeometry) -> Result<[Jet2; 2]> + Send + Sync;
type TensorFn = dyn Fn(&PointGeometry) -> Result<[[Jet2; 2]; 2]> + Send + Sync;

#[derive(Clone)]
pub struct ScalarField {
    pub name: String,
    f: Arc<ScalarFn>,
}

#[derive(Clone)]
pub struct VectorField {
    pub name: String,
    f: Arc<VectorFn>,
}

#[derive(Clone)]
pub struct TensorField {
    pub name: String,
    f: Arc<TensorFn>,
}

macro_rules! debug_by_name {
    ($t:ty) => {
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($t), self.name)
            }
        }
    };
}
debug_by_name!(ScalarField);
debug_by_name!(VectorField);
debug_by_name!(TensorField);

impl ScalarField {
    pub fn new(name: impl Into<String>, f: impl Fn(&PointGeometry) -> Result<Jet2> + Send + Sync + 'static) -> Self {
        ScalarField { name: name.into(), f: Arc::new(f) }
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self::new(format!("{c}"), move |g| Ok(g.lambda.constant_like(c)))
    }

    /// Field given directly as a function of the coordinate jets.
    pub fn from_uv(name: impl Into<String>, f: impl Fn(&Jet2, &Jet2) -> Result<Jet2> + Send + Sync + 'static) -> Self {
        Self::new(name, move |g| f(&g.u, &g.v))
    }

    pub fn eval(&self, g: &PointGeometry) -> Result<Jet2> {
        (self.f)(g)
    }

    pub fn add(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("{} + {}", self.name, other.name), move |g| Ok(a.eval(g)? + b.eval(g)?))
    }
}

impl VectorField {
    pub fn new(name: impl Into<String>, f: impl Fn(&PointGeometry) -> Result<[Jet2; 2]> + Send + Sync + 'static) -> Self {
        VectorField { name: name.into(), f: Arc::new(f) }
    }

    pub fn zero() -> Self {
        Self::new("0", |g| Ok([g.zero(), g.zero()]))
    }

    /// Field given by its coordinate components `(V^u, V^v)`.
    pub fn from_coords(name: impl Into<String>, f: impl Fn(&Jet2, &Jet2) -> Result<[Jet2; 2]> + Send + Sync + 'static) -> Self {
        Self::new(name, move |g| Ok(g.to_frame_vector(&f(&g.u, &g.v)?)))
    }

    /// `∂_u`
    pub fn coordinate_u() -> Self {
        Self::from_coords("d_u", |u, _| Ok([u.constant_like(1.0), u.zero_like()]))
    }

    /// `∂_v`
    pub fn coordinate_v() -> Self {
        Self::from_coords("d_v", |u, _| Ok([u.zero_like(), u.constant_like(1.0)]))
    }

    /// `-v ∂_u + u ∂_v`
    pub fn rotation() -> Self {
        Self::from_coords("-v d_u + u d_v", |u, v| Ok([-v, u.clone()]))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let s = self.clone();
        Self::new(format!("{c}*({})", self.name), move |g| {
            let [a, b] = s.eval(g)?;
            Ok([a * c, b * c])
        })
    }

    pub fn eval(&self, g: &PointGeometry) -> Result<[Jet2; 2]> {
        (self.f)(g)
    }
}

impl TensorField {
    pub fn new(name: impl Into<String>, f: impl Fn(&PointGeometry) -> Result<[[Jet2; 2]; 2]> + Send + Sync + 'static) -> Self {
        TensorField { name: name.into(), f: Arc::new(f) }
    }

    pub fn zero() -> Self {
        Self::new("0", |g| Ok([[g.zero(), g.zero()], [g.zero(), g.zero()]]))
    }

    /// Field given by its contravariant coordinate components.
    pub fn from_coords(name: impl Into<String>, f: impl Fn(&Jet2, &Jet2) -> Result<[[Jet2; 2]; 2]> + Send + Sync + 'static) -> Self {
        Self::new(name, move |g| Ok(g.to_frame_tensor(&f(&g.u, &g.v)?)))
    }

    /// `B/(A+B) ∂u⊗∂u − A/(A+B) ∂v⊗∂v`, frame components `diag(B, −A)` in
    /// the diagonal frame.
    pub fn liouville() -> Self {
        Self::new("liouville", |g| Ok(g.to_frame_tensor(&g.liouville_killing_tensor()?)))
    }

    /// `c η^{ab}`
    pub fn metric_multiple(c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self::new(format!("{c}*eta"), move |g| {
            let d = g.lambda.constant_like(c);
            Ok([[d.clone(), g.zero()], [g.zero(), d]])
        })
    }

    /// `ζ₁^{(a} ζ₂^{b)}`
    pub fn symmetric_product(z1: &VectorField, z2: &VectorField) -> Self {
        let (a, b) = (z1.clone(), z2.clone());
        Self::new(format!("({})(.)({})", z1.name, z2.name), move |g| {
            let x = a.eval(g)?;
            let y = b.eval(g)?;
            Ok(std::array::from_fn(|i| std::array::from_fn(|j| (&x[i] * &y[j] + &x[j] * &y[i]) * 0.5)))
        })
    }

    pub fn add(&self, other: &TensorField) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("{} + {}", self.name, other.name), move |g| {
            let x = a.eval(g)?;
            let y = b.eval(g)?;
            Ok(std::array::from_fn(|i| std::array::from_fn(|j| &x[i][j] + &y[i][j])))
        })
    }

    pub fn scaled(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        let s = self.clone();
        Self::new(format!("{c}*({})", self.name), move |g| {
            let x = s.eval(g)?;
            Ok(std::array::from_fn(|i| std::array::from_fn(|j| x[i][j].scale(c))))
        })
    }

    pub fn eval(&self, g: &PointGeometry) -> Result<[[Jet2; 2]; 2]> {
        (self.f)(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Bindings;
    use crate::geometry::{frame_at, FrameConvention, LiouvilleSurface};

    #[test]
    fn liouville_frame_components_are_b_and_minus_a() {
        let s = LiouvilleSurface::from_exprs("t", "u^2", "2 + sin(v)", &Bindings::new()).unwrap();
        let p = (0.4, 0.9);
        let g = frame_at(&s, p, 3, FrameConvention::Diagonal).unwrap();
        let k = TensorField::liouville().eval(&g).unwrap();
        assert!((k[0][0].value().re - (2.0 + 0.9f64.sin())).abs() < 1e-13);
        assert!((k[1][1].value().re + 0.16).abs() < 1e-13);
        assert!(k[0][1].max_abs() < 1e-14);
    }

    #[test]
    fn coordinate_vector_has_frame_length_sqrt_lambda() {
        let s = LiouvilleSurface::from_exprs("t", "0", "cosh(v)^(-2)", &Bindings::new()).unwrap();
        let g = frame_at(&s, (0.0, 0.5), 3, FrameConvention::Diagonal).unwrap();
        let z = VectorField::coordinate_u().eval(&g).unwrap();
        assert!((z[0].value().re - 1.0 / 0.5f64.cosh()).abs() < 1e-14);
    }
}
