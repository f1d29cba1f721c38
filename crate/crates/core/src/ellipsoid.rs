//! The triaxial ellipsoid `u₃ = h` in confocal coordinates `(u₁, u₂)`,
//! `0 ≤ a² < u₁² < b² < u₂² < c² < h²`, rescaled to Liouville form
//! `(u₂² − u₁²)(du² + dv²)` with `du = √φ₁ du₁`, `dv = √φ₂ du₂`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Domain, LiouvilleSurface, Profile};
use crate::jets::{taylor_ode, Analytic, Jet2};
use crate::numerics::{brent, integrate_real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub h: f64,
}

impl Default for EllipsoidParams {
    fn default() -> Self {
        EllipsoidParams { a: 1.0, b: 2.0, c: 3.0, h: 4.0 }
    }
}

impl EllipsoidParams {
    pub fn validate(&self) -> Result<()> {
        let (a, b, c, h) = (self.a.abs(), self.b.abs(), self.c.abs(), self.h.abs());
        if a < b && b < c && c < h {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "ellipsoid parameters need 0 <= a^2 < b^2 < c^2 < h^2, got a={}, b={}, c={}, h={}",
                self.a, self.b, self.c, self.h
            )))
        }
    }

    /// `x²(x²−h²)/((x²−c²)(b²−x²)(a²−x²))`; `φ₁ = −` this, `φ₂ = +` this.
    fn rational(&self, x: f64) -> f64 {
        let x2 = x * x;
        x2 * (x2 - self.h * self.h) / ((x2 - self.c * self.c) * (self.b * self.b - x2) * (self.a * self.a - x2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `u₁ ∈ (a, b)`, giving `u` and `A(u) = −u₁²`.
    First,
    /// `u₂ ∈ (b, c)`, giving `v` and `B(v) = u₂²`.
    Second,
}

/// One confocal coordinate and its Liouville rescaling, measured from the
/// middle of its interval.
#[derive(Debug, Clone)]
pub struct ConfocalCoordinate {
    pub params: EllipsoidParams,
    pub family: Family,
}

impl ConfocalCoordinate {
    pub fn interval(&self) -> (f64, f64) {
        let p = &self.params;
        match self.family {
            Family::First => (p.a.abs(), p.b.abs()),
            Family::Second => (p.b.abs(), p.c.abs()),
        }
    }

    fn sign(&self) -> f64 {
        match self.family {
            Family::First => -1.0,
            Family::Second => 1.0,
        }
    }

    pub fn reference(&self) -> f64 {
        let (lo, hi) = self.interval();
        0.5 * (lo + hi)
    }

    /// `φ(x)`, positive inside the interval.
    pub fn phi(&self, x: f64) -> f64 {
        self.sign() * self.params.rational(x)
    }

    /// `φ(x)(x − lo)(hi − x)` with the endpoint factors cancelled by hand.
    fn reduced(&self, x: f64) -> f64 {
        let p = &self.params;
        let (a, b, c, h) = (p.a.abs(), p.b.abs(), p.c.abs(), p.h.abs());
        let x2 = x * x;
        match self.family {
            Family::First => x2 * (x2 - h * h) / ((x2 - c * c) * (b + x) * (x + a)),
            Family::Second => x2 * (x2 - h * h) / ((c + x) * (x + b) * (a * a - x2)),
        }
    }

    /// `x = lo + w(1 − cos θ)/2`, so that `dx = √((x − lo)(hi − x)) dθ`.
    fn x_of(&self, theta: f64) -> f64 {
        let (lo, hi) = self.interval();
        lo + 0.5 * (hi - lo) * (1.0 - theta.cos())
    }

    fn theta_of(&self, x: f64) -> f64 {
        let (lo, hi) = self.interval();
        (1.0 - 2.0 * (x - lo) / (hi - lo)).clamp(-1.0, 1.0).acos()
    }

    fn liouville_theta(&self, theta: f64) -> Result<f64> {
        let dt = |th: f64| self.reduced(self.x_of(th)).max(0.0).sqrt();
        Ok(integrate_real(dt, std::f64::consts::FRAC_PI_2, theta, 1e-14, 1e-14)?)
    }

    /// Liouville coordinate of `x`: `∫ √φ` from the middle of the interval.
    pub fn to_liouville(&self, x: f64) -> Result<f64> {
        self.liouville_theta(self.theta_of(x))
    }

    /// Inverse of [`Self::to_liouville`] by bracketed root finding.
    pub fn from_liouville(&self, t: f64) -> Result<f64> {
        let mut failure = None;
        let theta = brent(
            |th| match self.liouville_theta(th) {
                Ok(s) => s - t,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            std::f64::consts::PI,
            1e-15,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(self.x_of(theta)),
        }
    }

    /// Taylor coefficients of `x(t)` at `t`, from `dx/dt = φ(x)^{-1/2}`.
    pub fn series(&self, t: f64, n: usize) -> Result<Vec<Complex64>> {
        let x0 = self.from_liouville(t)?;
        let p = self.params;
        let sign = self.sign();
        let s = taylor_ode(t, &[x0.into()], n, |_, y| {
            let x2 = &y[0] * &y[0];
            let num = &x2 * &(&x2 + (-p.h * p.h));
            let den = &(&(&x2 + (-p.c * p.c)) * &(-&x2 + p.b * p.b)) * &(-&x2 + p.a * p.a);
            let phi = (num * sign).div(&den)?;
            Ok(vec![phi.compose(Analytic::Pow(-0.5))?])
        })?;
        Ok(s.into_iter().next().expect("one component"))
    }
}

/// `A(u) = −u₁(u)²` or `B(v) = u₂(v)²`.
#[derive(Debug, Clone)]
pub struct EllipsoidProfile {
    pub coord: ConfocalCoordinate,
}

impl Profile for EllipsoidProfile {
    fn jet(&self, arg: &Jet2) -> Result<Jet2> {
        let series = self.coord.series(arg.value().re, arg.order())?;
        let x = arg.compose_series(&series);
        let sq = &x * &x;
        Ok(match self.coord.family {
            Family::First => -sq,
            Family::Second => sq,
        })
    }

    fn describe(&self) -> String {
        let p = self.coord.params;
        match self.coord.family {
            Family::First => format!("-u1(u)^2 [ellipsoid a={}, b={}, c={}, h={}]", p.a, p.b, p.c, p.h),
            Family::Second => format!("u2(v)^2 [ellipsoid a={}, b={}, c={}, h={}]", p.a, p.b, p.c, p.h),
        }
    }
}

/// The ellipsoid as a Liouville surface.
pub fn ellipsoid_surface(params: EllipsoidParams) -> Result<LiouvilleSurface> {
    params.validate()?;
    let a = EllipsoidProfile { coord: ConfocalCoordinate { params, family: Family::First } };
    let b = EllipsoidProfile { coord: ConfocalCoordinate { params, family: Family::Second } };
    Ok(LiouvilleSurface::new("ellipsoid", Arc::new(a), Arc::new(b)))
}

/// Liouville rectangle covering the middle 60% of both confocal intervals.
pub fn ellipsoid_domain(params: EllipsoidParams) -> Result<Domain> {
    params.validate()?;
    let first = ConfocalCoordinate { params, family: Family::First };
    let second = ConfocalCoordinate { params, family: Family::Second };
    let inner = |c: &ConfocalCoordinate| -> Result<(f64, f64)> {
        let (lo, hi) = c.interval();
        let w = hi - lo;
        Ok((c.to_liouville(lo + 0.2 * w)?, c.to_liouville(hi - 0.2 * w)?))
    };
    let (u0, u1) = inner(&first)?;
    let (v0, v1) = inner(&second)?;
    Ok(Domain::new(u0, u1, v0, v1))
}
