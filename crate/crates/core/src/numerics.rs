//! Adaptive Gauss–Kronrod quadrature, a Dormand–Prince 5(4) integrator and
//! Brent root bracketing.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("quadrature did not converge on [{a}, {b}] (estimated error {err:e})")]
    Quadrature { a: f64, b: f64, err: f64 },
    #[error("ODE step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("ODE step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },
    #[error("root not bracketed on [{a}, {b}]")]
    NotBracketed { a: f64, b: f64 },
    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },
}

// Kronrod 15-point nodes / weights and the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let x = h * XGK[k];
        let s = f(c - x) + f(c + x);
        kron += s * WGK[k];
        if k % 2 == 1 {
            gauss += s * WG[k / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

const MAX_SEGMENTS: usize = 4000;

struct Segment {
    lo: f64,
    hi: f64,
    val: Complex64,
    err: f64,
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of a complex integrand.
///
/// Globally adaptive: the segment with the largest error estimate is split
/// until the summed estimate meets `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Complex64, NumericsError> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (val, err) = gk15(&mut f, a, b);
    let mut segments = vec![Segment { lo: a, hi: b, val, err }];
    let mut total = val;
    let mut err_sum = err;
    loop {
        let abs_sum: f64 = segments.iter().map(|s| s.val.norm()).sum();
        // below this the estimate is rounding noise
        let floor = 50.0 * f64::EPSILON * abs_sum;
        if err_sum <= abs_tol.max(rel_tol * total.norm()).max(floor) {
            return Ok(total);
        }
        let worst = (0..segments.len()).max_by(|&i, &j| segments[i].err.total_cmp(&segments[j].err)).expect("nonempty");
        let Segment { lo, hi, val, err } = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if segments.len() + 2 > MAX_SEGMENTS || mid == lo || mid == hi {
            return Err(NumericsError::Quadrature { a: lo, b: hi, err: err_sum });
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        total += v1 + v2 - val;
        err_sum += e1 + e2 - err;
        segments.push(Segment { lo, hi: mid, val: v1, err: e1 });
        segments.push(Segment { lo: mid, hi, val: v2, err: e2 });
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64, NumericsError> {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, abs_tol, rel_tol).map(|c| c.re)
}

/// Brent's method on a bracketing interval.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64, NumericsError> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NotBracketed { a, b });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// Tolerances and limits for [`Dopri5`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
    pub initial_step: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_steps: 200_000,
            initial_step: 1e-3,
        }
    }
}

/// Dormand–Prince 5(4) with step-size control, for real state vectors.
pub struct Dopri5<F> {
    rhs: F,
    opts: OdeOptions,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

impl<F: FnMut(f64, &[f64], &mut [f64])> Dopri5<F> {
    pub fn new(rhs: F, opts: OdeOptions) -> Self {
        Dopri5 { rhs, opts }
    }

    /// Integrate `y` in place from `t0` to `t1` (either direction).
    pub fn integrate(&mut self, t0: f64, t1: f64, y: &mut [f64]) -> Result<(), NumericsError> {
        let n = y.len();
        if t0 == t1 {
            return Ok(());
        }
        let dir = (t1 - t0).signum();
        let mut t = t0;
        let mut h = self.opts.initial_step.min((t1 - t0).abs()) * dir;
        let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
        let mut tmp = vec![0.0; n];
        let mut ynew = vec![0.0; n];
        (self.rhs)(t, y, &mut k[0]);
        for _ in 0..self.opts.max_steps {
            if (t1 - t) * dir <= 0.0 {
                return Ok(());
            }
            if (t + h - t1) * dir > 0.0 {
                h = t1 - t;
            }
            let stage = |coefs: &[(usize, f64)], k: &Vec<Vec<f64>>, tmp: &mut Vec<f64>| {
                for i in 0..n {
                    tmp[i] = y[i] + h * coefs.iter().map(|&(s, c)| c * k[s][i]).sum::<f64>();
                }
            };
            stage(&[(0, A21)], &k, &mut tmp);
            (self.rhs)(t + C2 * h, &tmp, &mut k[1]);
            stage(&[(0, A31), (1, A32)], &k, &mut tmp);
            (self.rhs)(t + C3 * h, &tmp, &mut k[2]);
            stage(&[(0, A41), (1, A42), (2, A43)], &k, &mut tmp);
            (self.rhs)(t + C4 * h, &tmp, &mut k[3]);
            stage(&[(0, A51), (1, A52), (2, A53), (3, A54)], &k, &mut tmp);
            (self.rhs)(t + C5 * h, &tmp, &mut k[4]);
            stage(&[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], &k, &mut tmp);
            (self.rhs)(t + h, &tmp, &mut k[5]);
            stage(&[(0, A71), (2, A73), (3, A74), (4, A75), (5, A76)], &k, &mut ynew);
            (self.rhs)(t + h, &ynew, &mut k[6]);
            let mut err = 0.0;
            for i in 0..n {
                let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
                let sc = self.opts.abs_tol + self.opts.rel_tol * y[i].abs().max(ynew[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / n as f64).sqrt();
            if !err.is_finite() {
                return Err(NumericsError::NonFinite { t });
            }
            if err <= 1.0 {
                t += h;
                y.copy_from_slice(&ynew);
                k.swap(0, 6);
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(NumericsError::StepUnderflow { t });
            }
        }
        Err(NumericsError::TooManySteps { t })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_of_smooth_and_endpoint_singular_integrands() {
        let v = integrate_real(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-13, 1e-13).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        // integrable endpoint singularity
        let v = integrate_real(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-10, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-8, "{v}");
        let v = integrate(|x| Complex64::new(0.0, x).exp(), 0.0, 1.0, 1e-13, 1e-13).unwrap();
        let exact = (Complex64::new(0.0, 1.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((v - exact).norm() < 1e-13);
    }

    #[test]
    fn brent_finds_cube_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
        assert!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn dopri_harmonic_oscillator() {
        let mut ode = Dopri5::new(
            |_t, y: &[f64], dy: &mut [f64]| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            OdeOptions::default(),
        );
        let mut y = [0.0, 1.0];
        ode.integrate(0.0, 10.0, &mut y).unwrap();
        assert!((y[0] - 10f64.sin()).abs() < 1e-8);
        assert!((y[1] - 10f64.cos()).abs() < 1e-8);
        // backwards
        ode.integrate(10.0, 0.0, &mut y).unwrap();
        assert!(y[0].abs() < 1e-8);
    }
}
