//! Seeded random points and spinor fields.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Domain;
use crate::spinor_ops::SpinorField;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points<R: Rng>(rng: &mut R, domain: &Domain, n: usize) -> Vec<(f64, f64)> {
    (0..n).map(|_| domain.lerp(rng.gen(), rng.gen())).collect()
}

fn complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Six monomials of degree at most three.
pub fn random_polynomial_field<R: Rng>(rng: &mut R) -> SpinorField {
    let terms = (0..6)
        .map(|_| {
            let deg = rng.gen_range(0..=3u32);
            let i = rng.gen_range(0..=deg);
            (i, deg - i, [complex(rng), complex(rng)])
        })
        .collect();
    SpinorField::polynomial(terms)
}

/// Three plane waves with wave numbers in `[-2, 2]`.
pub fn random_trig_field<R: Rng>(rng: &mut R) -> SpinorField {
    let waves = (0..3)
        .map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.0..2.0 * PI), [complex(rng), complex(rng)]))
        .collect();
    SpinorField::trigonometric(waves)
}

/// `n` fields alternating polynomial and trigonometric.
pub fn random_spinor_fields<R: Rng>(rng: &mut R, n: usize) -> Vec<SpinorField> {
    (0..n).map(|k| if k % 2 == 0 { random_polynomial_field(rng) } else { random_trig_field(rng) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_points() {
        let d = Domain::new(0.0, 1.0, -1.0, 0.0);
        let a = random_points(&mut rng(7), &d, 5);
        let b = random_points(&mut rng(7), &d, 5);
        assert_eq!(a, b);
        assert!(a.iter().all(|&p| d.contains(p)));
    }
}
