//! Seeded generators of rational test data.

use num_traits::Signed;
use rand::Rng;

use crate::quaternion::{Quaternion, Rational, Scalar};

pub fn rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    Rational::from_ratio(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

pub fn quaternion<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Quaternion<Rational> {
    Quaternion::new(
        rational(rng, max_num, max_den),
        rational(rng, max_num, max_den),
        rational(rng, max_num, max_den),
        rational(rng, max_num, max_den),
    )
}

/// Rational quaternion with nonzero imaginary part.
pub fn nonreal_quaternion<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Quaternion<Rational> {
    loop {
        let q = quaternion(rng, max_num, max_den);
        if !q.is_real() {
            return q;
        }
    }
}

/// Rational point of the unit sphere of imaginary units, by inverse
/// stereographic projection of `(u, v)`.
pub fn rational_unit<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Quaternion<Rational> {
    let u = rational(rng, max_num, max_den);
    let v = rational(rng, max_num, max_den);
    let s = u.clone() * u.clone() + v.clone() * v.clone();
    let d = s.clone() + Rational::from_i64(1);
    let two = Rational::from_i64(2);
    Quaternion::new(
        Rational::from_i64(0),
        two.clone() * u / d.clone(),
        two * v / d.clone(),
        (s - Rational::from_i64(1)) / d,
    )
}

/// Non-real rational quaternion `alpha + J beta` with `beta` and `J` rational.
pub fn exact_nonreal<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Quaternion<Rational> {
    let alpha = rational(rng, max_num, max_den);
    let beta = loop {
        let b = rational(rng, max_num, max_den).abs();
        if b != Rational::from_i64(0) {
            break b;
        }
    };
    let unit = rational_unit(rng, 3, 3);
    &Quaternion::real(alpha) + &unit.scale(&beta)
}

/// Right coefficients `a_0..=a_degree` with a nonzero leading term.
pub fn polynomial<R: Rng>(rng: &mut R, degree: usize, max_num: i64, max_den: i64) -> Vec<Quaternion<Rational>> {
    let mut coeffs: Vec<_> = (0..=degree).map(|_| quaternion(rng, max_num, max_den)).collect();
    while coeffs[degree].is_zero() {
        coeffs[degree] = quaternion(rng, max_num, max_den);
    }
    coeffs
}
