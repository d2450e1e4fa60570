//! Laurent polynomials in `(alpha, beta)` with quaternionic coefficients.
//!
//! A [`LaurentStem`] is one component `F0` or `F1` of a stem function,
//! restricted to the `beta > 0` branch. Exponents of `alpha` are
//! nonnegative; exponents of `beta` may be negative so that division by
//! `beta` (the spherical derivative) stays inside the ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::quaternion::{Quaternion, Rational, Scalar};

/// Exponent pair `(deg_alpha, deg_beta)`.
pub type Exponent = (u32, i32);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Alpha,
    Beta,
}

/// Sparse map from exponents to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentStem<T> {
    terms: BTreeMap<Exponent, Quaternion<T>>,
}

impl<T: Scalar> Default for LaurentStem<T> {
    fn default() -> Self {
        LaurentStem::zero()
    }
}

impl<T: Scalar> LaurentStem<T> {
    pub fn zero() -> Self {
        LaurentStem { terms: BTreeMap::new() }
    }

    pub fn constant(c: Quaternion<T>) -> Self {
        LaurentStem::monomial(0, 0, c)
    }

    pub fn real_constant(c: T) -> Self {
        LaurentStem::constant(Quaternion::real(c))
    }

    pub fn monomial(deg_alpha: u32, deg_beta: i32, c: Quaternion<T>) -> Self {
        let mut s = LaurentStem::zero();
        s.add_term((deg_alpha, deg_beta), c);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, Quaternion<T>)>) -> Self {
        let mut s = LaurentStem::zero();
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// Adds `c * alpha^a * beta^b`, deleting the entry if it cancels.
    pub fn add_term(&mut self, e: Exponent, c: Quaternion<T>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero test with a per-coefficient tolerance (exact for rationals).
    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_zero_within(tol))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Quaternion<T>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, deg_alpha: u32, deg_beta: i32) -> Quaternion<T> {
        self.terms
            .get(&(deg_alpha, deg_beta))
            .cloned()
            .unwrap_or_else(Quaternion::zero)
    }

    fn map_coeffs(&self, f: impl Fn(&Quaternion<T>) -> Quaternion<T>) -> Self {
        LaurentStem::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    /// `q * s`, the constant acting on the left of every coefficient.
    pub fn left_mul(&self, q: &Quaternion<T>) -> Self {
        self.map_coeffs(|c| q * c)
    }

    /// `s * q`, the constant acting on the right of every coefficient.
    pub fn right_mul(&self, q: &Quaternion<T>) -> Self {
        self.map_coeffs(|c| c * q)
    }

    /// Product with coefficients multiplied in left-to-right order.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentStem::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    /// Formal term-wise partial derivative.
    pub fn partial_derivative(&self, var: Var) -> Self {
        let mut out = LaurentStem::zero();
        for (&(a, b), c) in &self.terms {
            match var {
                Var::Alpha if a > 0 => {
                    out.add_term((a - 1, b), c.scale(&T::from_i64(a as i64)));
                }
                Var::Beta if b != 0 => {
                    out.add_term((a, b - 1), c.scale(&T::from_i64(b as i64)));
                }
                _ => {}
            }
        }
        out
    }

    /// Decrements every `beta` exponent.
    pub fn div_beta(&self) -> Self {
        LaurentStem {
            terms: self.terms.iter().map(|(&(a, b), c)| ((a, b - 1), c.clone())).collect(),
        }
    }

    /// Increments every `beta` exponent.
    pub fn mul_beta(&self) -> Self {
        LaurentStem {
            terms: self.terms.iter().map(|(&(a, b), c)| ((a, b + 1), c.clone())).collect(),
        }
    }

    pub fn has_negative_beta(&self) -> bool {
        self.terms.keys().any(|&(_, b)| b < 0)
    }

    pub fn min_beta_degree(&self) -> Option<i32> {
        self.terms.keys().map(|&(_, b)| b).min()
    }

    /// Every `beta` exponent even (vacuously true for the zero stem).
    pub fn is_even_in_beta(&self) -> bool {
        self.terms.keys().all(|&(_, b)| b % 2 == 0)
    }

    pub fn is_odd_in_beta(&self) -> bool {
        self.terms.keys().all(|&(_, b)| b % 2 != 0)
    }

    pub fn all_coeffs_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// All coefficients lie in `span{1, J}`.
    pub fn all_coeffs_in_slice(&self, unit: &Quaternion<T>) -> bool {
        self.terms.values().all(|c| in_slice(c, unit))
    }

    /// `sum c * alpha^a * beta^b` in the scalar field.
    pub fn eval(&self, alpha: &T, beta: &T) -> Result<Quaternion<T>> {
        let mut acc = Quaternion::zero();
        for (&(a, b), c) in &self.terms {
            if b < 0 && beta.is_zero() {
                return Err(Error::NegativePowerAtZero);
            }
            let w = alpha.powi(a as i32)? * beta.powi(b)?;
            acc += &c.scale(&w);
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, alpha: f64, beta: f64) -> Result<Quaternion<f64>> {
        let mut acc = Quaternion::<f64>::zero();
        for (&(a, b), c) in &self.terms {
            if b < 0 && beta == 0.0 {
                return Err(Error::NegativePowerAtZero);
            }
            let w = alpha.powi(a as i32) * beta.powi(b);
            acc += &c.to_f64().scale(&w);
        }
        Ok(acc)
    }

    pub fn to_f64(&self) -> LaurentStem<f64> {
        LaurentStem::from_terms(self.terms.iter().map(|(e, c)| (*e, c.to_f64())))
    }

    /// Largest coefficient component in absolute value.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|c| c.components().map(|x| x.to_f64().abs()))
            .fold(0.0, f64::max)
    }
}

impl LaurentStem<Rational> {
    pub fn from_int_terms(terms: &[((u32, i32), i64)]) -> Self {
        LaurentStem::from_terms(
            terms
                .iter()
                .map(|&(e, c)| (e, Quaternion::real(Rational::from_i64(c)))),
        )
    }
}

fn in_slice<T: Scalar>(c: &Quaternion<T>, unit: &Quaternion<T>) -> bool {
    // c in span{1, J} iff Im(c) is parallel to J: Im(c) x J = 0
    let (a, b) = (c.im(), unit.im());
    let cross = [
        a.y.clone() * b.z.clone() - a.z.clone() * b.y.clone(),
        a.z.clone() * b.x.clone() - a.x.clone() * b.z.clone(),
        a.x.clone() * b.y.clone() - a.y.clone() * b.x.clone(),
    ];
    let tol = if T::EXACT { 0.0 } else { 1e-12 };
    cross.iter().all(|v| v.is_zero_within(tol))
}

impl<T: Scalar> Add for &LaurentStem<T> {
    type Output = LaurentStem<T>;
    fn add(self, rhs: &LaurentStem<T>) -> LaurentStem<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &LaurentStem<T> {
    type Output = LaurentStem<T>;
    fn sub(self, rhs: &LaurentStem<T>) -> LaurentStem<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl<T: Scalar> Neg for &LaurentStem<T> {
    type Output = LaurentStem<T>;
    fn neg(self) -> LaurentStem<T> {
        self.map_coeffs(|c| -c)
    }
}

/// `(q) * a^m * b^n + ...`, exponents in lexicographic order.
impl<T: Scalar> fmt::Display for LaurentStem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| format!("({c}) * a^{a} * b^{b}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `F = F0 + sqrt(-1) F1` on the `beta > 0` branch.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct StemPair<T: Scalar> {
    pub f0: LaurentStem<T>,
    pub f1: LaurentStem<T>,
}

impl<T: Scalar> StemPair<T> {
    pub fn new(f0: LaurentStem<T>, f1: LaurentStem<T>) -> Self {
        StemPair { f0, f1 }
    }

    pub fn zero() -> Self {
        StemPair::new(LaurentStem::zero(), LaurentStem::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.f1.is_zero()
    }

    /// `F(conj z) = conj F(z)` holds and the function extends to real points:
    /// `F0` even in `beta` without negative powers, `F1` odd with lowest
    /// `beta` degree at least one.
    pub fn real_extendable(&self) -> bool {
        !self.f0.has_negative_beta()
            && self.f0.is_even_in_beta()
            && self.f1.is_odd_in_beta()
            && self.f1.min_beta_degree().is_none_or(|d| d >= 1)
    }

    /// Stem product `(F0 G0 - F1 G1) + sqrt(-1) (F0 G1 + F1 G0)`.
    pub fn product(&self, other: &Self) -> Self {
        StemPair::new(
            &self.f0.mul(&other.f0) - &self.f1.mul(&other.f1),
            &self.f0.mul(&other.f1) + &self.f1.mul(&other.f0),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        StemPair::new(self.f0.scale(s), self.f1.scale(s))
    }

    pub fn right_mul(&self, q: &Quaternion<T>) -> Self {
        StemPair::new(self.f0.right_mul(q), self.f1.right_mul(q))
    }

    pub fn left_mul(&self, q: &Quaternion<T>) -> Self {
        StemPair::new(self.f0.left_mul(q), self.f1.left_mul(q))
    }

    pub fn to_f64(&self) -> StemPair<f64> {
        StemPair::new(self.f0.to_f64(), self.f1.to_f64())
    }
}

impl<T: Scalar> Add for &StemPair<T> {
    type Output = StemPair<T>;
    fn add(self, rhs: &StemPair<T>) -> StemPair<T> {
        StemPair::new(&self.f0 + &rhs.f0, &self.f1 + &rhs.f1)
    }
}

impl<T: Scalar> Sub for &StemPair<T> {
    type Output = StemPair<T>;
    fn sub(self, rhs: &StemPair<T>) -> StemPair<T> {
        StemPair::new(&self.f0 - &rhs.f0, &self.f1 - &rhs.f1)
    }
}

impl<T: Scalar> Neg for &StemPair<T> {
    type Output = StemPair<T>;
    fn neg(self) -> StemPair<T> {
        StemPair::new(-&self.f0, -&self.f1)
    }
}
