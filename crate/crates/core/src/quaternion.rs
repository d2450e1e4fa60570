//! Quaternions over an exact or floating scalar field, and the
//! `x = alpha + I beta` decomposition.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Coefficient field for stems and quaternions.
///
/// Implemented for [`Rational`] (exact) and `f64`. Exactness-sensitive code
/// branches on [`Scalar::EXACT`].
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Signed
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Square root when it lies in the field (always, for floats of
    /// nonnegative values).
    fn sqrt_exact(&self) -> Option<Self>;
    /// Zero test: exact for rationals, `|x| <= tol` for floats.
    fn is_zero_within(&self, tol: f64) -> bool;
    fn render(&self) -> String;

    fn powi(&self, exp: i32) -> Result<Self> {
        if exp < 0 {
            if self.is_zero() {
                return Err(Error::NegativePowerAtZero);
            }
            let pos = self.powi(-exp)?;
            return Ok(Self::one() / pos);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        Ok(acc)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }

    fn is_zero_within(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &Rational) -> Self {
        <Rational as Scalar>::to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn is_zero_within(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

/// `w + x i + y j + z k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn real(w: T) -> Self {
        Quaternion::new(w, T::zero(), T::zero(), T::zero())
    }

    pub fn from_ints(w: i64, x: i64, y: i64, z: i64) -> Self {
        Quaternion::new(T::from_i64(w), T::from_i64(x), T::from_i64(y), T::from_i64(z))
    }

    pub fn zero() -> Self {
        Quaternion::real(T::zero())
    }

    pub fn one() -> Self {
        Quaternion::real(T::one())
    }

    pub fn i() -> Self {
        Quaternion::from_ints(0, 1, 0, 0)
    }

    pub fn j() -> Self {
        Quaternion::from_ints(0, 0, 1, 0)
    }

    pub fn k() -> Self {
        Quaternion::from_ints(0, 0, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        [&self.w, &self.x, &self.y, &self.z]
            .iter()
            .all(|c| c.is_zero_within(tol))
    }

    pub fn is_real(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.w.clone(), -self.x.clone(), -self.y.clone(), -self.z.clone())
    }

    /// `Re(q) = (q + q^c) / 2`.
    pub fn re(&self) -> T {
        self.w.clone()
    }

    /// `Im(q) = (q - q^c) / 2`.
    pub fn im(&self) -> Self {
        Quaternion::new(T::zero(), self.x.clone(), self.y.clone(), self.z.clone())
    }

    pub fn norm_sq(&self) -> T {
        self.w.clone() * self.w.clone()
            + self.x.clone() * self.x.clone()
            + self.y.clone() * self.y.clone()
            + self.z.clone() * self.z.clone()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().to_f64().sqrt()
    }

    pub fn scale(&self, s: &T) -> Self {
        Quaternion::new(
            self.w.clone() * s.clone(),
            self.x.clone() * s.clone(),
            self.y.clone() * s.clone(),
            self.z.clone() * s.clone(),
        )
    }

    /// `q^{-1} = q^c / |q|^2`.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj().scale(&(T::one() / n)))
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Quaternion::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        Quaternion::new(self.w.to_f64(), self.x.to_f64(), self.y.to_f64(), self.z.to_f64())
    }

    pub fn components(&self) -> [&T; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    /// Component-wise maximum absolute difference, in floating point.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = self - other;
        d.components()
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Decomposes `x = alpha + I beta` with `beta >= 0`.
    pub fn decompose(&self) -> SliceCoords<T> {
        let alpha = self.re();
        let im = self.im();
        let beta_sq = im.norm_sq();
        if beta_sq.is_zero() {
            return SliceCoords {
                alpha,
                beta: Beta::Exact(T::zero()),
                unit: None,
            };
        }
        match beta_sq.sqrt_exact() {
            Some(beta) => {
                let unit = im.scale(&(T::one() / beta.clone()));
                SliceCoords {
                    alpha,
                    beta: Beta::Exact(beta),
                    unit: Some(Unit::Exact(unit)),
                }
            }
            None => {
                let beta = beta_sq.to_f64().sqrt();
                let unit = im.to_f64().scale(&(1.0 / beta));
                SliceCoords {
                    alpha,
                    beta: Beta::Tainted(beta),
                    unit: Some(Unit::Tainted(unit)),
                }
            }
        }
    }
}

impl Quaternion<Rational> {
    pub fn from_ratios(parts: [(i64, i64); 4]) -> Self {
        let [w, x, y, z] = parts.map(|(n, d)| Rational::from_ratio(n, d));
        Quaternion::new(w, x, y, z)
    }
}

impl Quaternion<f64> {
    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

/// `beta = |Im(x)|`, exact when `|Im(x)|^2` is a perfect rational square.
#[derive(Clone, Debug, PartialEq)]
pub enum Beta<T> {
    Exact(T),
    Tainted(f64),
}

impl<T: Scalar> Beta<T> {
    pub fn to_f64(&self) -> f64 {
        match self {
            Beta::Exact(b) => b.to_f64(),
            Beta::Tainted(b) => *b,
        }
    }

    pub fn is_tainted(&self) -> bool {
        matches!(self, Beta::Tainted(_))
    }
}

/// Imaginary unit `I = Im(x)/|Im(x)|`.
#[derive(Clone, Debug, PartialEq)]
pub enum Unit<T> {
    Exact(Quaternion<T>),
    Tainted(Quaternion<f64>),
}

impl<T: Scalar> Unit<T> {
    pub fn to_f64(&self) -> Quaternion<f64> {
        match self {
            Unit::Exact(u) => u.to_f64(),
            Unit::Tainted(u) => u.clone(),
        }
    }
}

/// Result of [`Quaternion::decompose`]. `unit` is `None` at real points.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceCoords<T> {
    pub alpha: T,
    pub beta: Beta<T>,
    pub unit: Option<Unit<T>>,
}

impl<T: Scalar> SliceCoords<T> {
    pub fn is_tainted(&self) -> bool {
        self.beta.is_tainted()
    }

    /// `alpha + I beta`, exact when nothing is tainted.
    pub fn reconstruct(&self) -> Option<Quaternion<T>> {
        match (&self.beta, &self.unit) {
            (Beta::Exact(_), None) => Some(Quaternion::real(self.alpha.clone())),
            (Beta::Exact(b), Some(Unit::Exact(u))) => {
                Some(&Quaternion::real(self.alpha.clone()) + &u.scale(b))
            }
            _ => None,
        }
    }

    pub fn reconstruct_f64(&self) -> Quaternion<f64> {
        let a = Quaternion::real(self.alpha.to_f64());
        match &self.unit {
            None => a,
            Some(u) => &a + &u.to_f64().scale(&self.beta.to_f64()),
        }
    }
}

impl<T: Scalar> Add for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, rhs: &Quaternion<T>) -> Quaternion<T> {
        Quaternion::new(
            self.w.clone() + rhs.w.clone(),
            self.x.clone() + rhs.x.clone(),
            self.y.clone() + rhs.y.clone(),
            self.z.clone() + rhs.z.clone(),
        )
    }
}

impl<T: Scalar> Sub for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, rhs: &Quaternion<T>) -> Quaternion<T> {
        Quaternion::new(
            self.w.clone() - rhs.w.clone(),
            self.x.clone() - rhs.x.clone(),
            self.y.clone() - rhs.y.clone(),
            self.z.clone() - rhs.z.clone(),
        )
    }
}

/// Hamilton product.
impl<T: Scalar> Mul for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, b: &Quaternion<T>) -> Quaternion<T> {
        let a = self;
        let m = |p: &T, q: &T| p.clone() * q.clone();
        Quaternion::new(
            m(&a.w, &b.w) - m(&a.x, &b.x) - m(&a.y, &b.y) - m(&a.z, &b.z),
            m(&a.w, &b.x) + m(&a.x, &b.w) + m(&a.y, &b.z) - m(&a.z, &b.y),
            m(&a.w, &b.y) - m(&a.x, &b.z) + m(&a.y, &b.w) + m(&a.z, &b.x),
            m(&a.w, &b.z) + m(&a.x, &b.y) - m(&a.y, &b.x) + m(&a.z, &b.w),
        )
    }
}

impl<T: Scalar> Neg for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Quaternion<T> {
        Quaternion::new(-self.w.clone(), -self.x.clone(), -self.y.clone(), -self.z.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Quaternion<T> {
            type Output = Quaternion<T>;
            fn $m(self, rhs: Quaternion<T>) -> Quaternion<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Quaternion<T> {
        -&self
    }
}

impl<T: Scalar> AddAssign<&Quaternion<T>> for Quaternion<T> {
    fn add_assign(&mut self, rhs: &Quaternion<T>) {
        *self = &*self + rhs;
    }
}

impl<T: Scalar> SubAssign<&Quaternion<T>> for Quaternion<T> {
    fn sub_assign(&mut self, rhs: &Quaternion<T>) {
        *self = &*self - rhs;
    }
}

/// Renders as `a + b*i + c*j + d*k`, omitting zero parts.
impl<T: Scalar> fmt::Display for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, unit) in [(&self.w, ""), (&self.x, "i"), (&self.y, "j"), (&self.z, "k")] {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs().render();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if unit.is_empty() {
                out.push_str(&mag);
            } else if c.abs().is_one() {
                out.push_str(unit);
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(unit);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = Quaternion<Rational>;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn defining_relations() {
        assert_eq!(&Q::i() * &Q::j(), Q::k());
        assert_eq!(&Q::j() * &Q::i(), -Q::k());
        assert_eq!(&Q::i() * &Q::i(), -Q::one());
        let a = &Q::one() + &Q::i();
        let b = &Q::one() + &Q::j();
        assert_eq!(&a * &b, Q::from_ints(1, 1, 1, 1));
    }

    #[test]
    fn inverse_matches_conjugate_over_norm() {
        let q = Q::from_ints(2, 3, -1, 0);
        // conj(q)/|q|^2 = (2 - 3i + j)/14
        let expected = Q::from_ratios([(2, 14), (-3, 14), (1, 14), (0, 1)]);
        assert_eq!(q.inverse().unwrap(), expected);
        assert_eq!(&q * &expected, Q::one());
        assert_eq!(Q::i().inverse().unwrap(), -Q::i());
        assert!(matches!(Q::zero().inverse(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn conj_and_norm() {
        assert_eq!(Q::i().conj(), -Q::i());
        assert_eq!(Q::from_ints(1, 1, 1, 1).norm_sq(), r(4, 1));
    }

    #[test]
    fn decompose_exact_and_real() {
        let c = Q::i().decompose();
        assert_eq!(c.alpha, r(0, 1));
        assert_eq!(c.beta, Beta::Exact(r(1, 1)));
        assert_eq!(c.unit, Some(Unit::Exact(Q::i())));

        let c = Q::from_ints(3, 0, 0, 0).decompose();
        assert_eq!(c.beta, Beta::Exact(r(0, 1)));
        assert!(c.unit.is_none());
        assert_eq!(c.reconstruct(), Some(Q::from_ints(3, 0, 0, 0)));
    }

    #[test]
    fn decompose_irrational_beta_is_tainted() {
        // 1/2 + (sqrt 3/2) i cannot be written exactly; use Im = i + j instead
        let q = Q::from_ints(1, 1, 1, 0);
        let c = q.decompose();
        assert!(c.is_tainted());
        assert!((c.beta.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        let u = c.unit.unwrap().to_f64();
        let u2 = &u * &u;
        assert!((&u2 + &Quaternion::one()).is_zero_within(1e-12));

        let x = Quaternion::<f64>::new(0.5, 3f64.sqrt() / 2.0, 0.0, 0.0);
        let c = x.decompose();
        assert_eq!(c.alpha, 0.5);
        assert!((c.beta.to_f64() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(c.unit.unwrap().to_f64().max_abs_diff(&Quaternion::i()) < 1e-15);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(Q::from_ints(-1, 1, -1, 1).to_string(), "-1 + i - j + k");
        assert_eq!(Q::from_ratios([(0, 1), (1, 2), (0, 1), (-3, 1)]).to_string(), "1/2*i - 3*k");
        assert_eq!(Q::zero().to_string(), "0");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| r(n, d))
    }

    fn quat() -> impl Strategy<Value = Q> {
        (small_rational(), small_rational(), small_rational(), small_rational())
            .prop_map(|(w, x, y, z)| Q::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in quat(), b in quat()) {
            prop_assert_eq!((&a * &b).norm_sq(), a.norm_sq() * b.norm_sq());
        }

        #[test]
        fn conj_is_anti_automorphism(a in quat(), b in quat()) {
            prop_assert_eq!((&a * &b).conj(), &b.conj() * &a.conj());
        }

        #[test]
        fn product_is_associative(a in quat(), b in quat(), c in quat()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn decompose_round_trips(a in quat()) {
            let c = a.decompose();
            match c.reconstruct() {
                Some(back) => prop_assert_eq!(back, a.clone()),
                None => prop_assert!(c.reconstruct_f64().max_abs_diff(&a.to_f64()) < 1e-12),
            }
            if let Some(u) = &c.unit {
                let sq = match u {
                    Unit::Exact(u) => (u * u).to_f64(),
                    Unit::Tainted(u) => u * u,
                };
                prop_assert!((&sq + &Quaternion::one()).is_zero_within(1e-12));
                if let Unit::Exact(u) = u {
                    prop_assert_eq!(u * u, -Q::one());
                }
            }
        }
    }
}
