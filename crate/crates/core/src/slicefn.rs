//! Slice functions given by a stem pair, and the operators acting on them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::quaternion::{Beta, Quaternion, Scalar, Unit};
use crate::stem::{LaurentStem, StemPair, Var};

/// Tolerance used by predicates on floating-point stems.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `f(alpha + I beta) = F0(alpha, beta) + I F1(alpha, beta)` for `beta > 0`.
#[derive(Clone, Debug)]
pub struct SliceFunction<T: Scalar> {
    pub stem: StemPair<T>,
    pub label: String,
}

/// Equality ignores labels.
impl<T: Scalar> PartialEq for SliceFunction<T> {
    fn eq(&self, other: &Self) -> bool {
        self.stem == other.stem
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut acc: i128 = 1;
    for t in 0..k as i128 {
        acc = acc * (n as i128 - t) / (t + 1);
    }
    acc as i64
}

impl<T: Scalar> SliceFunction<T> {
    pub fn new(stem: StemPair<T>, label: impl Into<String>) -> Self {
        SliceFunction { stem, label: label.into() }
    }

    pub fn from_stems(f0: LaurentStem<T>, f1: LaurentStem<T>) -> Self {
        SliceFunction::new(StemPair::new(f0, f1), "")
    }

    pub fn f0(&self) -> &LaurentStem<T> {
        &self.stem.f0
    }

    pub fn f1(&self) -> &LaurentStem<T> {
        &self.stem.f1
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn zero() -> Self {
        SliceFunction::new(StemPair::zero(), "0")
    }

    pub fn constant(c: Quaternion<T>) -> Self {
        let label = c.to_string();
        SliceFunction::new(StemPair::new(LaurentStem::constant(c), LaurentStem::zero()), label)
    }

    /// The identity `x`, stem `alpha + sqrt(-1) beta`.
    pub fn variable() -> Self {
        SliceFunction::new(
            StemPair::new(
                LaurentStem::monomial(1, 0, Quaternion::one()),
                LaurentStem::monomial(0, 1, Quaternion::one()),
            ),
            "x",
        )
    }

    /// `x^n` by the binomial expansion of `(alpha + sqrt(-1) beta)^n`.
    pub fn monomial_power(n: u32) -> Self {
        let mut f0 = LaurentStem::zero();
        let mut f1 = LaurentStem::zero();
        for k in 0..=n {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            let c = Quaternion::real(T::from_i64(sign * binomial(n, k)));
            if k % 2 == 0 {
                f0.add_term((n - k, k as i32), c);
            } else {
                f1.add_term((n - k, k as i32), c);
            }
        }
        SliceFunction::new(StemPair::new(f0, f1), format!("x^{n}"))
    }

    /// `sum_n x^n a_n` with right coefficients.
    pub fn from_polynomial(coeffs: &[Quaternion<T>]) -> Self {
        let mut stem = StemPair::zero();
        for (n, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            stem = &stem + &SliceFunction::monomial_power(n as u32).stem.right_mul(a);
        }
        let label = coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(n, a)| format!("x^{n}*({a})"))
            .collect::<Vec<_>>()
            .join(" + ");
        SliceFunction::new(stem, label)
    }

    /// `Delta_{q0}(x) = x^2 - 2 Re(q0) x + |q0|^2`.
    pub fn char_poly(q0: &Quaternion<T>) -> Result<Self> {
        if q0.is_real() {
            return Err(Error::RealBasePoint);
        }
        let two = T::from_i64(2);
        let f = SliceFunction::from_polynomial(&[
            Quaternion::real(q0.norm_sq()),
            Quaternion::real(-(two * q0.re())),
            Quaternion::one(),
        ]);
        Ok(f.with_label(format!("Delta({q0})")))
    }

    /// `x - q`.
    pub fn linear(q: &Quaternion<T>) -> Self {
        SliceFunction::from_polynomial(&[-q, Quaternion::one()]).with_label(format!("(x - ({q}))"))
    }

    /// `l^{+,J} = (1 - J(x) J)/2` and `l^{-,J} = (1 + J(x) J)/2`.
    pub fn idempotent(unit: &Quaternion<T>, sign: Sign) -> Result<Self> {
        let sq = unit * unit;
        let tol = if T::EXACT { 0.0 } else { FLOAT_TOL };
        if !unit.re().is_zero_within(tol) || !(&sq + &Quaternion::one()).is_zero_within(tol) {
            return Err(Error::NotAUnit);
        }
        let half = T::from_ratio(1, 2);
        let f1 = match sign {
            Sign::Plus => -unit.scale(&half),
            Sign::Minus => unit.scale(&half),
        };
        let name = match sign {
            Sign::Plus => "ellp",
            Sign::Minus => "ellm",
        };
        Ok(SliceFunction::new(
            StemPair::new(LaurentStem::real_constant(half), LaurentStem::constant(f1)),
            format!("{name}({unit})"),
        ))
    }

    /// `J(x) = I` for `x = alpha + I beta`, stem `(0, 1)`.
    pub fn j_function() -> Self {
        SliceFunction::new(
            StemPair::new(LaurentStem::zero(), LaurentStem::constant(Quaternion::one())),
            "Jfun()",
        )
    }

    /// `Im(x) = I beta`, stem `(0, beta)`.
    pub fn im_function() -> Self {
        SliceFunction::new(
            StemPair::new(LaurentStem::zero(), LaurentStem::monomial(0, 1, Quaternion::one())),
            "Im(x)",
        )
    }

    pub fn is_zero(&self) -> bool {
        self.stem.is_zero()
    }

    pub fn real_extendable(&self) -> bool {
        self.stem.real_extendable()
    }

    /// `F0 + I F1` at `x`. Exact when `|Im x|` is rational; otherwise exact
    /// through `beta^2 = |Im x|^2` when the stem parities allow it, and
    /// [`Error::Inexact`] if not.
    pub fn evaluate(&self, x: &Quaternion<T>) -> Result<Quaternion<T>> {
        let c = x.decompose();
        match (&c.beta, &c.unit) {
            (Beta::Exact(_), None) => {
                if !self.real_extendable() {
                    return Err(Error::RealPointNotExtendable);
                }
                self.stem.f0.eval(&c.alpha, &T::zero())
            }
            (Beta::Exact(b), Some(Unit::Exact(u))) => {
                let v0 = self.stem.f0.eval(&c.alpha, b)?;
                let v1 = self.stem.f1.eval(&c.alpha, b)?;
                Ok(&v0 + &(u * &v1))
            }
            _ => self.evaluate_by_parity(&c.alpha, x),
        }
    }

    fn evaluate_by_parity(&self, alpha: &T, x: &Quaternion<T>) -> Result<Quaternion<T>> {
        let im = x.im();
        let beta_sq = im.norm_sq();
        let mut acc = Quaternion::zero();
        for (&(a, b), c) in self.stem.f0.terms() {
            if b % 2 != 0 {
                return Err(Error::Inexact);
            }
            let w = alpha.powi(a as i32)? * beta_sq.powi(b / 2)?;
            acc += &c.scale(&w);
        }
        for (&(a, b), c) in self.stem.f1.terms() {
            if b % 2 == 0 {
                return Err(Error::Inexact);
            }
            // I beta^b = Im(x) beta^(b-1)
            let w = alpha.powi(a as i32)? * beta_sq.powi((b - 1) / 2)?;
            acc += &(&im * c).scale(&w);
        }
        Ok(acc)
    }

    /// Double precision evaluation.
    pub fn evaluate_f64(&self, x: &Quaternion<f64>) -> Result<Quaternion<f64>> {
        let c = x.decompose();
        let beta = c.beta.to_f64();
        match c.unit {
            None => {
                if !self.real_extendable() {
                    return Err(Error::RealPointNotExtendable);
                }
                self.stem.f0.eval_f64(c.alpha, 0.0)
            }
            Some(u) => {
                let v0 = self.stem.f0.eval_f64(c.alpha, beta)?;
                let v1 = self.stem.f1.eval_f64(c.alpha, beta)?;
                Ok(&v0 + &(&u.to_f64() * &v1))
            }
        }
    }

    /// `F0(alpha, beta) + unit F1(alpha, beta)` in floating point.
    pub fn evaluate_at(&self, alpha: f64, beta: f64, unit: &Quaternion<f64>) -> Result<Quaternion<f64>> {
        let v0 = self.stem.f0.eval_f64(alpha, beta)?;
        let v1 = self.stem.f1.eval_f64(alpha, beta)?;
        Ok(&v0 + &(unit * &v1))
    }

    pub fn slice_product(&self, other: &Self) -> Self {
        SliceFunction::new(
            self.stem.product(&other.stem),
            format!("({})*({})", self.label, other.label),
        )
    }

    /// Slice power `f * f * ... * f`; `f^0 = 1`.
    pub fn power(&self, n: u32) -> Self {
        let mut acc = SliceFunction::constant(Quaternion::one());
        for _ in 0..n {
            acc = acc.slice_product(self);
        }
        acc.with_label(format!("({})^{n}", self.label))
    }

    /// `f(x) q`.
    pub fn right_mul(&self, q: &Quaternion<T>) -> Self {
        SliceFunction::new(self.stem.right_mul(q), format!("({})*({q})", self.label))
    }

    pub fn scale(&self, s: &T) -> Self {
        SliceFunction::new(self.stem.scale(s), self.label.clone())
    }

    /// `v_s f`, stem `(F0, 0)`.
    pub fn spherical_value(&self) -> Self {
        SliceFunction::new(
            StemPair::new(self.stem.f0.clone(), LaurentStem::zero()),
            format!("vs({})", self.label),
        )
    }

    /// `d_s f`, stem `(F1 / beta, 0)`.
    pub fn spherical_derivative(&self) -> Self {
        SliceFunction::new(
            StemPair::new(self.stem.f1.div_beta(), LaurentStem::zero()),
            format!("ds({})", self.label),
        )
    }

    /// `d_c f`, the stem's `d/dz`.
    pub fn slice_derivative(&self) -> Self {
        let (f0, f1) = (&self.stem.f0, &self.stem.f1);
        let half = T::from_ratio(1, 2);
        let g0 = &f0.partial_derivative(Var::Alpha) + &f1.partial_derivative(Var::Beta);
        let g1 = &f1.partial_derivative(Var::Alpha) - &f0.partial_derivative(Var::Beta);
        SliceFunction::new(
            StemPair::new(g0.scale(&half), g1.scale(&half)),
            format!("dc({})", self.label),
        )
    }

    /// The stem's `d/dz-bar`.
    pub fn conj_slice_derivative(&self) -> Self {
        let (f0, f1) = (&self.stem.f0, &self.stem.f1);
        let half = T::from_ratio(1, 2);
        let g0 = &f0.partial_derivative(Var::Alpha) - &f1.partial_derivative(Var::Beta);
        let g1 = &f1.partial_derivative(Var::Alpha) + &f0.partial_derivative(Var::Beta);
        SliceFunction::new(
            StemPair::new(g0.scale(&half), g1.scale(&half)),
            format!("dcbar({})", self.label),
        )
    }

    /// `(d_c d_s)^k f`.
    pub fn dcds_pow(&self, k: usize) -> Self {
        let mut g = self.clone();
        for _ in 0..k {
            g = g.spherical_derivative().slice_derivative();
        }
        g
    }

    /// `(d_s d_c)^k f`.
    pub fn dsdc_pow(&self, k: usize) -> Self {
        let mut g = self.clone();
        for _ in 0..k {
            g = g.slice_derivative().spherical_derivative();
        }
        g
    }

    /// `d_bar_c f == 0`: exact for rationals, within [`FLOAT_TOL`] for floats.
    pub fn is_regular(&self) -> bool {
        let d = self.conj_slice_derivative();
        if T::EXACT {
            d.is_zero()
        } else {
            d.stem.f0.is_zero_within(FLOAT_TOL) && d.stem.f1.is_zero_within(FLOAT_TOL)
        }
    }

    pub fn is_slice_preserving(&self) -> bool {
        self.stem.f0.all_coeffs_real() && self.stem.f1.all_coeffs_real()
    }

    pub fn is_one_slice_preserving(&self, unit: &Quaternion<T>) -> bool {
        self.stem.f0.all_coeffs_in_slice(unit) && self.stem.f1.all_coeffs_in_slice(unit)
    }

    pub fn to_f64(&self) -> SliceFunction<f64> {
        SliceFunction::new(self.stem.to_f64(), self.label.clone())
    }
}

impl<T: Scalar> fmt::Display for SliceFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F0 = {}; F1 = {}", self.stem.f0, self.stem.f1)
    }
}

impl<T: Scalar> Add for &SliceFunction<T> {
    type Output = SliceFunction<T>;
    fn add(self, rhs: &SliceFunction<T>) -> SliceFunction<T> {
        SliceFunction::new(&self.stem + &rhs.stem, format!("{} + {}", self.label, rhs.label))
    }
}

impl<T: Scalar> Sub for &SliceFunction<T> {
    type Output = SliceFunction<T>;
    fn sub(self, rhs: &SliceFunction<T>) -> SliceFunction<T> {
        SliceFunction::new(&self.stem - &rhs.stem, format!("{} - ({})", self.label, rhs.label))
    }
}

impl<T: Scalar> Neg for &SliceFunction<T> {
    type Output = SliceFunction<T>;
    fn neg(self) -> SliceFunction<T> {
        SliceFunction::new(-&self.stem, format!("-({})", self.label))
    }
}

/// Slice product, not the pointwise product.
impl<T: Scalar> Mul for &SliceFunction<T> {
    type Output = SliceFunction<T>;
    fn mul(self, rhs: &SliceFunction<T>) -> SliceFunction<T> {
        self.slice_product(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Rational;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = Quaternion<Rational>;
    type F = SliceFunction<Rational>;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn example_p() -> F {
        F::from_polynomial(&[
            Q::one(),
            Q::from_ints(0, 1, -1, 1),
            Q::from_ints(0, -1, -1, -1),
            Q::one(),
        ])
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x5eed)
    }

    fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> F {
        use rand::Rng;
        let d = rng.gen_range(0..=max_deg);
        F::from_polynomial(&random::polynomial(rng, d, 5, 3))
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(F::monomial_power(3).evaluate(&Q::i()).unwrap(), -Q::i());
        let ell = F::idempotent(&Q::j(), Sign::Plus).unwrap();
        assert_eq!(ell.evaluate(&Q::i()).unwrap(), Q::from_ratios([(1, 2), (0, 1), (0, 1), (-1, 2)]));
        assert!(example_p().evaluate(&Q::i()).unwrap().is_zero());
    }

    #[test]
    fn real_points() {
        let x2 = F::monomial_power(2);
        assert_eq!(x2.evaluate(&Q::from_ints(3, 0, 0, 0)).unwrap(), Q::from_ints(9, 0, 0, 0));
        let ell = F::idempotent(&Q::j(), Sign::Plus).unwrap();
        assert_eq!(ell.evaluate(&Q::from_ints(3, 0, 0, 0)), Err(Error::RealPointNotExtendable));
        assert!(!ell.real_extendable());
        assert!(!F::j_function().real_extendable());
    }

    #[test]
    fn polynomial_matches_direct_powers() {
        let coeffs = [Q::one(), Q::from_ints(0, 1, -1, 1), Q::from_ints(0, -1, -1, -1), Q::one()];
        let f = F::from_polynomial(&coeffs);
        let mut rng = rng();
        for _ in 0..20 {
            let x = random::quaternion(&mut rng, 6, 4);
            let direct = coeffs
                .iter()
                .enumerate()
                .fold(Q::zero(), |acc, (n, a)| &acc + &(&x.powi(n as u32) * a));
            assert_eq!(f.evaluate(&x).unwrap(), direct, "x = {x}");
        }
        assert!(f.real_extendable());
    }

    #[test]
    fn x_squared_stem() {
        let x2 = F::monomial_power(2);
        assert_eq!(x2.stem.f0, LaurentStem::from_int_terms(&[((2, 0), 1), ((0, 2), -1)]));
        assert_eq!(x2.stem.f1, LaurentStem::from_int_terms(&[((1, 1), 2)]));
        assert_eq!(x2.spherical_derivative().stem.f0, LaurentStem::from_int_terms(&[((1, 0), 2)]));
    }

    #[test]
    fn char_poly_examples() {
        let d = F::char_poly(&Q::i()).unwrap();
        assert_eq!(d, F::from_polynomial(&[Q::one(), Q::zero(), Q::one()]));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = Quaternion::<f64>::new(0.0, s, s, 0.0);
        assert!(d.evaluate_f64(&x).unwrap().is_zero_within(1e-12));
        assert_eq!(F::char_poly(&Q::from_ints(2, 0, 0, 0)), Err(Error::RealBasePoint));

        let q0 = Q::from_ratios([(1, 2), (1, 3), (-2, 1), (0, 1)]);
        let d = F::char_poly(&q0).unwrap();
        let manual = F::from_polynomial(&[Q::real(q0.norm_sq()), Q::real(-q0.re() * r(2, 1)), Q::one()]);
        assert_eq!(d, manual);
        assert!(d.is_slice_preserving());
        assert_eq!(d.dcds_pow(1), F::constant(Q::one()));
        assert_eq!(d.dsdc_pow(1), F::constant(Q::from_ints(2, 0, 0, 0)));
        // d_c Delta = 2(x - Re q0)
        let expected = F::linear(&Q::real(q0.re())).scale(&r(2, 1));
        assert_eq!(d.slice_derivative(), expected);
        // vanishes on the sphere of q0, evaluated exactly through the parity path
        assert!(d.evaluate(&q0).unwrap().is_zero());
        assert!(d.evaluate(&q0.conj()).unwrap().is_zero());
    }

    #[test]
    fn idempotent_examples() {
        let p = F::idempotent(&Q::j(), Sign::Plus).unwrap();
        let m = F::idempotent(&Q::j(), Sign::Minus).unwrap();
        assert_eq!(p.slice_product(&p), p);
        assert_eq!(m.slice_product(&m), m);
        assert!(p.slice_product(&m).is_zero());
        assert!(m.slice_product(&p).is_zero());
        assert_eq!(F::idempotent(&Q::from_ints(0, 1, 1, 0), Sign::Plus), Err(Error::NotAUnit));

        let ds = p.spherical_derivative();
        assert_eq!(ds.stem.f0, LaurentStem::monomial(0, -1, Q::from_ratios([(0, 1), (0, 1), (-1, 2), (0, 1)])));
        let v = ds.evaluate(&Q::from_ints(1, 2, 0, 0)).unwrap();
        assert_eq!(v, Q::from_ratios([(0, 1), (0, 1), (-1, 4), (0, 1)]));
        assert!(p.is_one_slice_preserving(&Q::j()));
        assert!(!p.is_one_slice_preserving(&Q::i()));
        assert!(p.is_regular());

        // (1 - J(x) J)/2 built from the J function
        let jfun = F::j_function();
        let built = (&F::constant(Q::one()) - &jfun.right_mul(&Q::j())).scale(&r(1, 2));
        assert_eq!(built, p);
    }

    #[test]
    fn float_unit_idempotent() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let unit = Quaternion::<f64>::new(0.0, s, s, 0.0);
        let p = SliceFunction::idempotent(&unit, Sign::Plus).unwrap();
        let sq = p.slice_product(&p);
        assert!((&sq.stem - &p.stem).f1.is_zero_within(1e-15));
        assert!(p.is_regular());
    }

    #[test]
    fn slice_product_examples() {
        let a = F::linear(&Q::i()).slice_product(&F::linear(&-Q::i()));
        assert_eq!(a, F::char_poly(&Q::i()).unwrap());
        let p = F::linear(&Q::i())
            .slice_product(&F::linear(&Q::j()))
            .slice_product(&F::linear(&Q::k()));
        assert_eq!(p, example_p());
        assert!(F::from_polynomial(&[Q::zero(), Q::k(), Q::zero(), Q::one()]).is_regular());
    }

    #[test]
    fn slice_preserving_product_is_pointwise() {
        let mut rng = rng();
        let d = F::char_poly(&Q::from_ints(1, 0, 2, 0)).unwrap();
        let g = random_poly(&mut rng, 4);
        let fg = d.slice_product(&g);
        let gf = g.slice_product(&d);
        assert_eq!(fg, gf);
        for _ in 0..50 {
            let x = random::quaternion(&mut rng, 5, 3);
            let lhs = fg.evaluate(&x).unwrap();
            let rhs = &d.evaluate(&x).unwrap() * &g.evaluate(&x).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn operator_examples() {
        let q0 = Q::from_ratios([(1, 2), (0, 1), (3, 1), (-1, 4)]);
        let l = F::linear(&q0);
        let v = l.spherical_value();
        // alpha - q0
        assert_eq!(v.stem.f0, LaurentStem::from_terms([((1, 0), Q::one()), ((0, 0), -q0.clone())]));
        assert!(v.stem.f1.is_zero());
        assert_eq!(l.spherical_derivative(), F::constant(Q::one()));
        assert_eq!(l.slice_derivative(), F::constant(Q::one()));
        for n in 0..=8 {
            assert!(F::monomial_power(n).conj_slice_derivative().is_zero());
        }
    }

    #[test]
    fn dc_matches_formal_derivative() {
        let mut rng = rng();
        for _ in 0..20 {
            use rand::Rng;
            let d = rng.gen_range(0..=7);
            let coeffs = random::polynomial(&mut rng, d, 5, 3);
            let formal: Vec<Q> = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, a)| a.scale(&r(n as i64, 1)))
                .collect();
            assert_eq!(F::from_polynomial(&coeffs).slice_derivative(), F::from_polynomial(&formal));
        }
    }

    #[test]
    fn basic_identities_and_regularity() {
        let mut rng = rng();
        for _ in 0..30 {
            let f = random_poly(&mut rng, 6);
            let g = random_poly(&mut rng, 5);
            let ell = F::idempotent(&random::rational_unit(&mut rng, 3, 3), Sign::Plus).unwrap();
            for h in [&f, &ell.slice_product(&f)] {
                assert!(h.spherical_derivative().spherical_derivative().is_zero());
                assert!(h.spherical_value().spherical_derivative().is_zero());
                assert_eq!(h.spherical_derivative().spherical_value(), h.spherical_derivative());
                assert_eq!(h.spherical_value().spherical_value(), h.spherical_value());
                assert_eq!(
                    h.spherical_value().slice_derivative(),
                    h.slice_derivative().scale(&r(1, 2))
                );
            }
            assert!(f.slice_product(&g).is_regular());
            assert!(f.slice_product(&ell).is_regular());
        }
    }

    #[test]
    fn leibniz_pair() {
        let mut rng = rng();
        for _ in 0..20 {
            let f = random_poly(&mut rng, 5);
            let g = random_poly(&mut rng, 5);
            let fg = f.slice_product(&g);
            let ds = &f.spherical_derivative().slice_product(&g.spherical_value())
                + &f.spherical_value().slice_product(&g.spherical_derivative());
            assert_eq!(fg.spherical_derivative(), ds);
            let dc = &f.slice_derivative().slice_product(&g) + &f.slice_product(&g.slice_derivative());
            assert_eq!(fg.slice_derivative(), dc);
        }
    }

    #[test]
    fn powers_lose_degree() {
        for n in 0..=5usize {
            let x2n = F::monomial_power(2 * n as u32);
            let x2n1 = F::monomial_power(2 * n as u32 + 1);
            assert!(x2n.dcds_pow(n).spherical_derivative().is_zero());
            assert!(x2n1.dcds_pow(n + 1).is_zero());
            assert!(x2n1.dsdc_pow(n + 1).is_zero());
            if n > 0 {
                assert!(x2n.dsdc_pow(n).slice_derivative().is_zero());
            }
        }
    }

    #[test]
    fn conjugate_point_law() {
        let mut rng = rng();
        let f = random_poly(&mut rng, 6);
        let ell = F::idempotent(&Q::j(), Sign::Minus).unwrap().slice_product(&f);
        for _ in 0..100 {
            let x = random::exact_nonreal(&mut rng, 6, 4);
            let c = x.decompose();
            let (Beta::Exact(b), Some(Unit::Exact(u))) = (&c.beta, &c.unit) else {
                panic!("rational point expected")
            };
            for h in [&f, &ell] {
                let v0 = h.stem.f0.eval(&c.alpha, b).unwrap();
                let v1 = h.stem.f1.eval(&c.alpha, b).unwrap();
                assert_eq!(h.evaluate(&x.conj()).unwrap(), &v0 - &(u * &v1));
            }
        }
    }

    #[test]
    fn parity_evaluation_is_exact_or_refuses() {
        // |Im x| = sqrt 2
        let x = Q::from_ints(1, 1, 1, 0);
        let f = example_p();
        let exact = f.evaluate(&x).unwrap();
        let direct = &(&(&x.powi(3) - &(&x.powi(2) * &Q::from_ints(0, 1, 1, 1))) + &(&x * &Q::from_ints(0, 1, -1, 1))) + &Q::one();
        assert_eq!(exact, direct);
        let ell = F::idempotent(&Q::j(), Sign::Plus).unwrap();
        assert_eq!(ell.evaluate(&x), Err(Error::Inexact));
        let fl = ell.evaluate_f64(&x.to_f64()).unwrap();
        let root = 2f64.sqrt();
        let unit = Quaternion::<f64>::new(0.0, 1.0 / root, 1.0 / root, 0.0);
        let expected = &Quaternion::real(0.5) - &(&unit * &Quaternion::j()).scale(&0.5);
        assert!(fl.max_abs_diff(&expected) < 1e-15);
    }
}
