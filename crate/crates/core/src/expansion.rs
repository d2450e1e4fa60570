//! Spherical expansions `f(x) = sum_n Delta^n(x) [s_2n + (x - q0) s_2n+1]`
//! around a non-real base point.

use crate::error::{Error, Result};
use crate::quaternion::{Quaternion, Rational, Scalar};
use crate::slicefn::SliceFunction;

/// Absolute cutoff for zero tests on floating-point coefficients.
pub const FLOAT_ZERO_TOL: f64 = 1e-10;

/// Base point and coefficients `s_0..=s_N`, multiplying the basis on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalExpansion<T: Scalar> {
    pub q0: Quaternion<T>,
    pub coeffs: Vec<Quaternion<T>>,
}

impl<T: Scalar> SphericalExpansion<T> {
    pub fn new(q0: Quaternion<T>, coeffs: Vec<Quaternion<T>>) -> Result<Self> {
        if q0.is_real() {
            return Err(Error::RealBasePoint);
        }
        Ok(SphericalExpansion { q0, coeffs })
    }

    /// Index of the last stored coefficient.
    pub fn truncation(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, n: usize) -> Quaternion<T> {
        self.coeffs.get(n).cloned().unwrap_or_else(Quaternion::zero)
    }

    pub fn to_f64(&self) -> SphericalExpansion<f64> {
        SphericalExpansion {
            q0: self.q0.to_f64(),
            coeffs: self.coeffs.iter().map(Quaternion::to_f64).collect(),
        }
    }

    /// Largest component deviation over the first `n` coefficients.
    pub fn max_coeff_diff(&self, other: &SphericalExpansion<f64>, n: usize) -> f64 {
        (0..n)
            .map(|i| self.coeff(i).to_f64().max_abs_diff(&other.coeff(i)))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn factorial<T: Scalar>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * T::from_i64(i as i64))
}

/// `(2k - 1)!!`, with `(-1)!! = 1`.
pub fn double_factorial_odd(k: usize) -> Rational {
    (1..=k).fold(Rational::from_i64(1), |acc, i| acc * Rational::from_i64(2 * i as i64 - 1))
}

/// `Delta^(n/2)` for even `n`, `Delta^(n/2) * (x - q0)` for odd `n`.
pub fn delta_basis_term<T: Scalar>(q0: &Quaternion<T>, n: usize) -> Result<SliceFunction<T>> {
    let delta = SliceFunction::char_poly(q0)?;
    let mut f = delta.power((n / 2) as u32);
    if n % 2 == 1 {
        f = f.slice_product(&SliceFunction::linear(q0));
    }
    Ok(f.with_label(format!("B{n}")))
}

/// Values `B_0(x)..=B_N(x)` of the basis at `x`.
///
/// `Delta` is slice preserving, so `B_2m(x) = Delta(x)^m` and
/// `B_2m+1(x) = Delta(x)^m (x - q0)` pointwise.
pub fn basis_values<T: Scalar>(q0: &Quaternion<T>, n: usize, x: &Quaternion<T>) -> Vec<Quaternion<T>> {
    let two = T::from_i64(2);
    let delta = &(&(x * x) - &x.scale(&(two * q0.re()))) + &Quaternion::real(q0.norm_sq());
    let lin = x - q0;
    let mut out = Vec::with_capacity(n + 1);
    let mut pow = Quaternion::one();
    for i in 0..=n {
        if i % 2 == 0 {
            out.push(pow.clone());
        } else {
            out.push(&pow * &lin);
            pow = &pow * &delta;
        }
    }
    out
}

fn check_inputs<T: Scalar>(f: &SliceFunction<T>, q0: &Quaternion<T>) -> Result<()> {
    if q0.is_real() {
        return Err(Error::RealBasePoint);
    }
    if !f.is_regular() {
        return Err(Error::NotRegular);
    }
    Ok(())
}

/// The coefficient functions `(d_c d_s)^k f / k!` and `d_s (d_c d_s)^k f / k!`
/// for `2k, 2k + 1 <= n`, before evaluation.
pub fn coefficient_functions<T: Scalar>(f: &SliceFunction<T>, n: usize) -> Vec<SliceFunction<T>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut g = f.clone();
    let mut k = 0usize;
    while out.len() <= n {
        let inv = T::one() / factorial::<T>(k);
        let ds = g.spherical_derivative();
        out.push(g.scale(&inv).with_label(format!("s{}", 2 * k)));
        if out.len() <= n {
            out.push(ds.scale(&inv).with_label(format!("s{}", 2 * k + 1)));
        }
        g = ds.slice_derivative();
        k += 1;
    }
    out
}

/// Coefficients `s_0..=s_N` of `f` at `q0` by iterated stem calculus.
pub fn spherical_coefficients<T: Scalar>(
    f: &SliceFunction<T>,
    q0: &Quaternion<T>,
    n: usize,
) -> Result<SphericalExpansion<T>> {
    check_inputs(f, q0)?;
    let coeffs = coefficient_functions(f, n)
        .iter()
        .map(|s| s.evaluate(q0))
        .collect::<Result<Vec<_>>>()?;
    SphericalExpansion::new(q0.clone(), coeffs)
}

/// Exact stem calculus, floating-point evaluation at `q0`.
pub fn spherical_coefficients_f64<T: Scalar>(
    f: &SliceFunction<T>,
    q0: &Quaternion<f64>,
    n: usize,
) -> Result<SphericalExpansion<f64>> {
    if q0.is_real() {
        return Err(Error::RealBasePoint);
    }
    if !f.is_regular() {
        return Err(Error::NotRegular);
    }
    let coeffs = coefficient_functions(f, n)
        .iter()
        .map(|s| s.evaluate_f64(q0))
        .collect::<Result<Vec<_>>>()?;
    SphericalExpansion::new(q0.clone(), coeffs)
}

/// Partial sum `sum_{n <= N} B_n(x) s_n`.
pub fn evaluate_expansion<T: Scalar>(e: &SphericalExpansion<T>, x: &Quaternion<T>) -> Quaternion<T> {
    basis_values(&e.q0, e.truncation(), x)
        .iter()
        .zip(&e.coeffs)
        .fold(Quaternion::zero(), |acc, (b, s)| &acc + &(b * s))
}

/// Coefficients of `d_c f` from those of `f`:
/// `s'_2k = (2k+1) s_2k+1 + 2(k+1) Im(q0) s_2k+2` and
/// `s'_2k+1 = (2k+2) s_2k+2 - 2(k+1) Im(q0) s_2k+3`.
///
/// `s'_n` needs `s_n+2`, so the result is truncated at `N - 2`.
pub fn derivative_coefficients<T: Scalar>(e: &SphericalExpansion<T>) -> Result<SphericalExpansion<T>> {
    if e.q0.is_real() {
        return Err(Error::RealBasePoint);
    }
    let n = e.truncation();
    if e.coeffs.len() < 3 {
        return Err(Error::TruncationTooShort(n));
    }
    let im = e.q0.im();
    let out = (0..=n - 2)
        .map(|i| {
            let k = i / 2;
            let w = T::from_i64(2 * (k as i64 + 1));
            let lead = T::from_i64(i as i64 + 1);
            let head = e.coeffs[i + 1].scale(&lead);
            let tail = (&im * &e.coeffs[i + 2]).scale(&w);
            if i % 2 == 0 {
                &head + &tail
            } else {
                &head - &tail
            }
        })
        .collect();
    SphericalExpansion::new(e.q0.clone(), out)
}

/// Coefficients of a solution of `d_c f = f` from its first two.
pub fn eigenfunction_recurrence<T: Scalar>(
    s0: Quaternion<T>,
    s1: Quaternion<T>,
    q0: &Quaternion<T>,
    n: usize,
) -> Result<SphericalExpansion<T>> {
    if q0.is_real() {
        return Err(Error::RealBasePoint);
    }
    let im = q0.im();
    let mut c = vec![s0, s1];
    let mut k = 0usize;
    while c.len() <= n {
        let w = im.scale(&T::from_i64(2 * (k as i64 + 1))).inverse()?;
        let odd = T::from_i64(2 * k as i64 + 1);
        let even = T::from_i64(2 * k as i64 + 2);
        let s2 = &w * &(&c[2 * k] - &c[2 * k + 1].scale(&odd));
        let s3 = &w * &(&s2.scale(&even) - &c[2 * k + 1]);
        c.push(s2);
        c.push(s3);
        k += 1;
    }
    c.truncate(n + 1);
    SphericalExpansion::new(q0.clone(), c)
}

/// Outcome of [`multiplicity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicity {
    /// `2n`, `n` the smallest index with `s_2n != 0` or `s_2n+1 != 0`.
    pub spherical_mult: usize,
    /// `s_2n == 0`: the function also vanishes at `q0` itself.
    pub isolated_positive: bool,
    /// First index with a nonzero coefficient.
    pub first_index: usize,
}

pub fn multiplicity<T: Scalar>(f: &SliceFunction<T>, q0: &Quaternion<T>, n: usize) -> Result<Multiplicity> {
    let e = spherical_coefficients(f, q0, n)?;
    let tol = if T::EXACT { 0.0 } else { FLOAT_ZERO_TOL };
    let first = e
        .coeffs
        .iter()
        .position(|s| !s.is_zero_within(tol))
        .ok_or(Error::AllCoefficientsZero(n))?;
    let half = first / 2;
    Ok(Multiplicity {
        spherical_mult: 2 * half,
        isolated_positive: first % 2 == 1,
        first_index: first,
    })
}

/// Residuals of the two relations
/// `d_c (d_s d_c)^k f = (2k+1) d_s (d_c d_s)^k f + 2 Im(x) (d_c d_s)^(k+1) f` and
/// `(d_s d_c)^(k+1) f = 2 v_s (d_c d_s)^(k+1) f`, which follow from
/// [`derivative_coefficients`] after clearing the factorials. Both vanish for
/// regular `f`.
pub fn verify_diff_equation<T: Scalar>(
    f: &SliceFunction<T>,
    k: usize,
) -> Result<(SliceFunction<T>, SliceFunction<T>)> {
    diff_equation_residuals(f, k, 2)
}

/// Same residuals with the weight `2` replaced by `weight`. With
/// `weight = 2(k+1)` the relations only hold for `k = 0`.
pub fn diff_equation_residuals<T: Scalar>(
    f: &SliceFunction<T>,
    k: usize,
    weight: i64,
) -> Result<(SliceFunction<T>, SliceFunction<T>)> {
    if !f.is_regular() {
        return Err(Error::NotRegular);
    }
    let w = T::from_i64(weight);
    let dcds_k1 = f.dcds_pow(k + 1);
    let lhs1 = f.dsdc_pow(k).slice_derivative();
    let rhs1 = &f.dcds_pow(k).spherical_derivative().scale(&T::from_i64(2 * k as i64 + 1))
        + &SliceFunction::im_function().slice_product(&dcds_k1).scale(&w);
    let lhs2 = f.dsdc_pow(k + 1);
    let rhs2 = dcds_k1.spherical_value().scale(&w);
    Ok(((&lhs1 - &rhs1).with_label("r1"), (&lhs2 - &rhs2).with_label("r2")))
}

/// `P_{q0,m}(x) = m (x - q0)^2 + (m+1) Delta_{q0}(x)` (slice square).
pub fn frak_poly<T: Scalar>(q0: &Quaternion<T>, m: u32) -> Result<SliceFunction<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let delta = SliceFunction::char_poly(q0)?;
    let lin = SliceFunction::linear(q0);
    let f = &lin.power(2).scale(&T::from_i64(m as i64)) + &delta.scale(&T::from_i64(m as i64 + 1));
    Ok(f.with_label(format!("P({q0},{m})")))
}

/// `4 (dbar_c - d_s)(d_c + d_s) f`.
pub fn laplacian<T: Scalar>(f: &SliceFunction<T>) -> SliceFunction<T> {
    let g = &f.slice_derivative() + &f.spherical_derivative();
    let h = &g.conj_slice_derivative() - &g.spherical_derivative();
    h.scale(&T::from_i64(4)).with_label(format!("lap({})", f.label))
}
