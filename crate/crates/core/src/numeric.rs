//! Floating-point slice functions, finite-difference slice derivatives, and
//! a least-squares oracle for spherical coefficients.

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::expansion::{basis_values, evaluate_expansion, SphericalExpansion};
use crate::quaternion::{Quaternion, Scalar};
use crate::slicefn::SliceFunction;

type Q = Quaternion<f64>;

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-5;
/// Condition estimate above which the oracle refuses to answer.
pub const CONDITION_LIMIT: f64 = 1e10;
/// Relative residual accepted from the oracle.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

pub type StemFn = Arc<dyn Fn(f64, f64) -> Q + Send + Sync>;
/// Returns the stem pair of `d_c f` at `(alpha, beta)`.
pub type StemPairFn = Arc<dyn Fn(f64, f64) -> (Q, Q) + Send + Sync>;
/// Point evaluator `x -> f(x)`.
pub type PointFn<'a> = dyn Fn(&Q) -> Result<Q> + 'a;

/// `f(alpha + I beta) = f0(alpha, beta) + I f1(alpha, beta)`, given by callbacks.
#[derive(Clone)]
pub struct NumericSliceFunction {
    pub f0: StemFn,
    pub f1: StemFn,
    pub analytic_dc: Option<StemPairFn>,
    pub label: String,
}

impl std::fmt::Debug for NumericSliceFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumericSliceFunction").field("label", &self.label).finish()
    }
}

fn unit_of(x: &Q) -> Option<(f64, f64, Q)> {
    let c = x.decompose();
    c.unit.map(|u| (c.alpha, c.beta.to_f64(), u.to_f64()))
}

impl NumericSliceFunction {
    pub fn new(f0: StemFn, f1: StemFn, label: impl Into<String>) -> Self {
        NumericSliceFunction { f0, f1, analytic_dc: None, label: label.into() }
    }

    pub fn with_analytic_dc(mut self, dc: StemPairFn) -> Self {
        self.analytic_dc = Some(dc);
        self
    }

    /// `exp(alpha + I beta) = e^alpha (cos beta + I sin beta)`, its own slice derivative.
    pub fn exp() -> Self {
        let f0: StemFn = Arc::new(|a: f64, b: f64| Q::real(a.exp() * b.cos()));
        let f1: StemFn = Arc::new(|a: f64, b: f64| Q::real(a.exp() * b.sin()));
        let dc: StemPairFn = Arc::new(|a: f64, b: f64| (Q::real(a.exp() * b.cos()), Q::real(a.exp() * b.sin())));
        NumericSliceFunction::new(f0, f1, "exp(x)").with_analytic_dc(dc)
    }

    /// Wraps an exact stem, with `d_c` taken symbolically.
    pub fn from_slice_function<T: Scalar>(f: &SliceFunction<T>) -> Self {
        let s = f.to_f64();
        let d = f.slice_derivative().to_f64();
        let (a0, a1) = (s.stem.f0.clone(), s.stem.f1.clone());
        let f0: StemFn = Arc::new(move |a, b| a0.eval_f64(a, b).unwrap_or_else(|_| nan()));
        let f1: StemFn = Arc::new(move |a, b| a1.eval_f64(a, b).unwrap_or_else(|_| nan()));
        let dc: StemPairFn = Arc::new(move |a, b| {
            (
                d.stem.f0.eval_f64(a, b).unwrap_or_else(|_| nan()),
                d.stem.f1.eval_f64(a, b).unwrap_or_else(|_| nan()),
            )
        });
        NumericSliceFunction::new(f0, f1, f.label.clone()).with_analytic_dc(dc)
    }

    pub fn constant(c: Q) -> Self {
        let f0: StemFn = Arc::new(move |_, _| c.clone());
        let f1: StemFn = Arc::new(|_, _| Q::zero());
        NumericSliceFunction::new(f0, f1, "const")
    }

    pub fn stem_at(&self, alpha: f64, beta: f64) -> (Q, Q) {
        ((self.f0)(alpha, beta), (self.f1)(alpha, beta))
    }

    pub fn evaluate_at(&self, alpha: f64, beta: f64, unit: &Q) -> Q {
        let (v0, v1) = self.stem_at(alpha, beta);
        &v0 + &(unit * &v1)
    }

    /// At real points the value is `f0(alpha, 0)`, provided `f1(alpha, 0)` vanishes.
    pub fn evaluate(&self, x: &Q) -> Result<Q> {
        match unit_of(x) {
            Some((a, b, u)) => Ok(self.evaluate_at(a, b, &u)),
            None => {
                let (v0, v1) = self.stem_at(x.w, 0.0);
                if v1.is_zero_within(1e-14) {
                    Ok(v0)
                } else {
                    Err(Error::RealPointNotExtendable)
                }
            }
        }
    }

    fn combine(
        &self,
        other: &Self,
        label: String,
        op: impl Fn((Q, Q), (Q, Q)) -> (Q, Q) + Send + Sync + Clone + 'static,
    ) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let (a1, b1, op1) = (self.clone(), other.clone(), op.clone());
        let f0: StemFn = Arc::new(move |x, y| op(a.stem_at(x, y), b.stem_at(x, y)).0);
        let f1: StemFn = Arc::new(move |x, y| op1(a1.stem_at(x, y), b1.stem_at(x, y)).1);
        NumericSliceFunction::new(f0, f1, label)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, format!("{} + {}", self.label, other.label), |(a0, a1), (b0, b1)| {
            (&a0 + &b0, &a1 + &b1)
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, format!("{} - ({})", self.label, other.label), |(a0, a1), (b0, b1)| {
            (&a0 - &b0, &a1 - &b1)
        })
    }

    /// Stem product, coefficients kept in order.
    pub fn slice_product(&self, other: &Self) -> Self {
        self.combine(other, format!("({})*({})", self.label, other.label), |(a0, a1), (b0, b1)| {
            (&(&a0 * &b0) - &(&a1 * &b1), &(&a0 * &b1) + &(&a1 * &b0))
        })
    }

    pub fn neg(&self) -> Self {
        self.right_mul(&Q::real(-1.0))
    }

    /// `f(x) q`.
    pub fn right_mul(&self, q: &Q) -> Self {
        let (a, b, qa, qb) = (self.clone(), self.clone(), q.clone(), q.clone());
        let f0: StemFn = Arc::new(move |x, y| &(a.f0)(x, y) * &qa);
        let f1: StemFn = Arc::new(move |x, y| &(b.f1)(x, y) * &qb);
        NumericSliceFunction::new(f0, f1, format!("({})*({q})", self.label))
    }

    pub fn power(&self, n: u32) -> Self {
        let mut acc = NumericSliceFunction::constant(Q::one());
        for _ in 0..n {
            acc = acc.slice_product(self);
        }
        acc
    }
}

fn nan() -> Q {
    Q::real(f64::NAN)
}

/// Central differences for the stem of `d_c f`:
/// `(1/2 (dF0/da + dF1/db), 1/2 (dF1/da - dF0/db))`.
pub fn fd_slice_derivative_stem(nf: &NumericSliceFunction, alpha: f64, beta: f64, h: f64) -> Result<(Q, Q)> {
    if !(h > 0.0 && h < beta) {
        return Err(Error::StepTooLarge { h, beta });
    }
    let inv = 1.0 / (2.0 * h);
    let (pa0, pa1) = nf.stem_at(alpha + h, beta);
    let (ma0, ma1) = nf.stem_at(alpha - h, beta);
    let (pb0, pb1) = nf.stem_at(alpha, beta + h);
    let (mb0, mb1) = nf.stem_at(alpha, beta - h);
    let da0 = (&pa0 - &ma0).scale(&inv);
    let da1 = (&pa1 - &ma1).scale(&inv);
    let db0 = (&pb0 - &mb0).scale(&inv);
    let db1 = (&pb1 - &mb1).scale(&inv);
    Ok(((&da0 + &db1).scale(&0.5), (&da1 - &db0).scale(&0.5)))
}

/// `d_c f` at `alpha + unit beta` by central differences, error `O(h^2)`.
pub fn fd_slice_derivative(nf: &NumericSliceFunction, alpha: f64, beta: f64, h: f64, unit: &Q) -> Result<Q> {
    let (d0, d1) = fd_slice_derivative_stem(nf, alpha, beta, h)?;
    Ok(&d0 + &(unit * &d1))
}

/// `U(q0, R) = { x : |Delta_q0(x)| < R^2 }`.
#[derive(Clone, Debug, PartialEq)]
pub struct CassiniBall {
    pub q0: Q,
    pub radius: f64,
}

impl CassiniBall {
    pub fn new(q0: Q, radius: f64) -> Result<Self> {
        if q0.is_real() {
            return Err(Error::RealBasePoint);
        }
        if radius.is_nan() || radius <= 0.0 {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        Ok(CassiniBall { q0, radius })
    }

    pub fn delta_abs(&self, x: &Q) -> f64 {
        delta_value(&self.q0, x).norm()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.delta_abs(x) < self.radius * self.radius
    }
}

pub fn cassini_contains(ball: &CassiniBall, x: &Q) -> bool {
    ball.contains(x)
}

/// `Delta_q0(x) = x^2 - 2 Re(q0) x + |q0|^2` in floating point.
pub fn delta_value(q0: &Q, x: &Q) -> Q {
    &(&(x * x) - &x.scale(&(2.0 * q0.w))) + &Q::real(q0.norm_sq())
}

/// A unit orthogonal to `unit`.
pub fn orthogonal_unit(unit: &Q) -> Q {
    let candidates = [Q::i(), Q::j(), Q::k()];
    let best = candidates
        .iter()
        .min_by(|a, b| {
            let da = (a.x * unit.x + a.y * unit.y + a.z * unit.z).abs();
            let db = (b.x * unit.x + b.y * unit.y + b.z * unit.z).abs();
            da.total_cmp(&db)
        })
        .unwrap();
    let dot = best.x * unit.x + best.y * unit.y + best.z * unit.z;
    let v = best - &unit.scale(&dot);
    v.scale(&(1.0 / v.norm()))
}

/// `per_circle` points on each of two circles, one around `q0` in its own
/// slice and one around `alpha0 + J beta0` with `J` orthogonal to the unit
/// of `q0`. The radius is chosen so that `|Delta| ~ delta_abs` on both.
pub fn oracle_samples(q0: &Q, delta_abs: f64, per_circle: usize) -> Result<Vec<Q>> {
    let (alpha, beta, unit) = unit_of(q0).ok_or(Error::RealBasePoint)?;
    let rho = (delta_abs / (2.0 * beta)).min(0.5 * beta);
    let other = orthogonal_unit(&unit);
    let mut out = Vec::with_capacity(2 * per_circle);
    for u in [&unit, &other] {
        for t in 0..per_circle {
            // offset the two circles so no angle repeats
            let shift = if std::ptr::eq(u, &unit) { 0.0 } else { 0.5 };
            let th = 2.0 * std::f64::consts::PI * (t as f64 + shift) / per_circle as f64;
            let (a, b) = (alpha + rho * th.cos(), beta + rho * th.sin());
            out.push(&Q::real(a) + &u.scale(&b));
        }
    }
    Ok(out)
}

/// Least-squares coefficients with diagnostics.
#[derive(Clone, Debug)]
pub struct OracleFit {
    pub expansion: SphericalExpansion<f64>,
    /// `|A s - b| / max(|b|, 1)`.
    pub residual: f64,
    /// `sigma_max / sigma_min` of the column-scaled system.
    pub condition: f64,
}

/// 4x4 real matrix of `s -> a s`.
fn left_mul_matrix(a: &Q) -> [[f64; 4]; 4] {
    [
        [a.w, -a.x, -a.y, -a.z],
        [a.x, a.w, -a.z, a.y],
        [a.y, a.z, a.w, -a.x],
        [a.z, -a.y, a.x, a.w],
    ]
}

/// Solves `sum_n B_n(x_j) s_n = f(x_j)` for right coefficients `s_0..=s_N`
/// in the least-squares sense over the realified `4(N+1)` unknowns.
pub fn fit_coefficients_oracle(f: &PointFn<'_>, q0: &Q, n: usize, samples: &[Q]) -> Result<OracleFit> {
    fit_with_limit(f, q0, n, samples, CONDITION_LIMIT)
}

pub fn fit_with_limit(f: &PointFn<'_>, q0: &Q, n: usize, samples: &[Q], condition_limit: f64) -> Result<OracleFit> {
    if q0.is_real() {
        return Err(Error::RealBasePoint);
    }
    if samples.len() < n + 1 {
        return Err(Error::TooFewSamples { needed: n + 1, got: samples.len() });
    }
    let rows = 4 * samples.len();
    let cols = 4 * (n + 1);
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    let mut b = DVector::<f64>::zeros(rows);
    for (j, x) in samples.iter().enumerate() {
        let y = f(x)?;
        for (r, v) in y.to_array().iter().enumerate() {
            b[4 * j + r] = *v;
        }
        for (m, bv) in basis_values(q0, n, x).iter().enumerate() {
            let block = left_mul_matrix(bv);
            for r in 0..4 {
                for c in 0..4 {
                    a[(4 * j + r, 4 * m + c)] = block[r][c];
                }
            }
        }
    }
    let scales: Vec<f64> = (0..cols)
        .map(|c| {
            let s = a.column(c).norm();
            if s > 0.0 { s } else { 1.0 }
        })
        .collect();
    let mut scaled = a.clone();
    for (c, s) in scales.iter().enumerate() {
        scaled.column_mut(c).scale_mut(1.0 / s);
    }
    let svd = scaled.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition.is_nan() || condition > condition_limit {
        return Err(Error::IllConditioned(condition));
    }
    let y = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let sol = DVector::from_iterator(cols, y.iter().zip(&scales).map(|(v, s)| v / s));
    let residual = (&a * &sol - &b).norm() / b.norm().max(1.0);
    let coeffs = (0..=n)
        .map(|m| Q::new(sol[4 * m], sol[4 * m + 1], sol[4 * m + 2], sol[4 * m + 3]))
        .collect();
    Ok(OracleFit {
        expansion: SphericalExpansion::new(q0.clone(), coeffs)?,
        residual,
        condition,
    })
}

/// One grid point of a convergence sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub alpha: f64,
    pub beta: f64,
    pub unit: Q,
    pub abs_error: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
    pub max_error: f64,
    pub mean_error: f64,
    /// `(truncation, max error)` for increasing truncations up to `N`.
    pub by_truncation: Vec<(usize, f64)>,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,beta,slice_unit,abs_error\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{:e}", r.alpha, r.beta, r.unit, r.abs_error);
        }
        out
    }

    /// Max error never increases with the truncation.
    pub fn is_monotone(&self) -> bool {
        self.by_truncation.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9) + 1e-15)
    }
}

/// Grid of `grid x grid` points in the upper half of two slices (that of
/// `q0` and an orthogonal one), kept if inside the ball.
///
/// In a slice, `|Delta(z)| = |z - q0| |z - conj q0|`, so `|z - q0| < rho` with
/// `rho = beta0 - sqrt(beta0^2 - R^2)` when `R < beta0` (the ball has one
/// component per slice around `q0`) and `rho = beta0 + sqrt(beta0^2 + R^2)`
/// otherwise. The grid spans that box.
pub fn grid_points(ball: &CassiniBall, grid: usize) -> Vec<(f64, f64, Q)> {
    let Some((alpha0, beta0, unit)) = unit_of(&ball.q0) else {
        return Vec::new();
    };
    let r2 = ball.radius * ball.radius;
    let rho = if r2 < beta0 * beta0 {
        r2 / (beta0 + (beta0 * beta0 - r2).sqrt())
    } else {
        beta0 + (beta0 * beta0 + r2).sqrt()
    };
    let (b_lo, b_hi) = ((beta0 - rho).max(0.0), beta0 + rho);
    let g = grid.max(2);
    let mut out = Vec::new();
    for u in [unit.clone(), orthogonal_unit(&unit)] {
        for ia in 0..g {
            // open box: endpoints lie on or outside the boundary
            let a = alpha0 - rho + 2.0 * rho * (ia as f64 + 0.5) / g as f64;
            for ib in 0..g {
                let b = b_lo + (b_hi - b_lo) * (ib as f64 + 0.5) / g as f64;
                let x = &Q::real(a) + &u.scale(&b);
                if b > 0.0 && ball.contains(&x) {
                    out.push((a, b, u.clone()));
                }
            }
        }
    }
    out
}

/// Sweeps `|f(x) - e(x)|` over the grid.
pub fn convergence_report(f: &PointFn<'_>, e: &SphericalExpansion<f64>, ball: &CassiniBall, grid: usize) -> Result<ConvergenceReport> {
    let pts = grid_points(ball, grid);
    let n = e.truncation();
    let step = (n / 5).max(1);
    let mut truncs: Vec<usize> = (0..n).step_by(step).collect();
    truncs.push(n);
    let mut by = vec![0.0f64; truncs.len()];
    let mut rows = Vec::with_capacity(pts.len());
    for (a, b, u) in pts {
        let x = &Q::real(a) + &u.scale(&b);
        let fx = f(&x)?;
        for (slot, &t) in by.iter_mut().zip(&truncs) {
            let part = SphericalExpansion { q0: e.q0.clone(), coeffs: e.coeffs[..=t].to_vec() };
            *slot = slot.max(evaluate_expansion(&part, &x).max_abs_diff(&fx));
        }
        let err = evaluate_expansion(e, &x).max_abs_diff(&fx);
        rows.push(ReportRow { alpha: a, beta: b, unit: u, abs_error: err });
    }
    let max_error = rows.iter().map(|r| r.abs_error).fold(0.0, f64::max);
    let mean_error = if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.abs_error).sum::<f64>() / rows.len() as f64
    };
    Ok(ConvergenceReport {
        rows,
        max_error,
        mean_error,
        by_truncation: truncs.into_iter().zip(by).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{eigenfunction_recurrence, spherical_coefficients, spherical_coefficients_f64};
    use crate::quaternion::Rational;
    use crate::random;
    use crate::slicefn::Sign;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type QR = Quaternion<Rational>;

    fn example_p() -> SliceFunction<Rational> {
        SliceFunction::from_polynomial(&[
            QR::one(),
            QR::from_ints(0, 1, -1, 1),
            QR::from_ints(0, -1, -1, -1),
            QR::one(),
        ])
    }

    fn exp_closed(x: &Q) -> Q {
        let (a, b, u) = unit_of(x).unwrap();
        &Q::real(a.exp() * b.cos()) + &u.scale(&(a.exp() * b.sin()))
    }

    #[test]
    fn fd_examples() {
        let e = NumericSliceFunction::exp();
        let d = fd_slice_derivative(&e, 0.0, 1.0, 1e-5, &Q::i()).unwrap();
        assert!(d.max_abs_diff(&exp_closed(&Q::i())) < 1e-9);

        let x2 = NumericSliceFunction::from_slice_function(&SliceFunction::<Rational>::monomial_power(2));
        let unit = Q::j();
        let d = fd_slice_derivative(&x2, 1.0, 1.0, 1e-5, &unit).unwrap();
        assert!(d.max_abs_diff(&Q::new(2.0, 0.0, 2.0, 0.0)) < 1e-9);

        assert!(matches!(fd_slice_derivative_stem(&e, 0.0, 1e-6, 1e-5), Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn fd_agrees_with_analytic() {
        let e = NumericSliceFunction::exp();
        let dc = e.analytic_dc.clone().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let (a, b) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.2..2.0));
            let (d0, d1) = fd_slice_derivative_stem(&e, a, b, 1e-5).unwrap();
            let (e0, e1) = dc(a, b);
            assert!(d0.max_abs_diff(&e0) < 1e-6 && d1.max_abs_diff(&e1) < 1e-6);
        }
    }

    fn fd_error(nf: &NumericSliceFunction, exact: (Q, Q), h: f64) -> f64 {
        let (d0, d1) = fd_slice_derivative_stem(nf, 0.3, 1.2, h).unwrap();
        d0.max_abs_diff(&exact.0).max(d1.max_abs_diff(&exact.1))
    }

    #[test]
    fn fd_is_second_order() {
        // stems that are not holomorphic, so the h^2 terms do not cancel
        let f0: StemFn = Arc::new(|a, b| Q::new(a.sin() * b.cosh(), 0.0, a * b * b, 0.0));
        let f1: StemFn = Arc::new(|a, b| Q::new(0.0, a.exp() * b.powi(3), 0.0, 0.0));
        let nf = NumericSliceFunction::new(f0, f1, "smooth");
        let (a, b) = (0.3f64, 1.2f64);
        // 1/2 (d_a F0 + d_b F1), 1/2 (d_a F1 - d_b F0)
        let exact = (
            Q::new(0.5 * a.cos() * b.cosh(), 1.5 * a.exp() * b * b, 0.5 * b * b, 0.0),
            Q::new(-0.5 * a.sin() * b.sinh(), 0.5 * a.exp() * b.powi(3), -a * b, 0.0),
        );
        let ratio = fd_error(&nf, exact.clone(), 0.02) / fd_error(&nf, exact, 0.01);
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");

        // regular stems: the O(h^2) terms cancel and the order is higher
        let e = NumericSliceFunction::exp();
        let exact = (e.analytic_dc.as_ref().unwrap())(a, b);
        let ratio = fd_error(&e, exact.clone(), 0.02) / fd_error(&e, exact, 0.01);
        assert!(ratio >= 3.5, "ratio {ratio}");
    }

    #[test]
    fn cassini_examples() {
        let ball = CassiniBall::new(Q::i(), 1.0).unwrap();
        assert!(ball.contains(&Q::i()));
        assert!(ball.contains(&Q::i().conj()));
        assert!(!ball.contains(&Q::new(0.0, 2.0, 0.0, 0.0)));
        // |Delta_i(x)| = |x^2 + 1|; on the real axis it is 1 + a^2
        let r = 1.3f64;
        let a_in = (r * r * (1.0 - 1e-6) - 1.0).sqrt();
        let a_out = (r * r * (1.0 + 1e-6) - 1.0).sqrt();
        let ball = CassiniBall::new(Q::i(), r).unwrap();
        assert!(ball.contains(&Q::real(a_in)));
        assert!(!ball.contains(&Q::real(a_out)));
        for radius in [1e-3, 0.1, 1.0, 10.0] {
            let q0 = Q::new(0.3, 0.0, 1.2, -0.4);
            assert!(CassiniBall::new(q0.clone(), radius).unwrap().contains(&q0.conj()));
        }
    }

    #[test]
    fn oracle_matches_example() {
        let p = example_p().to_f64();
        let q0 = Q::i();
        let samples = oracle_samples(&q0, 0.5, 6).unwrap();
        assert_eq!(samples.len(), 12);
        let fit = fit_coefficients_oracle(&|x: &Q| p.evaluate_f64(x), &q0, 3, &samples).unwrap();
        let exact = spherical_coefficients(&example_p(), &QR::i(), 3).unwrap();
        assert!(exact.max_coeff_diff(&fit.expansion, 4) < 1e-8);
        assert!(fit.residual < 1e-10);
        assert_eq!(
            fit_coefficients_oracle(&|x: &Q| p.evaluate_f64(x), &q0, 30, &samples).unwrap_err(),
            Error::TooFewSamples { needed: 31, got: 12 }
        );
    }

    #[test]
    fn oracle_constant() {
        let c = Q::new(1.0, -2.0, 0.5, 3.0);
        let q0 = Q::new(0.2, 0.0, 0.9, 0.0);
        let samples = oracle_samples(&q0, 0.3, 8).unwrap();
        let fit = fit_coefficients_oracle(&|_: &Q| Ok(c.clone()), &q0, 4, &samples).unwrap();
        assert!(fit.expansion.coeffs[0].max_abs_diff(&c) < 1e-10);
        for s in &fit.expansion.coeffs[1..] {
            assert!(s.is_zero_within(1e-10));
        }
    }

    #[test]
    fn oracle_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let d = rng.gen_range(0..=6);
            let f = SliceFunction::from_polynomial(&random::polynomial(&mut rng, d, 5, 3));
            let q0 = random::exact_nonreal(&mut rng, 3, 2);
            let exact = spherical_coefficients(&f, &q0, d).unwrap();
            let ff = f.to_f64();
            let q0f = q0.to_f64();
            let samples = oracle_samples(&q0f, 0.5, 2 * (d + 1)).unwrap();
            let fit = fit_coefficients_oracle(&|x: &Q| ff.evaluate_f64(x), &q0f, d, &samples).unwrap();
            assert!(exact.max_coeff_diff(&fit.expansion, d + 1) < 1e-8, "{}", fit.condition);
            assert!(fit.residual < 1e-10);
        }
    }

    #[test]
    fn exp_recurrence_against_oracle() {
        let q0 = Q::new(1.0, 2.0, 0.0, 0.0);
        let s0 = exp_closed(&q0);
        let s1 = Q::real(1f64.exp() * 2f64.sin() / 2.0);
        let rec = eigenfunction_recurrence(s0, s1, &q0, 30).unwrap();
        let e = NumericSliceFunction::exp();
        let samples = oracle_samples(&q0, 0.25, 24).unwrap();
        let fit = fit_coefficients_oracle(&|x: &Q| e.evaluate(x), &q0, 20, &samples).unwrap();
        let diff = rec.max_coeff_diff(&fit.expansion, 10);
        assert!(diff < 1e-6, "diff {diff} cond {}", fit.condition);
        let x = Q::new(1.0, 2.1, 0.0, 0.0);
        assert!(evaluate_expansion(&rec, &x).max_abs_diff(&exp_closed(&x)) < 1e-9);
    }

    #[test]
    fn convergence_examples() {
        let p = example_p();
        let e = spherical_coefficients(&p, &QR::i(), 3).unwrap().to_f64();
        let pf = p.to_f64();
        let ball = CassiniBall::new(Q::i(), 1.0).unwrap();
        let rep = convergence_report(&|x: &Q| pf.evaluate_f64(x), &e, &ball, 12).unwrap();
        assert!(!rep.rows.is_empty());
        assert!(rep.max_error < 1e-10);
        assert!(rep.to_csv().starts_with("alpha,beta,slice_unit,abs_error\n"));

        let q0 = Q::i();
        let ex = NumericSliceFunction::exp();
        let s0 = exp_closed(&q0);
        let s1 = Q::real(1f64.sin());
        let ball = CassiniBall::new(q0.clone(), 0.5).unwrap();
        let mut maxes = Vec::new();
        for n in [10, 20] {
            let rec = eigenfunction_recurrence(s0.clone(), s1.clone(), &q0, n).unwrap();
            let rep = convergence_report(&|x: &Q| ex.evaluate(x), &rec, &ball, 10).unwrap();
            maxes.push(rep.max_error);
        }
        assert!(maxes[1] < maxes[0]);

        let ell = SliceFunction::idempotent(&QR::j(), Sign::Plus).unwrap();
        let e = spherical_coefficients_f64(&ell, &q0, 12).unwrap();
        let ef = ell.to_f64();
        let ball = CassiniBall::new(q0, 0.7).unwrap();
        let rep = convergence_report(&|x: &Q| ef.evaluate_f64(x), &e, &ball, 10).unwrap();
        assert!(rep.max_error.is_finite() && rep.max_error > 0.0);
    }
}
