//! Seeded invariant suites over random exact inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expansion::{factorial, frak_poly, spherical_coefficients, verify_diff_equation};
use crate::numeric::{fit_coefficients_oracle, oracle_samples};
use crate::quaternion::{Quaternion, Rational, Scalar};
use crate::random;
use crate::slicefn::{Sign, SliceFunction};

type Q = Quaternion<Rational>;
type F = SliceFunction<Rational>;

pub const SUITES: [&str; 7] = ["basicslice", "leibniz", "main", "tables", "appendixB", "diffeq", "oracle"];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.to_string(), checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check { name: name.into(), passed, detail: String::new() });
    }

    fn check_detail(&mut self, name: impl Into<String>, passed: bool, detail: String) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    fn check_eq<T: PartialEq + std::fmt::Display>(&mut self, name: impl Into<String>, got: &T, want: &T) {
        let passed = got == want;
        let detail = if passed { String::new() } else { format!("got {got}, expected {want}") };
        self.check_detail(name, passed, detail);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }
}

fn default_kmax(suite: &str) -> usize {
    match suite {
        "main" => 4,
        "tables" => 6,
        "appendixB" => 5,
        "diffeq" => 3,
        _ => 0,
    }
}

/// Runs a named suite. `kmax` falls back to the suite's default.
pub fn run_suite(suite: &str, seed: u64, kmax: Option<usize>) -> Result<SuiteReport> {
    let k = kmax.unwrap_or_else(|| default_kmax(suite));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        "basicslice" => Ok(basicslice(&mut rng)),
        "leibniz" => Ok(leibniz(&mut rng)),
        "main" => Ok(prop_main(&mut rng, k)),
        "tables" => tables(&mut rng, k, 5),
        "appendixB" => appendix_b(&mut rng, k, 5),
        "diffeq" => diffeq(&mut rng, k, 20),
        "oracle" => oracle(&mut rng, 20),
        other => Err(Error::InvalidArgument(format!(
            "unknown suite `{other}`; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> F {
    let d = rng.gen_range(0..=max_deg);
    F::from_polynomial(&random::polynomial(rng, d, 5, 3))
}

/// Regular functions with and without real extension.
fn random_regular(rng: &mut ChaCha8Rng, max_deg: usize) -> F {
    let f = random_poly(rng, max_deg);
    if rng.gen_bool(0.3) {
        let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let unit = random::rational_unit(rng, 3, 3);
        F::idempotent(&unit, sign).expect("rational unit").slice_product(&f)
    } else {
        f
    }
}

fn basicslice(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut rep = SuiteReport::new("basicslice");
    let half = Rational::from_ratio(1, 2);
    for t in 0..20 {
        let f = random_regular(rng, 6);
        let g = random_regular(rng, 4);
        let (ds, vs) = (f.spherical_derivative(), f.spherical_value());
        rep.check(format!("#{t} ds^2 f = 0"), ds.spherical_derivative().is_zero());
        rep.check(format!("#{t} ds vs f = 0"), vs.spherical_derivative().is_zero());
        rep.check(format!("#{t} vs ds f = ds f"), ds.spherical_value() == ds);
        rep.check(format!("#{t} vs^2 f = vs f"), vs.spherical_value() == vs);
        rep.check(format!("#{t} dc vs f = dc f / 2"), vs.slice_derivative() == f.slice_derivative().scale(&half));
        rep.check(format!("#{t} f*g regular"), f.slice_product(&g).is_regular());
        for p in 0..5 {
            let x = random::exact_nonreal(rng, 5, 4);
            let c = x.decompose();
            let (crate::quaternion::Beta::Exact(b), Some(crate::quaternion::Unit::Exact(u))) = (&c.beta, &c.unit) else {
                unreachable!()
            };
            let (v0, v1) = match (f.f0().eval(&c.alpha, b), f.f1().eval(&c.alpha, b)) {
                (Ok(v0), Ok(v1)) => (v0, v1),
                _ => continue,
            };
            let ok = f.evaluate(&x.conj()) == Ok(&v0 - &(u * &v1));
            rep.check(format!("#{t} f(x^c) = F0 - I F1 at point {p}"), ok);
        }
    }
    rep
}

fn leibniz(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut rep = SuiteReport::new("leibniz");
    for t in 0..20 {
        let f = random_regular(rng, 5);
        let g = random_regular(rng, 5);
        let fg = f.slice_product(&g);
        let ds = &f.spherical_derivative().slice_product(&g.spherical_value())
            + &f.spherical_value().slice_product(&g.spherical_derivative());
        rep.check(format!("#{t} ds(f*g)"), fg.spherical_derivative() == ds);
        let dc = &f.slice_derivative().slice_product(&g) + &f.slice_product(&g.slice_derivative());
        rep.check(format!("#{t} dc(f*g)"), fg.slice_derivative() == dc);
    }
    rep
}

fn binomial(n: usize, k: usize) -> Rational {
    factorial::<Rational>(n) / (factorial::<Rational>(k) * factorial::<Rational>(n - k))
}

/// Right-hand side of the binomial expansion of `(d_c d_s)^k (f * g)`, `k >= 1`.
pub fn prop_main_rhs(f: &F, g: &F, k: usize) -> F {
    let mut acc = &f.dcds_pow(k).slice_product(&g.spherical_value())
        + &f.spherical_value().slice_product(&g.dcds_pow(k));
    let mut inner = F::zero();
    for h in 0..k {
        let w = binomial(k - 1, h);
        let a = f.dcds_pow(k - h - 1).spherical_derivative().slice_product(&g.dsdc_pow(h).slice_derivative());
        let b = f.dsdc_pow(h).slice_derivative().slice_product(&g.dcds_pow(k - h - 1).spherical_derivative());
        inner = &inner + &(&a + &b).scale(&w);
    }
    for h in 1..k {
        let w = binomial(k - 1, h);
        let a = f.dcds_pow(k - h).slice_product(&g.dsdc_pow(h));
        let b = f.dsdc_pow(h).slice_product(&g.dcds_pow(k - h));
        inner = &inner + &(&a + &b).scale(&w);
    }
    acc = &acc + &inner.scale(&Rational::from_ratio(1, 2));
    acc
}

fn prop_main(rng: &mut ChaCha8Rng, kmax: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("main");
    for t in 0..5 {
        let f = random_poly(rng, 7);
        let g = random_poly(rng, 7);
        let fg = f.slice_product(&g);
        for k in 1..=kmax {
            rep.check(format!("#{t} k={k}"), fg.dcds_pow(k) == prop_main_rhs(&f, &g, k));
        }
    }
    for n in 0..=5usize {
        let even = F::monomial_power(2 * n as u32);
        let odd = F::monomial_power(2 * n as u32 + 1);
        rep.check(format!("ds (dc ds)^{n} x^{}", 2 * n), even.dcds_pow(n).spherical_derivative().is_zero());
        rep.check(format!("(dc ds)^{} x^{}", n + 1, 2 * n + 1), odd.dcds_pow(n + 1).is_zero());
        rep.check(format!("(ds dc)^{} x^{}", n + 1, 2 * n + 1), odd.dsdc_pow(n + 1).is_zero());
    }
    rep
}

fn int(n: &Rational) -> Q {
    Quaternion::real(n.clone())
}

/// Closed-form coefficient identities and vanishing cases for `0 <= k <= p <= kmax`.
pub fn tables(rng: &mut ChaCha8Rng, kmax: usize, points: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("tables");
    for t in 0..points {
        let q0 = random::nonreal_quaternion(rng, 4, 3);
        let im = q0.im();
        let delta = F::char_poly(&q0)?;
        let lin = F::linear(&q0);
        let powers: Vec<F> = (0..=kmax).map(|p| delta.power(p as u32)).collect();
        for (p, dp) in powers.iter().enumerate() {
            let dpl = dp.slice_product(&lin);
            for k in 0..=p {
                let fact = factorial::<Rational>(k);
                let tag = format!("q0#{t} k={k} p={p}");
                let dcds = dp.dcds_pow(k);
                let dsdc = dp.dsdc_pow(k);
                let at = |f: &F| f.evaluate(&q0);
                if k == p {
                    if k >= 1 {
                        let two = Rational::from_i64(2) * fact.clone();
                        rep.check_eq(format!("(ds dc)^k D^k = 2 k! [{tag}]"), &dsdc, &F::constant(int(&two)));
                        rep.check_eq(format!("(dc ds)^k D^k = k! [{tag}]"), &dcds, &F::constant(int(&fact)));
                        let v = dp.dsdc_pow(k - 1).slice_derivative().evaluate(&q0)?;
                        let want = im.scale(&(Rational::from_i64(2) * fact.clone()));
                        rep.check_eq(format!("dc (ds dc)^(k-1) D^k (q0) = 2 Im k! [{tag}]"), &v, &want);
                    }
                    let v = at(&dpl.dcds_pow(k).spherical_derivative())?;
                    rep.check_eq(format!("ds (dc ds)^k (D^k (x-q0)) (q0) = k! [{tag}]"), &v, &int(&fact));
                } else {
                    let z = Q::zero();
                    rep.check_eq(format!("ds (dc ds)^k D^p (q0) = 0 [{tag}]"), &at(&dcds.spherical_derivative())?, &z);
                    rep.check_eq(format!("(dc ds)^k D^p (q0) = 0 [{tag}]"), &at(&dcds)?, &z);
                    rep.check_eq(format!("(ds dc)^k D^p (q0) = 0 [{tag}]"), &at(&dsdc)?, &z);
                    let v = at(&dpl.dcds_pow(k).spherical_derivative())?;
                    rep.check_eq(format!("ds (dc ds)^k (D^p (x-q0)) (q0) = 0 [{tag}]"), &v, &z);
                    if k + 1 < p {
                        let v = at(&dp.dsdc_pow(k).slice_derivative())?;
                        rep.check_eq(format!("dc (ds dc)^k D^p (q0) = 0 [{tag}]"), &v, &z);
                    }
                }
                if p >= 1 {
                    let v = at(&dpl.dcds_pow(k))?;
                    rep.check_eq(format!("(dc ds)^k (D^p (x-q0)) (q0) = 0 [{tag}]"), &v, &Q::zero());
                }
            }
        }
    }
    Ok(rep)
}

/// Values of the quadratic `P_{q0,m}` against the closed-form table, `m, k <= kmax`.
pub fn appendix_b(rng: &mut ChaCha8Rng, kmax: usize, points: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("appendixB");
    for t in 0..points {
        let q0 = random::nonreal_quaternion(rng, 4, 3);
        let im = q0.im();
        let delta = F::char_poly(&q0)?;
        let lin = F::linear(&q0);
        let r = |n: i64| Rational::from_i64(n);
        for m in 1..=kmax.max(1) {
            let mi = m as i64;
            let tag = format!("q0#{t} m={m}");
            let p = frak_poly(&q0, m as u32)?;
            rep.check_eq(format!("vs P (q0) = 2m Im^2 [{tag}]"), &p.spherical_value().evaluate(&q0)?, &(&im * &im).scale(&r(2 * mi)));
            rep.check_eq(format!("ds P (q0) = -2m Im [{tag}]"), &p.spherical_derivative().evaluate(&q0)?, &im.scale(&r(-2 * mi)));
            rep.check_eq(format!("dc P (q0) = 2(m+1) Im [{tag}]"), &p.slice_derivative().evaluate(&q0)?, &im.scale(&r(2 * mi + 2)));
            rep.check_eq(format!("dc ds P = 2m+1 [{tag}]"), &p.dcds_pow(1), &F::constant(int(&r(2 * mi + 1))));
            rep.check_eq(format!("ds dc P = 2(2m+1) [{tag}]"), &p.dsdc_pow(1), &F::constant(int(&r(2 * (2 * mi + 1)))));
            let lhs = delta.power(m as u32).slice_product(&lin).slice_derivative();
            let rhs = delta.power(m as u32 - 1).slice_product(&p);
            rep.check(format!("dc(D^m (x-q0)) = D^(m-1) P [{tag}]"), lhs == rhs);
        }
        for k in 0..=kmax {
            let tag = format!("q0#{t} k={k}");
            let f1 = factorial::<Rational>(k + 1);
            let a = delta.power(k as u32 + 1).slice_derivative();
            let b = delta.power(k as u32).slice_product(&lin).slice_derivative();
            let c = delta.power(k as u32 + 1).slice_product(&lin).slice_derivative();
            let two = r(2);
            rep.check_eq(
                format!("(dc ds)^k dc D^(k+1) (q0) = 2 Im (k+1)! [{tag}]"),
                &a.dcds_pow(k).evaluate(&q0)?,
                &im.scale(&(two.clone() * f1.clone())),
            );
            rep.check_eq(
                format!("(dc ds)^k dc (D^k (x-q0)) (q0) = (2k+1) k! [{tag}]"),
                &b.dcds_pow(k).evaluate(&q0)?,
                &int(&(r(2 * k as i64 + 1) * factorial::<Rational>(k))),
            );
            rep.check_eq(
                format!("ds (dc ds)^k dc D^(k+1) (q0) = 2 (k+1)! [{tag}]"),
                &a.dcds_pow(k).spherical_derivative().evaluate(&q0)?,
                &int(&(two.clone() * f1.clone())),
            );
            rep.check_eq(
                format!("ds (dc ds)^k dc (D^(k+1) (x-q0)) (q0) = -2 Im (k+1)! [{tag}]"),
                &c.dcds_pow(k).spherical_derivative().evaluate(&q0)?,
                &im.scale(&(-two * f1)),
            );
            // vanishing cases below the diagonal, m = k + 1 .. kmax
            for m in k + 1..=kmax {
                let dm = delta.power(m as u32).slice_product(&lin).slice_derivative();
                rep.check_eq(
                    format!("(dc ds)^k dc (D^m (x-q0)) (q0) = 0 [{tag} m={m}]"),
                    &dm.dcds_pow(k).evaluate(&q0)?,
                    &Q::zero(),
                );
                if k + 1 < m {
                    rep.check_eq(
                        format!("ds (dc ds)^k dc (D^m (x-q0)) (q0) = 0 [{tag} m={m}]"),
                        &dm.dcds_pow(k).spherical_derivative().evaluate(&q0)?,
                        &Q::zero(),
                    );
                }
            }
        }
    }
    Ok(rep)
}

/// Both residuals of [`verify_diff_equation`] for `k <= kmax`.
pub fn diffeq(rng: &mut ChaCha8Rng, kmax: usize, count: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("diffeq");
    let mut fs: Vec<(String, F)> = (0..count)
        .map(|t| {
            let d = rng.gen_range(0..=8);
            (format!("poly#{t}"), F::from_polynomial(&random::polynomial(rng, d, 5, 3)))
        })
        .collect();
    for (t, sign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
        let ell = F::idempotent(&Q::j(), sign)?;
        for s in 0..3 {
            let p = random_poly(rng, 6);
            fs.push((format!("ell{}j*poly#{s}", if t == 0 { "+" } else { "-" }), ell.slice_product(&p)));
        }
    }
    for (name, f) in &fs {
        for k in 0..=kmax {
            let (r1, r2) = verify_diff_equation(f, k)?;
            rep.check(format!("{name} k={k} r1"), r1.is_zero());
            rep.check(format!("{name} k={k} r2"), r2.is_zero());
        }
    }
    Ok(rep)
}

/// Least-squares fit against exact coefficients on random polynomials.
pub fn oracle(rng: &mut ChaCha8Rng, count: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("oracle");
    for t in 0..count {
        let d = rng.gen_range(0..=6);
        let f = F::from_polynomial(&random::polynomial(rng, d, 5, 3));
        let q0 = random::exact_nonreal(rng, 3, 2);
        let exact = spherical_coefficients(&f, &q0, d)?;
        let ff = f.to_f64();
        let q0f = q0.to_f64();
        // polynomials converge everywhere: take the widest circles allowed
        let beta = q0f.im().norm();
        let samples = oracle_samples(&q0f, 2.0 * beta * beta, 2 * (d + 1))?;
        let fit = fit_coefficients_oracle(&|x| ff.evaluate_f64(x), &q0f, d, &samples)?;
        let dev = exact.max_coeff_diff(&fit.expansion, d + 1);
        rep.check_detail(
            format!("#{t} degree {d}"),
            dev < 1e-8 && fit.residual < 1e-10,
            format!("max deviation {dev:e}, residual {:e}, condition {:e}", fit.residual, fit.condition),
        );
    }
    Ok(rep)
}
