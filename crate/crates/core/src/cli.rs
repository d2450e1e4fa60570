//! Command implementations shared by the `slicereg` binary and the C ABI.

use std::fmt::Write as _;

use serde_json::json;

use crate::error::{Error, Result};
use crate::expansion::{
    derivative_coefficients, evaluate_expansion, spherical_coefficients, spherical_coefficients_f64,
    SphericalExpansion,
};
use crate::expr::{parse_expression, parse_quaternion, Lowered};
use crate::json::{expansion_to_json, quaternion_to_json, AnyExpansion};
use crate::numeric::{convergence_report, fit_coefficients_oracle, oracle_samples, CassiniBall, ConvergenceReport};
use crate::quaternion::{Quaternion, Rational};

/// A point or value, exact when the inputs were.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Exact(Quaternion<Rational>),
    Float(Quaternion<f64>),
}

impl Point {
    pub fn parse(text: &str) -> Result<Point> {
        Ok(match parse_quaternion(text)? {
            Lowered::Exact(c) => Point::Exact(c.f0().coeff(0, 0)),
            Lowered::Float(c) => Point::Float(c.f0().coeff(0, 0)),
            Lowered::Numeric(_) => unreachable!("constants never lower to closures"),
        })
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        match self {
            Point::Exact(q) => q.to_f64(),
            Point::Float(q) => q.clone(),
        }
    }

    pub fn render(&self, float: bool) -> String {
        match self {
            Point::Exact(q) if !float => q.to_string(),
            p => p.to_f64().to_string(),
        }
    }

    pub fn to_json(&self, float: bool) -> serde_json::Value {
        match self {
            Point::Exact(q) if !float => quaternion_to_json(q),
            p => quaternion_to_json(&p.to_f64()),
        }
    }
}

pub fn parse_function(text: &str) -> Result<Lowered> {
    parse_expression(text)?.lower()
}

/// Half-width `|Delta(x)|` of the sample circles used for closures.
pub const ORACLE_DELTA: f64 = 0.25;

/// Diagnostics of a least-squares fit, when one was needed.
#[derive(Clone, Debug, PartialEq)]
pub struct FitInfo {
    pub residual: f64,
    pub condition: f64,
}

/// Coefficients `s_0..=s_N`: exact when both inputs are, otherwise floats.
/// Closures (`exp()`) go through the least-squares fit.
pub fn expand(f: &Lowered, q0: &Point, n: usize) -> Result<(AnyExpansion, Option<FitInfo>)> {
    let exp = match (f, q0) {
        (Lowered::Exact(f), Point::Exact(q)) => match spherical_coefficients(f, q, n) {
            Ok(e) => AnyExpansion::Exact(e),
            Err(Error::Inexact) => AnyExpansion::Float(spherical_coefficients_f64(f, &q.to_f64(), n)?),
            Err(e) => return Err(e),
        },
        (Lowered::Exact(f), Point::Float(q)) => AnyExpansion::Float(spherical_coefficients_f64(f, q, n)?),
        (Lowered::Float(f), q) => AnyExpansion::Float(spherical_coefficients(f, &q.to_f64(), n)?),
        (Lowered::Numeric(nf), q) => {
            let q = q.to_f64();
            let samples = oracle_samples(&q, ORACLE_DELTA, (2 * (n + 1)).max(24))?;
            let fit = fit_coefficients_oracle(&|x| nf.evaluate(x), &q, n, &samples)?;
            let info = FitInfo { residual: fit.residual, condition: fit.condition };
            return Ok((AnyExpansion::Float(fit.expansion), Some(info)));
        }
    };
    Ok((exp, None))
}

pub fn expansion_json(e: &AnyExpansion, float: bool) -> serde_json::Value {
    match e {
        AnyExpansion::Exact(e) if !float => expansion_to_json(e),
        AnyExpansion::Exact(e) => expansion_to_json(&e.to_f64()),
        AnyExpansion::Float(e) => expansion_to_json(e),
    }
}

fn rendered(e: &AnyExpansion, float: bool) -> Vec<String> {
    match e {
        AnyExpansion::Exact(e) if !float => e.coeffs.iter().map(|c| c.to_string()).collect(),
        AnyExpansion::Exact(e) => e.coeffs.iter().map(|c| c.to_f64().to_string()).collect(),
        AnyExpansion::Float(e) => e.coeffs.iter().map(|c| c.to_string()).collect(),
    }
}

pub fn expansion_table(e: &AnyExpansion, float: bool, fit: Option<&FitInfo>) -> String {
    let mut out = String::new();
    for (i, c) in rendered(e, float).iter().enumerate() {
        let _ = writeln!(out, "s_{i} = {c}");
    }
    if let Some(fit) = fit {
        let _ = writeln!(out, "# least-squares fit: residual {:e}, condition {:e}", fit.residual, fit.condition);
    }
    out
}

/// Both routes to the coefficients of `d_c f`, truncated at `N - 2`.
pub struct DeriveReport {
    pub via_recurrence: AnyExpansion,
    pub direct: AnyExpansion,
}

impl DeriveReport {
    pub fn max_difference(&self) -> f64 {
        let (a, b) = (to_f64(&self.via_recurrence), to_f64(&self.direct));
        a.max_coeff_diff(&b, a.coeffs.len())
    }

    pub fn exact_match(&self) -> Option<bool> {
        match (&self.via_recurrence, &self.direct) {
            (AnyExpansion::Exact(a), AnyExpansion::Exact(b)) => Some(a.coeffs == b.coeffs),
            _ => None,
        }
    }

    pub fn table(&self, float: bool) -> String {
        let a = rendered(&self.via_recurrence, float);
        let b = rendered(&self.direct, float);
        let mut out = String::from("n\tfrom s_n\tdirect\tdifference\n");
        for i in 0..a.len() {
            let diff = match (&self.via_recurrence, &self.direct) {
                (AnyExpansion::Exact(x), AnyExpansion::Exact(y)) if !float => (&x.coeffs[i] - &y.coeffs[i]).to_string(),
                _ => {
                    let (x, y) = (to_f64(&self.via_recurrence), to_f64(&self.direct));
                    (&x.coeffs[i] - &y.coeffs[i]).to_string()
                }
            };
            let _ = writeln!(out, "{i}\t{}\t{}\t{diff}", a[i], b[i]);
        }
        out
    }
}

fn to_f64(e: &AnyExpansion) -> SphericalExpansion<f64> {
    match e {
        AnyExpansion::Exact(e) => e.to_f64(),
        AnyExpansion::Float(e) => e.clone(),
    }
}

pub fn derive(f: &Lowered, q0: &Point, n: usize) -> Result<DeriveReport> {
    if n < 2 {
        return Err(Error::TruncationTooShort(n));
    }
    let df = match f {
        Lowered::Exact(f) => Lowered::Exact(f.slice_derivative()),
        Lowered::Float(f) => Lowered::Float(f.slice_derivative()),
        Lowered::Numeric(nf) => return Err(Error::NumericOnly(nf.label.clone())),
    };
    let (e, _) = expand(f, q0, n)?;
    let via = match &e {
        AnyExpansion::Exact(e) => AnyExpansion::Exact(derivative_coefficients(e)?),
        AnyExpansion::Float(e) => AnyExpansion::Float(derivative_coefficients(e)?),
    };
    let (direct, _) = expand(&df, q0, n - 2)?;
    Ok(DeriveReport { via_recurrence: via, direct })
}

pub fn eval(f: &Lowered, x: &Point) -> Result<Point> {
    match (f, x) {
        (Lowered::Exact(f), Point::Exact(q)) => match f.evaluate(q) {
            Ok(v) => Ok(Point::Exact(v)),
            Err(Error::Inexact) => Ok(Point::Float(f.evaluate_f64(&q.to_f64())?)),
            Err(e) => Err(e),
        },
        (f, x) => Ok(Point::Float(f.evaluate_f64(&x.to_f64())?)),
    }
}

/// Partial sum of an expansion at `x`.
pub fn eval_expansion(e: &AnyExpansion, x: &Point) -> Point {
    match (e, x) {
        (AnyExpansion::Exact(e), Point::Exact(q)) => Point::Exact(evaluate_expansion(e, q)),
        (e, x) => Point::Float(evaluate_expansion(&to_f64(e), &x.to_f64())),
    }
}

pub fn converge(f: &Lowered, q0: &Point, radius: f64, n: usize, grid: usize) -> Result<ConvergenceReport> {
    let ball = CassiniBall::new(q0.to_f64(), radius)?;
    let (e, _) = expand(f, q0, n)?;
    let e = to_f64(&e);
    let nf = f.to_numeric();
    convergence_report(&|x| nf.evaluate(x), &e, &ball, grid)
}

/// `{"error": code, "message": text, "offset": n}`, offset only when known.
pub fn error_json(e: &Error) -> String {
    let mut v = json!({ "error": e.code(), "message": e.to_string() });
    if let Some(off) = e.offset() {
        v["offset"] = json!(off);
    }
    v.to_string()
}
