//! JSON forms: quaternions as `[w, x, y, z]` (strings of rationals, or
//! numbers for floats); expansions as `{"q0", "N", "coeffs"}`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expansion::SphericalExpansion;
use crate::quaternion::{Quaternion, Rational, Scalar};

/// Scalars with a JSON form.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        let s = v.as_str().ok_or_else(|| bad(format!("expected a rational string, got {v}")))?;
        let r: Rational = s.trim().parse().map_err(|_| bad(format!("`{s}` is not a rational")))?;
        Ok(r)
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64().ok_or_else(|| bad(format!("expected a number, got {v}")))
    }
}

fn bad(msg: String) -> Error {
    Error::InvalidArgument(msg)
}

pub fn quaternion_to_json<T: JsonScalar>(q: &Quaternion<T>) -> Value {
    Value::Array(q.components().iter().map(|c| c.to_json()).collect())
}

pub fn quaternion_from_json<T: JsonScalar>(v: &Value) -> Result<Quaternion<T>> {
    let a = v.as_array().filter(|a| a.len() == 4).ok_or_else(|| bad(format!("expected 4 components, got {v}")))?;
    Ok(Quaternion::new(T::from_json(&a[0])?, T::from_json(&a[1])?, T::from_json(&a[2])?, T::from_json(&a[3])?))
}

pub fn expansion_to_json<T: JsonScalar>(e: &SphericalExpansion<T>) -> Value {
    json!({
        "q0": quaternion_to_json(&e.q0),
        "N": e.truncation(),
        "coeffs": e.coeffs.iter().map(quaternion_to_json).collect::<Vec<_>>(),
    })
}

pub fn expansion_from_json<T: JsonScalar>(v: &Value) -> Result<SphericalExpansion<T>> {
    let q0 = quaternion_from_json(v.get("q0").ok_or_else(|| bad("missing `q0`".into()))?)?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing `coeffs` array".into()))?
        .iter()
        .map(quaternion_from_json)
        .collect::<Result<Vec<_>>>()?;
    let e = SphericalExpansion::new(q0, coeffs)?;
    if let Some(n) = v.get("N") {
        if n.as_u64() != Some(e.truncation() as u64) {
            return Err(bad(format!("`N` = {n} does not match {} coefficients", e.coeffs.len())));
        }
    }
    Ok(e)
}

/// Reads either an exact or a float expansion, decided by the type of `q0[0]`.
pub fn expansion_from_json_any(v: &Value) -> Result<AnyExpansion> {
    match v.get("q0").and_then(|q| q.get(0)) {
        Some(Value::String(_)) => Ok(AnyExpansion::Exact(expansion_from_json(v)?)),
        _ => Ok(AnyExpansion::Float(expansion_from_json(v)?)),
    }
}

#[derive(Clone, Debug)]
pub enum AnyExpansion {
    Exact(SphericalExpansion<Rational>),
    Float(SphericalExpansion<f64>),
}
