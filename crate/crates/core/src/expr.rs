//! Expression language for building slice functions.
//!
//! `*` is the slice product and `^n` the slice power, never the pointwise
//! product. They agree with pointwise operations only when the left factor
//! is slice preserving (e.g. `x^3`, real polynomials).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::NumericSliceFunction;
use crate::quaternion::{Quaternion, Rational, Scalar};
use crate::slicefn::{Sign, SliceFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    I,
    J,
    K,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Rational(Rational),
    Float(f64),
}

/// A nonnegative number times an optional imaginary axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Literal {
    pub value: Number,
    pub axis: Option<Axis>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Lit(Literal),
    X,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Delta(Box<Expr>),
    Ellp(Box<Expr>),
    Ellm(Box<Expr>),
    Jfun,
    Exp,
}

/// A lowered expression, in the most exact representation available.
#[derive(Clone, Debug)]
pub enum Lowered {
    Exact(SliceFunction<Rational>),
    Float(SliceFunction<f64>),
    Numeric(NumericSliceFunction),
}

impl Lowered {
    pub fn evaluate_f64(&self, x: &Quaternion<f64>) -> Result<Quaternion<f64>> {
        match self {
            Lowered::Exact(f) => f.evaluate_f64(x),
            Lowered::Float(f) => f.evaluate_f64(x),
            Lowered::Numeric(f) => f.evaluate(x),
        }
    }

    pub fn to_numeric(&self) -> NumericSliceFunction {
        match self {
            Lowered::Exact(f) => NumericSliceFunction::from_slice_function(f),
            Lowered::Float(f) => NumericSliceFunction::from_slice_function(f),
            Lowered::Numeric(f) => f.clone(),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.expected("operator or end of input"));
    }
    Ok(e)
}

/// Parses an expression that must denote a constant, e.g. a base point.
pub fn parse_quaternion(text: &str) -> Result<Lowered> {
    let e = parse_expression(text)?;
    if !e.is_constant() {
        return Err(Error::InvalidArgument(format!("`{text}` is not a constant quaternion")));
    }
    e.lower()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expected(&self, what: &str) -> Error {
        Error::Syntax { offset: self.pos, expected: what.to_string() }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.expected(&format!("`{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.expected("nonnegative integer exponent"));
            }
            let n = digits.parse::<u32>().map_err(|_| Error::Syntax {
                offset: start,
                expected: "exponent below 2^32".into(),
            })?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn is_ident_byte(b: u8) -> bool {
        b.is_ascii_alphanumeric() || b == b'_'
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            _ => Err(self.expected("operand")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let int = self.digits();
        let mut float = false;
        let mut text = int.clone();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac = self.digits();
            if int.is_empty() && frac.is_empty() {
                return Err(Error::Syntax { offset: start, expected: "digits".into() });
            }
            text = format!("{text}.{frac}");
            float = true;
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            let mut sign = "";
            if let Some(&s) = self.src.get(self.pos) {
                if s == b'+' || s == b'-' {
                    sign = if s == b'-' { "-" } else { "" };
                    self.pos += 1;
                }
            }
            let exp = self.digits();
            if exp.is_empty() {
                self.pos = save;
            } else {
                text = format!("{text}e{sign}{exp}");
                float = true;
            }
        }
        let value = if float {
            let v: f64 = text.parse().map_err(|_| Error::Syntax { offset: start, expected: "number".into() })?;
            if !v.is_finite() {
                return Err(Error::Syntax { offset: start, expected: "finite number".into() });
            }
            Number::Float(v)
        } else {
            let num: BigInt = int.parse().expect("digits");
            let mut den = BigInt::one();
            if self.src.get(self.pos) == Some(&b'/') {
                self.pos += 1;
                let d = self.digits();
                if d.is_empty() {
                    return Err(self.expected("denominator"));
                }
                den = d.parse().expect("digits");
                if den.is_zero() {
                    return Err(Error::Syntax { offset: self.pos - d.len(), expected: "nonzero denominator".into() });
                }
            }
            Number::Rational(Rational::new(num, den))
        };
        let mut axis = None;
        if let Some(&c) = self.src.get(self.pos) {
            let next_is_ident = self.src.get(self.pos + 1).is_some_and(|&b| Self::is_ident_byte(b));
            if !next_is_ident {
                axis = axis_of(c);
                if axis.is_some() {
                    self.pos += 1;
                }
            }
        }
        Ok(Expr::Lit(Literal { value, axis }))
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len() && Self::is_ident_byte(self.src[self.pos]) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let arity = match name {
            "x" => return Ok(Expr::X),
            "i" | "j" | "k" => {
                return Ok(Expr::Lit(Literal {
                    value: Number::Rational(Rational::one()),
                    axis: axis_of(name.as_bytes()[0]),
                }))
            }
            "Delta" | "ellp" | "ellm" => 1,
            "Jfun" | "exp" => 0,
            _ => return Err(Error::UnknownIdentifier { name: name.to_string(), offset: start }),
        };
        self.expect(b'(')?;
        let arg = if arity == 1 { Some(Box::new(self.expr()?)) } else { None };
        self.expect(b')')?;
        Ok(match (name, arg) {
            ("Delta", Some(a)) => Expr::Delta(a),
            ("ellp", Some(a)) => Expr::Ellp(a),
            ("ellm", Some(a)) => Expr::Ellm(a),
            ("Jfun", None) => Expr::Jfun,
            _ => Expr::Exp,
        })
    }
}

fn axis_of(c: u8) -> Option<Axis> {
    match c {
        b'i' => Some(Axis::I),
        b'j' => Some(Axis::J),
        b'k' => Some(Axis::K),
        _ => None,
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::I => "i",
            Axis::J => "j",
            Axis::K => "k",
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = self.axis.map(|a| a.to_string()).unwrap_or_default();
        match &self.value {
            Number::Rational(r) if r.is_one() && self.axis.is_some() => write!(f, "{axis}"),
            Number::Rational(r) => write!(f, "{r}{axis}"),
            Number::Float(v) => write!(f, "{v:?}{axis}"),
        }
    }
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Lit(l) => write!(f, "{l}"),
            Expr::X => write!(f, "x"),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " {} ", if matches!(self, Expr::Add(..)) { '+' } else { '-' })?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            Expr::Pow(a, n) => {
                a.write_at(f, 5)?;
                write!(f, "^{n}")
            }
            Expr::Delta(a) => write!(f, "Delta({a})"),
            Expr::Ellp(a) => write!(f, "ellp({a})"),
            Expr::Ellm(a) => write!(f, "ellm({a})"),
            Expr::Jfun => write!(f, "Jfun()"),
            Expr::Exp => write!(f, "exp()"),
        }
    }

    fn any(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.any(pred) || b.any(pred),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Delta(a) | Expr::Ellp(a) | Expr::Ellm(a) => a.any(pred),
            _ => false,
        }
    }

    pub fn is_numeric_only(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Exp))
    }

    pub fn has_float(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Lit(Literal { value: Number::Float(_), .. })))
    }

    /// True when no `x`, `Jfun` or `exp` occurs outside built-in arguments.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Lit(_) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.is_constant() && b.is_constant(),
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_constant(),
            _ => false,
        }
    }

    /// Lowers to exact stems when possible, then float stems, then closures.
    pub fn lower(&self) -> Result<Lowered> {
        if self.is_numeric_only() {
            Ok(Lowered::Numeric(self.to_numeric()?))
        } else if self.has_float() {
            Ok(Lowered::Float(self.to_float()?))
        } else {
            Ok(Lowered::Exact(self.to_exact()?))
        }
    }

    pub fn to_exact(&self) -> Result<SliceFunction<Rational>> {
        if self.is_numeric_only() {
            return Err(Error::NumericOnly(self.to_string()));
        }
        if self.has_float() {
            return Err(Error::Inexact);
        }
        Ok(self.lower_stems::<Rational>()?.with_label(self.to_string()))
    }

    pub fn to_float(&self) -> Result<SliceFunction<f64>> {
        if self.is_numeric_only() {
            return Err(Error::NumericOnly(self.to_string()));
        }
        Ok(self.lower_stems::<f64>()?.with_label(self.to_string()))
    }

    pub fn to_numeric(&self) -> Result<NumericSliceFunction> {
        let mut nf = self.lower_closures()?;
        nf.label = self.to_string();
        Ok(nf)
    }

    fn lower_closures(&self) -> Result<NumericSliceFunction> {
        if !self.is_numeric_only() {
            return Ok(NumericSliceFunction::from_slice_function(&self.to_float()?));
        }
        Ok(match self {
            Expr::Exp => NumericSliceFunction::exp(),
            Expr::Add(a, b) => a.lower_closures()?.add(&b.lower_closures()?),
            Expr::Sub(a, b) => a.lower_closures()?.sub(&b.lower_closures()?),
            Expr::Mul(a, b) => a.lower_closures()?.slice_product(&b.lower_closures()?),
            Expr::Neg(a) => a.lower_closures()?.neg(),
            Expr::Pow(a, n) => a.lower_closures()?.power(*n),
            // built-in arguments are constants, so exp() cannot appear there legally
            _ => return Err(Error::InvalidArgument(format!("`{self}` needs a constant argument"))),
        })
    }

    fn lower_stems<T: Scalar>(&self) -> Result<SliceFunction<T>> {
        Ok(match self {
            Expr::Lit(l) => SliceFunction::constant(literal_value::<T>(l)),
            Expr::X => SliceFunction::variable(),
            Expr::Add(a, b) => &a.lower_stems::<T>()? + &b.lower_stems::<T>()?,
            Expr::Sub(a, b) => &a.lower_stems::<T>()? - &b.lower_stems::<T>()?,
            Expr::Mul(a, b) => a.lower_stems::<T>()?.slice_product(&b.lower_stems::<T>()?),
            Expr::Neg(a) => -&a.lower_stems::<T>()?,
            Expr::Pow(a, n) => a.lower_stems::<T>()?.power(*n),
            Expr::Delta(a) => SliceFunction::char_poly(&a.constant_arg::<T>()?)?,
            Expr::Ellp(a) => SliceFunction::idempotent(&a.constant_arg::<T>()?, Sign::Plus)?,
            Expr::Ellm(a) => SliceFunction::idempotent(&a.constant_arg::<T>()?, Sign::Minus)?,
            Expr::Jfun => SliceFunction::j_function(),
            Expr::Exp => return Err(Error::NumericOnly("exp()".into())),
        })
    }

    fn constant_arg<T: Scalar>(&self) -> Result<Quaternion<T>> {
        if !self.is_constant() {
            return Err(Error::InvalidArgument(format!("`{self}` is not a constant quaternion")));
        }
        let f = self.lower_stems::<T>()?;
        Ok(f.f0().coeff(0, 0))
    }
}

fn literal_value<T: Scalar>(l: &Literal) -> Quaternion<T> {
    let v = match &l.value {
        Number::Rational(r) => T::from_rational(r),
        Number::Float(x) => T::from_rational(&Rational::from_float(*x).expect("finite literal")),
    };
    let z = T::zero;
    match l.axis {
        None => Quaternion::new(v, z(), z(), z()),
        Some(Axis::I) => Quaternion::new(z(), v, z(), z()),
        Some(Axis::J) => Quaternion::new(z(), z(), v, z()),
        Some(Axis::K) => Quaternion::new(z(), z(), z(), v),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expression(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(w: (i64, i64), x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> Quaternion<Rational> {
        Quaternion::from_ratios([w, x, y, z])
    }

    #[test]
    fn example_polynomial() {
        let f = parse_expression("x^3 - x^2*(i+j+k) + x*(i-j+k) + 1").unwrap().to_exact().unwrap();
        let p = SliceFunction::from_polynomial(&[
            Quaternion::from_ints(1, 0, 0, 0),
            Quaternion::from_ints(0, 1, -1, 1),
            Quaternion::from_ints(0, -1, -1, -1),
            Quaternion::from_ints(1, 0, 0, 0),
        ]);
        assert_eq!(f, p);
    }

    #[test]
    fn delta_literal() {
        let f = parse_expression("Delta(1/2+1/2i)").unwrap().to_exact().unwrap();
        let q0 = q((1, 2), (1, 2), (0, 1), (0, 1));
        assert_eq!(f, SliceFunction::char_poly(&q0).unwrap());
        assert_eq!(f.evaluate(&q((1, 2), (0, 1), (1, 2), (0, 1))).unwrap(), Quaternion::zero());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(parse_expression("x*"), Err(Error::Syntax { offset: 2, expected: "operand".into() }));
        assert!(matches!(parse_expression("x + (1"), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse_expression("x x"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("x^-1"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("1/0"), Err(Error::Syntax { offset: 2, .. })));
        assert_eq!(
            parse_expression("x + foo(1)"),
            Err(Error::UnknownIdentifier { name: "foo".into(), offset: 4 })
        );
    }

    #[test]
    fn literals() {
        let e = parse_expression("1/2i").unwrap();
        assert_eq!(e.to_string(), "1/2i");
        let e = parse_expression("2.5e-1j").unwrap();
        assert_eq!(e, Expr::Lit(Literal { value: Number::Float(0.25), axis: Some(Axis::J) }));
        assert_eq!(parse_expression("1i").unwrap().to_string(), "i");
        assert_eq!(parse_expression("4/6").unwrap().to_string(), "2/3");
    }

    #[test]
    fn precedence() {
        let e = parse_expression("-x^2 + 1*x*2").unwrap();
        assert_eq!(e.to_string(), "-x^2 + 1*x*2");
        let e = parse_expression("a".replace('a', "(x - 1) - (x - 1)").as_str()).unwrap();
        assert_eq!(e.to_string(), "x - 1 - (x - 1)");
        assert_eq!(parse_expression("(-x)^2").unwrap().to_string(), "(-x)^2");
        assert_eq!(parse_expression("x*(x*x)").unwrap().to_string(), "x*(x*x)");
    }

    #[test]
    fn star_is_slice_product() {
        // (i x)(x j) pointwise differs from the slice product x^2 i j at non-real x
        let f = parse_expression("i*x*x*j").unwrap().to_exact().unwrap();
        let x = Quaternion::<Rational>::j();
        assert_eq!(f.evaluate(&x).unwrap(), Quaternion::from_ints(0, 0, 0, -1));
    }

    #[test]
    fn lowering_modes() {
        assert!(matches!(parse_expression("x + 1").unwrap().lower().unwrap(), Lowered::Exact(_)));
        assert!(matches!(parse_expression("x + 0.5").unwrap().lower().unwrap(), Lowered::Float(_)));
        assert!(matches!(parse_expression("x*exp()").unwrap().lower().unwrap(), Lowered::Numeric(_)));
        assert!(matches!(parse_expression("exp()").unwrap().to_exact(), Err(Error::NumericOnly(_))));
        assert!(matches!(parse_expression("Delta(x)").unwrap().lower(), Err(Error::InvalidArgument(_))));
        assert!(matches!(parse_expression("Delta(1)").unwrap().lower(), Err(Error::RealBasePoint)));
        assert!(matches!(parse_expression("ellp(2i)").unwrap().lower(), Err(Error::NotAUnit)));
        let f = parse_expression("ellp(j) + ellm(j)").unwrap().to_exact().unwrap();
        assert_eq!(f, SliceFunction::constant(Quaternion::one()));
        let j = parse_expression("Jfun()*Jfun()").unwrap().to_exact().unwrap();
        assert_eq!(j.evaluate(&Quaternion::i()).unwrap(), Quaternion::from_ints(-1, 0, 0, 0));
    }

    #[test]
    fn numeric_lowering_matches_exp() {
        let f = parse_expression("2*exp() - exp()").unwrap().lower().unwrap();
        let x = Quaternion::from_array([0.3, 0.0, 1.1, 0.0]);
        let v = f.evaluate_f64(&x).unwrap();
        let want = Quaternion::from_array([0.3f64.exp() * 1.1f64.cos(), 0.0, 0.3f64.exp() * 1.1f64.sin(), 0.0]);
        assert!(v.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn constants() {
        let c = parse_quaternion("1/2 + 3/4i - k").unwrap();
        let Lowered::Exact(c) = c else { panic!() };
        assert_eq!(c.f0().coeff(0, 0), q((1, 2), (3, 4), (0, 1), (-1, 1)));
        assert!(parse_quaternion("x").is_err());
    }

    fn literal() -> impl Strategy<Value = Literal> {
        let axis = prop_oneof![Just(None), Just(Some(Axis::I)), Just(Some(Axis::J)), Just(Some(Axis::K))];
        let value = prop_oneof![
            (0i64..50, 1i64..9).prop_map(|(n, d)| Number::Rational(Rational::from_ratio(n, d))),
            (0.0f64..1e6).prop_map(Number::Float),
        ];
        (value, axis).prop_map(|(value, axis)| Literal { value, axis })
    }

    fn expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            literal().prop_map(Expr::Lit),
            Just(Expr::X),
            Just(Expr::Jfun),
            Just(Expr::Exp),
            literal().prop_map(|l| Expr::Delta(Box::new(Expr::Lit(l)))),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (inner.clone(), 0u32..6).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
                inner.clone().prop_map(|a| Expr::Ellp(Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_print_roundtrip(e in expr()) {
            let text = e.to_string();
            let back = parse_expression(&text).unwrap();
            prop_assert_eq!(&back, &e);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
