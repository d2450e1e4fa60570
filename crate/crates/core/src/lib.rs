//! Exact stem calculus for quaternionic slice functions and their spherical
//! expansions.

pub mod cli;
pub mod error;
pub mod expansion;
pub mod expr;
pub mod json;
pub mod numeric;
pub mod quaternion;
pub mod random;
pub mod slicefn;
pub mod stem;
pub mod verify;

pub use error::{Error, Result};
pub use quaternion::{Quaternion, Rational, Scalar};
pub use slicefn::{Sign, SliceFunction};
pub use stem::{LaurentStem, StemPair, Var};
