//! C ABI over `slicereg`.
//!
//! Every entry point returns an [`SrStatus`]. On failure the message is
//! available from [`sr_last_error_message`] until the next call on the same
//! thread. Quaternions cross the boundary as `double[4]` in `w, x, y, z`
//! order.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use slicereg::cli::{self, Point};
use slicereg::expr::Lowered;
use slicereg::json::AnyExpansion;
use slicereg::{Error, Quaternion};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    NullPointer,
    InvalidUtf8,
    SyntaxError,
    UnknownIdentifier,
    NumericOnly,
    InvalidArgument,
    RealBasePoint,
    RealPointNotExtendable,
    NotAUnit,
    NotRegular,
    Inexact,
    TruncationTooShort,
    IllConditioned,
    TooFewSamples,
    StepTooLarge,
    DivisionByZero,
    NegativePowerAtZero,
    AllCoefficientsZero,
    /// A verification suite ran but some check failed.
    CheckFailed,
    Panic,
}

impl From<&Error> for SrStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DivisionByZero => SrStatus::DivisionByZero,
            Error::NegativePowerAtZero => SrStatus::NegativePowerAtZero,
            Error::RealPointNotExtendable => SrStatus::RealPointNotExtendable,
            Error::RealBasePoint => SrStatus::RealBasePoint,
            Error::NotAUnit => SrStatus::NotAUnit,
            Error::NotRegular => SrStatus::NotRegular,
            Error::AllCoefficientsZero(_) => SrStatus::AllCoefficientsZero,
            Error::Inexact => SrStatus::Inexact,
            Error::TruncationTooShort(_) => SrStatus::TruncationTooShort,
            Error::StepTooLarge { .. } => SrStatus::StepTooLarge,
            Error::IllConditioned(_) => SrStatus::IllConditioned,
            Error::TooFewSamples { .. } => SrStatus::TooFewSamples,
            Error::Syntax { .. } => SrStatus::SyntaxError,
            Error::UnknownIdentifier { .. } => SrStatus::UnknownIdentifier,
            Error::NumericOnly(_) => SrStatus::NumericOnly,
            Error::InvalidArgument(_) => SrStatus::InvalidArgument,
        }
    }
}

/// Opaque parsed function.
pub struct SrFunction(Lowered);

thread_local! {
    static LAST_ERROR: RefCell<Option<(CString, i64)>> = const { RefCell::new(None) };
}

fn set_error(msg: &str, offset: i64) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some((c, offset)));
}

fn fail(status: SrStatus, msg: &str) -> SrStatus {
    set_error(msg, -1);
    status
}

fn guard(f: impl FnOnce() -> Result<SrStatus, SrStatus>) -> SrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) | Ok(Err(s)) => s,
        Err(_) => fail(SrStatus::Panic, "internal panic"),
    }
}

fn lib_err(e: Error) -> SrStatus {
    set_error(&e.to_string(), e.offset().map_or(-1, |o| o as i64));
    SrStatus::from(&e)
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, SrStatus> {
    if p.is_null() {
        return Err(fail(SrStatus::NullPointer, &format!("`{name}` is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(SrStatus::InvalidUtf8, &format!("`{name}` is not UTF-8")))
}

unsafe fn quat_arg(p: *const f64, name: &str) -> Result<Quaternion<f64>, SrStatus> {
    if p.is_null() {
        return Err(fail(SrStatus::NullPointer, &format!("`{name}` is null")));
    }
    let a = std::slice::from_raw_parts(p, 4);
    Ok(Quaternion::from_array([a[0], a[1], a[2], a[3]]))
}

fn null(name: &str) -> SrStatus {
    fail(SrStatus::NullPointer, &format!("`{name}` is null"))
}

/// Message of the last failed call on this thread, or NULL. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn sr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |(m, _)| m.as_ptr()))
}

/// Byte offset of the last syntax error on this thread, or -1.
#[no_mangle]
pub extern "C" fn sr_last_error_offset() -> i64 {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(-1, |(_, o)| *o))
}

/// Parses `text` into a new function handle stored in `*out`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_function_parse(text: *const c_char, out: *mut *mut SrFunction) -> SrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = str_arg(text, "text")?;
        let f = cli::parse_function(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(SrFunction(f)));
        Ok(SrStatus::Ok)
    })
}

/// Releases a handle from [`sr_function_parse`]. NULL is ignored.
///
/// # Safety
/// `f` must come from `sr_function_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sr_function_free(f: *mut SrFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `out = f(x)` in floating point.
///
/// # Safety
/// `f` must be a live handle; `x` and `out` must point to 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn sr_function_eval(f: *const SrFunction, x: *const f64, out: *mut f64) -> SrStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("f"))?;
        let x = quat_arg(x, "x")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = f.0.evaluate_f64(&x).map_err(lib_err)?;
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&v.to_array());
        Ok(SrStatus::Ok)
    })
}

/// Spherical coefficients `s_0..=s_n` at `q0`, written to `out` as
/// `4 (n + 1)` doubles.
///
/// # Safety
/// `f` must be a live handle, `q0` must point to 4 doubles and `out` to
/// `4 (n + 1)` doubles.
#[no_mangle]
pub unsafe extern "C" fn sr_spherical_coefficients(
    f: *const SrFunction,
    q0: *const f64,
    n: usize,
    out: *mut f64,
) -> SrStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("f"))?;
        let q0 = quat_arg(q0, "q0")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (e, _) = cli::expand(&f.0, &Point::Float(q0), n).map_err(lib_err)?;
        let coeffs = match e {
            AnyExpansion::Exact(e) => e.to_f64().coeffs,
            AnyExpansion::Float(e) => e.coeffs,
        };
        let dst = std::slice::from_raw_parts_mut(out, 4 * (n + 1));
        for (chunk, c) in dst.chunks_mut(4).zip(&coeffs) {
            chunk.copy_from_slice(&c.to_array());
        }
        Ok(SrStatus::Ok)
    })
}

/// Expansion of `f` at `q0` (both in expression syntax) as JSON
/// `{"q0", "N", "coeffs"}`; exact rationals unless `as_float` is nonzero.
/// Free the result with [`sr_string_free`].
///
/// # Safety
/// `f` and `q0` must be nul-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_expand_json(
    f: *const c_char,
    q0: *const c_char,
    n: usize,
    as_float: i32,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let f = cli::parse_function(str_arg(f, "f")?).map_err(lib_err)?;
        let q0 = Point::parse(str_arg(q0, "q0")?).map_err(lib_err)?;
        let (e, _) = cli::expand(&f, &q0, n).map_err(lib_err)?;
        let text = cli::expansion_json(&e, as_float != 0).to_string();
        *out = CString::new(text).expect("JSON has no nul").into_raw();
        Ok(SrStatus::Ok)
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs a verification suite. `kmax < 0` selects the suite default.
/// Returns `SR_STATUS_OK` iff every check passed; the counts are written
/// when the pointers are non-NULL.
///
/// # Safety
/// `suite` must be a nul-terminated string; `passed` and `total` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn sr_verify_suite(
    suite: *const c_char,
    seed: u64,
    kmax: i32,
    passed: *mut usize,
    total: *mut usize,
) -> SrStatus {
    guard(|| {
        let suite = str_arg(suite, "suite")?;
        let k = usize::try_from(kmax).ok();
        let rep = slicereg::verify::run_suite(suite, seed, k).map_err(lib_err)?;
        if let Some(p) = passed.as_mut() {
            *p = rep.passed_count();
        }
        if let Some(t) = total.as_mut() {
            *t = rep.checks.len();
        }
        if rep.all_passed() {
            Ok(SrStatus::Ok)
        } else {
            let first = rep.failures().next().map(|c| c.name.clone()).unwrap_or_default();
            Err(fail(SrStatus::CheckFailed, &format!("suite {suite}: first failure {first}")))
        }
    })
}
