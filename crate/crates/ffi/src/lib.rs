//! C interface to `imtheta`.
//!
//! Polynomials cross the boundary as opaque handles created by
//! `imt_poly_parse` / `imt_poly_from_json` and released with
//! `imt_poly_free`. Every fallible call returns an [`ImtStatus`] and writes
//! its result through an out-pointer; on failure `imt_last_error_message`
//! describes the error. Strings returned by the library are freed with
//! `imt_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use imtheta::json::{laurent_to_json, poly_from_json, poly_to_json};
use imtheta::{image, Error, FieldTag, LaurentPoly, Poly};

/// Opaque polynomial in `z_1..z_n, u_1..u_n`.
pub struct ImtPoly(Poly);

/// Opaque Laurent polynomial.
pub struct ImtLaurent(LaurentPoly);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidField = 3,
    SyntaxError = 4,
    IndexOutOfRange = 5,
    MismatchedContext = 6,
    PositiveCharacteristic = 7,
    ZeroDenominator = 8,
    InvalidInput = 9,
    InternalError = 10,
}

impl From<&Error> for ImtStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidField(_) => ImtStatus::InvalidField,
            Error::Syntax { .. } | Error::ImaginaryInNonGaussianField => ImtStatus::SyntaxError,
            Error::IndexOutOfRange { .. } => ImtStatus::IndexOutOfRange,
            Error::MismatchedContext(_) => ImtStatus::MismatchedContext,
            Error::PositiveCharacteristic(_) => ImtStatus::PositiveCharacteristic,
            Error::ZeroDenominator => ImtStatus::ZeroDenominator,
            Error::OracleDisagreement(_) => ImtStatus::InternalError,
            _ => ImtStatus::InvalidInput,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

enum Failure {
    Status(ImtStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ImtStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ImtStatus::Ok,
        Ok(Err(Failure::Status(status, msg))) => {
            set_error(msg);
            status
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            ImtStatus::from(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            ImtStatus::InternalError
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Status(ImtStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::Status(ImtStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn read_poly<'a>(p: *const ImtPoly, what: &str) -> Result<&'a Poly, Failure> {
    p.as_ref()
        .map(|h| &h.0)
        .ok_or_else(|| Failure::Status(ImtStatus::NullArgument, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Status(ImtStatus::NullArgument, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Status(ImtStatus::NullArgument, "output pointer is null".into()));
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

/// Parses an expression such as `"u1^2*z1^4"` in `nvars` variable pairs
/// over `field` (`"rational"`, `"gaussian"` or `"fp:P"`).
///
/// # Safety
/// `src` and `field` must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_poly_parse(
    src: *const c_char,
    nvars: usize,
    field: *const c_char,
    out: *mut *mut ImtPoly,
) -> ImtStatus {
    guard(|| {
        let src = read_str(src, "src")?;
        let field: FieldTag = read_str(field, "field")?.parse()?;
        let p = imtheta::parse_poly(src, nvars, field)?;
        write_out(out, ImtPoly(p))
    })
}

/// Reads the JSON polynomial format.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_poly_from_json(json: *const c_char, out: *mut *mut ImtPoly) -> ImtStatus {
    guard(|| {
        let p = poly_from_json(read_str(json, "json")?)?;
        write_out(out, ImtPoly(p))
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn imt_poly_free(p: *mut ImtPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn imt_poly_nvars(p: *const ImtPoly) -> usize {
    p.as_ref().map_or(0, |h| h.0.nvars())
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_poly_to_string(p: *const ImtPoly, out: *mut *mut c_char) -> ImtStatus {
    guard(|| write_string(out, read_poly(p, "p")?.to_string()))
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_poly_to_json(p: *const ImtPoly, out: *mut *mut c_char) -> ImtStatus {
    guard(|| write_string(out, poly_to_json(read_poly(p, "p")?)))
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_poly_add(a: *const ImtPoly, b: *const ImtPoly, out: *mut *mut ImtPoly) -> ImtStatus {
    guard(|| {
        let sum = read_poly(a, "a")?.checked_add(read_poly(b, "b")?)?;
        write_out(out, ImtPoly(sum))
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_poly_mul(a: *const ImtPoly, b: *const ImtPoly, out: *mut *mut ImtPoly) -> ImtStatus {
    guard(|| {
        let prod = read_poly(a, "a")?.checked_mul(read_poly(b, "b")?)?;
        write_out(out, ImtPoly(prod))
    })
}

/// `E(f)`: every `u_i` acts as `d/dz_i`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_eval_e(p: *const ImtPoly, out: *mut *mut ImtPoly) -> ImtStatus {
    guard(|| write_out(out, ImtPoly(image::eval_e(read_poly(p, "p")?))))
}

/// `Z(f)`, a Laurent polynomial in `z`. Characteristic zero only.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_eval_z(p: *const ImtPoly, out: *mut *mut ImtLaurent) -> ImtStatus {
    guard(|| write_out(out, ImtLaurent(image::eval_z(read_poly(p, "p")?)?)))
}

/// Laplace transform in `z`, a Laurent polynomial in `u`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_laplace(p: *const ImtPoly, out: *mut *mut ImtLaurent) -> ImtStatus {
    guard(|| write_out(out, ImtLaurent(image::laplace_transform(read_poly(p, "p")?)?)))
}

/// Decides whether `p` lies in the image of the `Theta` family.
///
/// # Safety
/// `p` must be a live handle; `is_member` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_member_theta(p: *const ImtPoly, is_member: *mut bool) -> ImtStatus {
    guard(|| {
        let report = image::member_theta(read_poly(p, "p")?)?;
        if is_member.is_null() {
            return Err(Failure::Status(ImtStatus::NullArgument, "output pointer is null".into()));
        }
        *is_member = report.is_member;
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a live Laurent handle.
#[no_mangle]
pub unsafe extern "C" fn imt_laurent_free(p: *mut ImtLaurent) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Renders with variable letter `z`, or `u` when `use_u` is set.
///
/// # Safety
/// `p` must be a live Laurent handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_laurent_to_string(p: *const ImtLaurent, use_u: bool, out: *mut *mut c_char) -> ImtStatus {
    guard(|| {
        let l = p
            .as_ref()
            .ok_or_else(|| Failure::Status(ImtStatus::NullArgument, "p is null".into()))?;
        write_string(out, l.0.display_with(if use_u { 'u' } else { 'z' }))
    })
}

/// # Safety
/// `p` must be a live Laurent handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn imt_laurent_to_json(p: *const ImtLaurent, out: *mut *mut c_char) -> ImtStatus {
    guard(|| {
        let l = p
            .as_ref()
            .ok_or_else(|| Failure::Status(ImtStatus::NullArgument, "p is null".into()))?;
        write_string(out, laurent_to_json(&l.0))
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn imt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn imt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(s: *mut c_char) -> String {
        let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
        imt_string_free(s);
        out
    }

    #[test]
    fn status_mapping() {
        assert_eq!(ImtStatus::from(&Error::ZeroDenominator), ImtStatus::ZeroDenominator);
        assert_eq!(ImtStatus::from(&Error::NotUnimodular), ImtStatus::InvalidInput);
    }

    #[test]
    fn parse_and_print() {
        unsafe {
            let mut p = ptr::null_mut();
            let src = cstr("u1^2*z1^4");
            let field = cstr("rational");
            assert_eq!(imt_poly_parse(src.as_ptr(), 1, field.as_ptr(), &mut p), ImtStatus::Ok);
            assert!(imt_last_error_message().is_null());
            let mut e = ptr::null_mut();
            assert_eq!(imt_eval_e(p, &mut e), ImtStatus::Ok);
            let mut s = ptr::null_mut();
            assert_eq!(imt_poly_to_string(e, &mut s), ImtStatus::Ok);
            assert_eq!(take_string(s), "12*z1^2");
            imt_poly_free(e);
            imt_poly_free(p);
        }
    }
}
