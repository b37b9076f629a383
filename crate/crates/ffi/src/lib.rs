//! C ABI over `chowquot`. Objects cross the boundary as opaque handles, every
//! entry point returns a `CqStatus`, and results come back through out-pointers.
//! Strings returned to C are owned by the caller and released with
//! `cq_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chowquot::certify::{self, KECertificate};
use chowquot::families::{self, FamilySpec};
use chowquot::log_canonical;
use chowquot::rational;

/// Status codes returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    ComputeError = 4,
    Panic = 5,
}

/// Opaque family handle.
pub struct CqFamily(FamilySpec);

/// Opaque certificate handle.
pub struct CqCertificate(KECertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type Fallible<T> = Result<T, (CqStatus, String)>;

fn guard(body: impl FnOnce() -> Fallible<()>) -> CqStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CqStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CqStatus::Panic
        }
    }
}

fn null(what: &str) -> (CqStatus, String) {
    (CqStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `s` must be null or point to a nul-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Fallible<&'a str> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (CqStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Fallible<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior nul").into_raw()
}

/// # Safety
/// `h` must be null or a live handle from this library.
unsafe fn family<'a>(h: *const CqFamily) -> Fallible<&'a FamilySpec> {
    h.as_ref().map(|f| &f.0).ok_or_else(|| null("family"))
}

/// Parses a family selector such as `hypersurface:n=3,alpha=1,beta=2`.
///
/// # Safety
/// `selector` must be a nul-terminated string; `out` must be valid for writes.
/// The handle is released with `cq_family_free`.
#[no_mangle]
pub unsafe extern "C" fn cq_family_parse(selector: *const c_char, out: *mut *mut CqFamily) -> CqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let s = read_str(selector, "selector")?;
        let f: FamilySpec = s.parse().map_err(|e: families::FamilyError| (CqStatus::InvalidInput, e.to_string()))?;
        out.write(Box::into_raw(Box::new(CqFamily(f))));
        Ok(())
    })
}

/// # Safety
/// `family` must be null or a handle from `cq_family_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cq_family_free(family: *mut CqFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Complex dimension of the variety.
///
/// # Safety
/// `family` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cq_family_dimension(family: *const CqFamily, out: *mut u32) -> CqStatus {
    guard(|| write(out, self::family(family)?.dim(), "out"))
}

/// # Safety
/// `family` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cq_family_is_fano(family: *const CqFamily, out: *mut bool) -> CqStatus {
    guard(|| write(out, self::family(family)?.is_fano(), "out"))
}

/// Chow quotient pair of the family as a JSON string.
///
/// # Safety
/// `family` must be a live handle; `out` must be valid for writes. The string
/// is released with `cq_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cq_chow_boundary_json(family: *const CqFamily, out: *mut *mut c_char) -> CqStatus {
    guard(|| {
        let f = self::family(family)?;
        let pair = families::chow_boundary(f).map_err(|e| (CqStatus::ComputeError, e.to_string()))?;
        let json = serde_json::to_string(&pair).map_err(|e| (CqStatus::ComputeError, e.to_string()))?;
        write(out, to_c_string(json), "out")
    })
}

/// Runs the Kähler–Einstein certification chain.
///
/// # Safety
/// `family` must be a live handle; `out` must be valid for writes. The handle
/// is released with `cq_certificate_free`.
#[no_mangle]
pub unsafe extern "C" fn cq_certify(family: *const CqFamily, out: *mut *mut CqCertificate) -> CqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let c = certify::certify(self::family(family)?).map_err(|e| (CqStatus::ComputeError, e.to_string()))?;
        out.write(Box::into_raw(Box::new(CqCertificate(c))));
        Ok(())
    })
}

/// # Safety
/// `certificate` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cq_certificate_is_certified(certificate: *const CqCertificate, out: *mut bool) -> CqStatus {
    guard(|| {
        let c = certificate.as_ref().ok_or_else(|| null("certificate"))?;
        write(out, c.0.is_certified(), "out")
    })
}

/// # Safety
/// `certificate` must be a live handle; `out` must be valid for writes. The
/// string is released with `cq_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cq_certificate_to_json(certificate: *const CqCertificate, out: *mut *mut c_char) -> CqStatus {
    guard(|| {
        let c = certificate.as_ref().ok_or_else(|| null("certificate"))?;
        let json = serde_json::to_string(&c.0).map_err(|e| (CqStatus::ComputeError, e.to_string()))?;
        write(out, to_c_string(json), "out")
    })
}

/// # Safety
/// `certificate` must be null or a handle from `cq_certify` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cq_certificate_free(certificate: *mut CqCertificate) {
    if !certificate.is_null() {
        drop(Box::from_raw(certificate));
    }
}

/// glct bound of `(P^2, B_γ)` for `γ` given as `"p/q"`; the result is `"p/q"` or `"inf"`.
///
/// # Safety
/// `gamma` must be a nul-terminated string; `out` must be valid for writes.
/// The string is released with `cq_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cq_glct_bound(gamma: *const c_char, out: *mut *mut c_char) -> CqStatus {
    guard(|| {
        let g = rational::parse_rational(read_str(gamma, "gamma")?).map_err(|e| (CqStatus::InvalidInput, e.to_string()))?;
        let bound = log_canonical::glct_bound(&g).map_err(|e| (CqStatus::InvalidInput, e.to_string()))?;
        write(out, to_c_string(bound.to_string()), "out")
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn cq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
