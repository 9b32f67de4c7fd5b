//! C ABI over the `tridistill` core.
//!
//! Every function returns a [`TdStatus`]; on failure the message is kept in a
//! thread-local buffer readable through [`td_last_error_message`]. Codes are
//! passed around as opaque [`TdCode`] handles that must be released with
//! [`td_code_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tridistill::cczsearch::rational_to_f64;
use tridistill::codefile::CodeFile;
use tridistill::protocol::trio_report;
use tridistill::tables::shipped;
use tridistill::trio::{verify_generalized, z_distance, DistanceRequest, GenTrioMatrix};
use tridistill::Error;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Parse = 3,
    Infeasible = 4,
    CapExceeded = 5,
    Io = 6,
    /// A result does not fit the output type.
    Overflow = 7,
    /// The library panicked; the handle state is unspecified.
    Panic = 8,
    Other = 9,
}

/// Opaque code handle.
pub struct TdCode {
    code: GenTrioMatrix,
}

/// Block sizes of a code.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TdCodeParams {
    pub n: usize,
    pub k: usize,
    pub k_t: usize,
    pub k_cs: usize,
    pub k_ccz: usize,
    pub k_0: usize,
}

/// Distance summary. `d` is 0 when only `d_lower_bound` is known; `a_d` is
/// meaningful only when `has_a_d` is true.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TdDistance {
    pub d: usize,
    pub d_lower_bound: usize,
    pub has_a_d: bool,
    pub a_d: u64,
}

/// Leading-order figures of a single-round distillation protocol.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TdReport {
    pub p_acc: f64,
    /// Leading coefficient as a float (exact value via the CLI).
    pub coefficient: f64,
    pub order: u32,
    pub eps_out: f64,
    pub eps_per_output: f64,
    pub avg_outputs: f64,
    pub t_per_output: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TdStatus {
    match e {
        Error::Parse { .. } => TdStatus::Parse,
        Error::Infeasible(_) | Error::Unsolvable | Error::UnCatchable(_) | Error::NonIntegerOutput(_) => TdStatus::Infeasible,
        Error::CapExceeded { .. } => TdStatus::CapExceeded,
        Error::Io(_) => TdStatus::Io,
        Error::InvalidInput(_) | Error::LengthMismatch { .. } | Error::BlockMismatch(_) => TdStatus::InvalidInput,
        _ => TdStatus::Other,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (TdStatus, String)>) -> TdStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TdStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TdStatus::Panic
        }
    }
}

fn lib(e: Error) -> (TdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TdStatus, String) {
    (TdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TdStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (TdStatus::InvalidInput, format!("{what} is not UTF-8")))
}

/// Message describing the last failure on this thread, or an empty string.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn td_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn td_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

fn emit(code: GenTrioMatrix, out: *mut *mut TdCode) {
    // SAFETY: callers check `out` for null before building the code.
    unsafe { *out = Box::into_raw(Box::new(TdCode { code })) };
}

/// Parses a code file from text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_code_from_text(text: *const c_char, out: *mut *mut TdCode) -> TdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(text, "text")?;
        emit(CodeFile::parse(text).map_err(lib)?.code, out);
        Ok(())
    })
}

/// Loads one of the reference code files by name, e.g. `"m9_512.code"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_code_shipped(name: *const c_char, out: *mut *mut TdCode) -> TdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = str_arg(name, "name")?;
        let text = shipped(name).ok_or_else(|| (TdStatus::InvalidInput, format!("no reference code named {name:?}")))?;
        emit(CodeFile::parse(text).map_err(lib)?.code, out);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `code` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn td_code_free(code: *mut TdCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

unsafe fn handle<'a>(code: *const TdCode) -> Result<&'a GenTrioMatrix, (TdStatus, String)> {
    code.as_ref().map(|c| &c.code).ok_or_else(|| null("code"))
}

/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_code_params(code: *const TdCode, out: *mut TdCodeParams) -> TdStatus {
    guard(|| {
        let g = handle(code)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = TdCodeParams { n: g.n(), k: g.k(), k_t: g.k_t(), k_cs: g.k_cs(), k_ccz: g.k_ccz(), k_0: g.k_0() };
        Ok(())
    })
}

/// Checks generalized triorthogonality.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_code_verify(code: *const TdCode, out: *mut bool) -> TdStatus {
    guard(|| {
        let g = handle(code)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = verify_generalized(g);
        Ok(())
    })
}

/// Z-distance by automatic method choice, scanning weights up to `cap`.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_code_distance(code: *const TdCode, cap: usize, out: *mut TdDistance) -> TdStatus {
    guard(|| {
        let g = handle(code)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = z_distance(g, DistanceRequest::Auto, cap).map_err(lib)?;
        let a_d = match &s.a_d {
            Some(a) => Some(a.parse::<u64>().map_err(|_| (TdStatus::Overflow, format!("A_d = {a} does not fit in 64 bits")))?),
            None => None,
        };
        *out = TdDistance { d: s.d.unwrap_or(0), d_lower_bound: s.d_lower_bound, has_a_d: a_d.is_some(), a_d: a_d.unwrap_or(0) };
        Ok(())
    })
}

/// Protocol figures for an `[[n, k, d]]` code with `a_d` minimum-weight
/// logicals at input error `eps`; `ec_radius` 1 corrects single errors.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_trio_report(n: usize, k: usize, d: usize, a_d: u64, eps: f64, ec_radius: u8, out: *mut TdReport) -> TdStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = trio_report(n, k, d, a_d, eps, ec_radius).map_err(lib)?;
        let coefficient = rational_to_f64(&r.coefficient);
        *out = TdReport {
            p_acc: r.p_acc,
            coefficient,
            order: r.order,
            eps_out: r.eps_out,
            eps_per_output: r.eps_per_output,
            avg_outputs: r.avg_outputs,
            t_per_output: r.t_per_output,
        };
        Ok(())
    })
}
