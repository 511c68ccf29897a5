//! C interface to `chainlevel`.
//!
//! Posets live behind an opaque `ClpPoset` handle. Every fallible call
//! returns a `ClpStatus`; on failure `clp_last_error` describes the cause
//! for the calling thread. Strings handed out by the library must be
//! released with `clp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chainlevel::canonical::{self, SpectrumMethod};
use chainlevel::level::{is_level_with, PolytopeKind, Variant};
use chainlevel::sequences::dmax_with_witness;
use chainlevel::{catalog, Budget, Condition, Epsilon, Error, Poset};

/// Result codes shared by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, unknown element, cycle or too many elements.
    InvalidPoset = 3,
    ParamOutOfRange = 4,
    BudgetExceeded = 5,
    /// An internal consistency check failed.
    InvariantViolated = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClpPolytope {
    Chain = 0,
    Order = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClpVariant {
    Canonical = 0,
    Anticanonical = 1,
}

/// Opaque poset handle.
pub struct ClpPoset {
    inner: Poset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ClpStatus {
    match e {
        Error::BoxTooLarge { .. } => ClpStatus::BudgetExceeded,
        Error::ConstructionInvariantViolated(_) => ClpStatus::InvariantViolated,
        Error::ParamOutOfRange(_) => ClpStatus::ParamOutOfRange,
        _ => ClpStatus::InvalidPoset,
    }
}

fn guard(f: impl FnOnce() -> Result<(), ClpStatus>) -> ClpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ClpStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            ClpStatus::Panic
        }
    }
}

fn lib<T>(r: chainlevel::Result<T>) -> Result<T, ClpStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, ClpStatus> {
    if s.is_null() {
        set_error(format!("{what} is null"));
        return Err(ClpStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        ClpStatus::InvalidUtf8
    })
}

unsafe fn poset_arg<'a>(p: *const ClpPoset) -> Result<&'a Poset, ClpStatus> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| {
        set_error("poset handle is null".into());
        ClpStatus::NullPointer
    })
}

unsafe fn out_arg<'a, T>(out: *mut T) -> Result<&'a mut T, ClpStatus> {
    out.as_mut().ok_or_else(|| {
        set_error("output pointer is null".into());
        ClpStatus::NullPointer
    })
}

fn eps_arg(eps: i32) -> Result<Epsilon, ClpStatus> {
    lib(Epsilon::from_i64(eps as i64))
}

fn budget_of(limit: u64) -> Budget {
    if limit == 0 {
        Budget::unlimited()
    } else {
        Budget::new(limit)
    }
}

fn give(p: Poset, out: *mut *mut ClpPoset) -> Result<(), ClpStatus> {
    let slot = unsafe { out_arg(out)? };
    *slot = Box::into_raw(Box::new(ClpPoset { inner: p }));
    Ok(())
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), ClpStatus> {
    let slot = unsafe { out_arg(out)? };
    *slot = CString::new(s).expect("JSON has no nul bytes").into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn clp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn clp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `{"elements": [...], "covers": [[lo, hi], ...]}`.
/// `max_elements` of 0 means the default bound.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn clp_poset_from_json(json: *const c_char, max_elements: usize, out: *mut *mut ClpPoset) -> ClpStatus {
    guard(|| {
        let s = str_arg(json, "json")?;
        let limit = if max_elements == 0 {
            chainlevel::poset::DEFAULT_MAX_ELEMENTS
        } else {
            max_elements
        };
        give(lib(Poset::from_json_str(s, limit))?, out)
    })
}

/// Builds a named example poset. Parameters of 0 take their defaults.
///
/// # Safety
/// `name` must be a valid nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn clp_poset_example(name: *const c_char, n: usize, m1: usize, m2: usize, out: *mut *mut ClpPoset) -> ClpStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let opt = |v: usize| (v != 0).then_some(v);
        give(lib(catalog::by_name(name, opt(n), opt(m1), opt(m2)))?, out)
    })
}

/// # Safety
/// `p` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn clp_poset_free(p: *mut ClpPoset) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn clp_poset_len(p: *const ClpPoset) -> usize {
    p.as_ref().map_or(0, |h| h.inner.len())
}

/// The poset serialized back to JSON. Free with `clp_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn clp_poset_to_json(p: *const ClpPoset, out: *mut *mut c_char) -> ClpStatus {
    guard(|| {
        let p = poset_arg(p)?;
        give_string(serde_json::to_string(&p.to_json()).expect("serializable"), out)
    })
}

/// Level verdict for one polytope and grading. `budget` of 0 means unlimited.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn clp_is_level(
    p: *const ClpPoset,
    polytope: ClpPolytope,
    variant: ClpVariant,
    budget: u64,
    out: *mut bool,
) -> ClpStatus {
    guard(|| {
        let p = poset_arg(p)?;
        let k = match polytope {
            ClpPolytope::Chain => PolytopeKind::Chain,
            ClpPolytope::Order => PolytopeKind::Order,
        };
        let v = match variant {
            ClpVariant::Canonical => Variant::Canonical,
            ClpVariant::Anticanonical => Variant::Anticanonical,
        };
        let r = lib(is_level_with(p, k, v, &budget_of(budget)))?;
        *out_arg(out)? = r.verdict;
        Ok(())
    })
}

/// Lowest generator degree for `eps` in {+1, -1}.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn clp_min_degree(p: *const ClpPoset, eps: i32, out: *mut i64) -> ClpStatus {
    guard(|| {
        let p = poset_arg(p)?;
        *out_arg(out)? = canonical::min_degree(p, eps_arg(eps)?);
        Ok(())
    })
}

/// Highest generator degree for `eps` in {+1, -1}.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn clp_max_degree(p: *const ClpPoset, eps: i32, budget: u64, out: *mut i64) -> ClpStatus {
    guard(|| {
        let p = poset_arg(p)?;
        let top = lib(dmax_with_witness(p, eps_arg(eps)?, Condition::NPrime, &budget_of(budget)))?;
        *out_arg(out)? = top.q;
        Ok(())
    })
}

/// Full report as JSON: the four level verdicts with witnesses and the
/// generator degrees for both gradings. With `brute_force` the degrees come
/// from exhaustive search instead. Free the result with `clp_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn clp_analyze_json(p: *const ClpPoset, brute_force: bool, budget: u64, out: *mut *mut c_char) -> ClpStatus {
    guard(|| {
        let p = poset_arg(p)?;
        let b = budget_of(budget);
        let mut level = Vec::new();
        for k in PolytopeKind::BOTH {
            for v in Variant::BOTH {
                level.push(lib(is_level_with(p, k, v, &b))?.to_json(p));
            }
        }
        let method = if brute_force {
            SpectrumMethod::BruteForce
        } else {
            SpectrumMethod::Formula
        };
        let mut spectra = Vec::new();
        for eps in Epsilon::BOTH {
            spectra.push(lib(canonical::degree_spectrum(p, eps, method, &b))?.to_json(p));
        }
        let v = serde_json::json!({ "elements": p.len(), "level": level, "spectra": spectra });
        give_string(v.to_string(), out)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn clp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
