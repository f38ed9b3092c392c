//! C ABI for the Hodge decomposition library. Objects cross the boundary
//! as opaque handles, bulk data as JSON strings in the same schemas the
//! CLI uses. Every function is panic-safe; failures set a thread-local
//! error retrievable with cshodge_last_error.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cstar_hodge::hodge::hodge_decompose;
use cstar_hodge::io::{
    decompose_report, hodge_report, parse_builder_spec, validate_parts, ComplexDto,
    ModuleElementDto,
};
use cstar_hodge::{CochainComplex, Error, HodgeResult, Tolerance};

/// Opaque handle to a validated cochain complex.
pub struct CsHodgeComplex {
    inner: CochainComplex,
}

/// Opaque handle to a finished decomposition.
pub struct CsHodgeResult {
    inner: HodgeResult,
}

/// Outcome of a call; nonzero values mirror the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsHodgeStatus {
    Ok = 0,
    /// A mathematical invariant failed (not a complex, bad projector,
    /// non-integral multiplicity, ...).
    InvariantViolation = 1,
    /// Malformed JSON, unreadable input, or an invalid builder spec.
    ParseFailure = 2,
    /// A required pointer argument was null.
    NullArgument = 3,
    /// Internal panic; the last error carries what is known.
    Panic = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<(CsHodgeStatus, CString)>> = const { RefCell::new(None) };
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn set_error(status: CsHodgeStatus, message: String) {
    let message = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some((status, message)));
}

fn set_library_error(e: &Error) {
    let status = match e.exit_code() {
        2 => CsHodgeStatus::ParseFailure,
        _ => CsHodgeStatus::InvariantViolation,
    };
    set_error(status, e.to_string());
}

/// Runs an entry point body, converting panics into an error state.
fn guarded<T>(null: T, body: impl FnOnce() -> T) -> T {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(value) => value,
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(CsHodgeStatus::Panic, what);
            null
        }
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Option<&'a str> {
    if s.is_null() {
        set_error(CsHodgeStatus::NullArgument, format!("{what} is null"));
        return None;
    }
    match CStr::from_ptr(s).to_str() {
        Ok(text) => Some(text),
        Err(_) => {
            set_error(CsHodgeStatus::ParseFailure, format!("{what} is not UTF-8"));
            None
        }
    }
}

fn make_tolerance(rel: f64, abs: f64) -> Option<Tolerance> {
    match Tolerance::new(rel, abs) {
        Ok(t) => Some(t),
        Err(e) => {
            set_library_error(&e);
            None
        }
    }
}

fn own_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn complex_ref<'a>(handle: *const CsHodgeComplex) -> Option<&'a CochainComplex> {
    if handle.is_null() {
        set_error(CsHodgeStatus::NullArgument, "complex handle is null".into());
        return None;
    }
    Some(&(*handle).inner)
}

unsafe fn result_ref<'a>(handle: *const CsHodgeResult) -> Option<&'a HodgeResult> {
    if handle.is_null() {
        set_error(CsHodgeStatus::NullArgument, "result handle is null".into());
        return None;
    }
    Some(&(*handle).inner)
}

/// Status of the most recent call on this thread.
#[no_mangle]
pub extern "C" fn cshodge_last_error_code() -> CsHodgeStatus {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(CsHodgeStatus::Ok, |(status, _)| *status)
    })
}

/// Message of the most recent error on this thread as a newly allocated
/// string, or null when the last call succeeded. Free with
/// cshodge_string_free.
#[no_mangle]
pub extern "C" fn cshodge_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |(_, msg)| msg.clone().into_raw())
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn cshodge_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a complex from JSON
/// ({"block_dims", "ranks", "differentials"}). Returns null on failure.
///
/// # Safety
/// `json` must be null or a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cshodge_complex_from_json(
    json: *const c_char,
    tol_rel: f64,
    tol_abs: f64,
) -> *mut CsHodgeComplex {
    guarded(ptr::null_mut(), || {
        let Some(text) = read_str(json, "complex JSON") else {
            return ptr::null_mut();
        };
        let Some(tolerance) = make_tolerance(tol_rel, tol_abs) else {
            return ptr::null_mut();
        };
        let dto: ComplexDto = match serde_json::from_str(text) {
            Ok(d) => d,
            Err(e) => {
                set_error(CsHodgeStatus::ParseFailure, e.to_string());
                return ptr::null_mut();
            }
        };
        match dto.to_complex(tolerance) {
            Ok(inner) => Box::into_raw(Box::new(CsHodgeComplex { inner })),
            Err(e) => {
                set_library_error(&e);
                ptr::null_mut()
            }
        }
    })
}

/// Builds a complex from a builder spec such as "cycle:3 blocks=2,1" or
/// "planted ranks=2,3,2 seed=7". Returns null on failure.
///
/// # Safety
/// `spec` must be null or a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cshodge_complex_from_spec(
    spec: *const c_char,
    seed: u64,
    tol_rel: f64,
    tol_abs: f64,
) -> *mut CsHodgeComplex {
    guarded(ptr::null_mut(), || {
        let Some(text) = read_str(spec, "builder spec") else {
            return ptr::null_mut();
        };
        let Some(tolerance) = make_tolerance(tol_rel, tol_abs) else {
            return ptr::null_mut();
        };
        let built = parse_builder_spec(text).and_then(|s| s.build(seed, tolerance));
        match built {
            Ok(inner) => Box::into_raw(Box::new(CsHodgeComplex { inner })),
            Err(e) => {
                set_library_error(&e);
                ptr::null_mut()
            }
        }
    })
}

/// Serializes the complex back to JSON. Free with cshodge_string_free.
///
/// # Safety
/// `complex` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cshodge_complex_to_json(complex: *const CsHodgeComplex) -> *mut c_char {
    guarded(ptr::null_mut(), || {
        let Some(c) = complex_ref(complex) else {
            return ptr::null_mut();
        };
        let dto = ComplexDto::from_complex(c);
        match serde_json::to_string_pretty(&dto) {
            Ok(json) => own_string(json),
            Err(e) => {
                set_error(CsHodgeStatus::ParseFailure, e.to_string());
                ptr::null_mut()
            }
        }
    })
}

/// Validation report ({"valid", "d_square_norms", ...}) for a complex
/// given as JSON; reports on the complex condition instead of failing, so
/// this succeeds even when d^2 != 0. Free with cshodge_string_free.
///
/// # Safety
/// `json` must be null or a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cshodge_validate_json(
    json: *const c_char,
    tol_rel: f64,
    tol_abs: f64,
) -> *mut c_char {
    guarded(ptr::null_mut(), || {
        let Some(text) = read_str(json, "complex JSON") else {
            return ptr::null_mut();
        };
        let Some(tolerance) = make_tolerance(tol_rel, tol_abs) else {
            return ptr::null_mut();
        };
        let report = serde_json::from_str::<ComplexDto>(text)
            .map_err(Error::from)
            .and_then(|dto| dto.to_parts())
            .map(|parts| validate_parts(&parts, &tolerance));
        match report {
            Ok(r) => own_string(serde_json::to_string_pretty(&r).unwrap_or_default()),
            Err(e) => {
                set_library_error(&e);
                ptr::null_mut()
            }
        }
    })
}

/// Number of degrees (length + 1). Zero for a null handle.
///
/// # Safety
/// `complex` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cshodge_complex_degree_count(complex: *const CsHodgeComplex) -> usize {
    guarded(0, || complex_ref(complex).map_or(0, |c| c.degree_count()))
}

/// Rank of C^degree through `out_rank`.
///
/// # Safety
/// `complex` must be null or a live handle; `out_rank` null or writable.
#[no_mangle]
pub unsafe extern "C" fn cshodge_complex_rank(
    complex: *const CsHodgeComplex,
    degree: usize,
    out_rank: *mut usize,
) -> CsHodgeStatus {
    guarded(CsHodgeStatus::Panic, || {
        let Some(c) = complex_ref(complex) else {
            return CsHodgeStatus::NullArgument;
        };
        if out_rank.is_null() {
            set_error(CsHodgeStatus::NullArgument, "out_rank is null".into());
            return CsHodgeStatus::NullArgument;
        }
        if degree > c.length() {
            let e = Error::DegreeOutOfRange {
                degree,
                length: c.length(),
            };
            set_library_error(&e);
            return CsHodgeStatus::InvariantViolation;
        }
        *out_rank = c.space(degree).rank();
        CsHodgeStatus::Ok
    })
}

/// Frees a complex handle. Null is ignored.
///
/// # Safety
/// `complex` must be null or a live handle from this library, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn cshodge_complex_free(complex: *mut CsHodgeComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Runs the full decomposition: parametrices, projectors, multiplicities.
/// Returns null on failure.
///
/// # Safety
/// `complex` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cshodge_decompose(complex: *const CsHodgeComplex) -> *mut CsHodgeResult {
    guarded(ptr::null_mut(), || {
        let Some(c) = complex_ref(complex) else {
            return ptr::null_mut();
        };
        match hodge_decompose(c) {
            Ok(inner) => Box::into_raw(Box::new(CsHodgeResult { inner })),
            Err(e) => {
                set_library_error(&e);
                ptr::null_mut()
            }
        }
    })
}

/// Full report (tolerances, per-degree multiplicities, residuals, spectral
/// gaps, Euler sums) as JSON. Free with cshodge_string_free.
///
/// # Safety
/// `result` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cshodge_result_report_json(result: *const CsHodgeResult) -> *mut c_char {
    guarded(ptr::null_mut(), || {
        let Some(r) = result_ref(result) else {
            return ptr::null_mut();
        };
        own_string(serde_json::to_string_pretty(&hodge_report(r)).unwrap_or_default())
    })
}

/// Cohomology multiplicity of one algebra block at one degree.
///
/// # Safety
/// `result` must be null or a live handle; `out_multiplicity` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cshodge_result_multiplicity(
    result: *const CsHodgeResult,
    degree: usize,
    block: usize,
    out_multiplicity: *mut usize,
) -> CsHodgeStatus {
    guarded(CsHodgeStatus::Panic, || {
        let Some(r) = result_ref(result) else {
            return CsHodgeStatus::NullArgument;
        };
        if out_multiplicity.is_null() {
            set_error(
                CsHodgeStatus::NullArgument,
                "out_multiplicity is null".into(),
            );
            return CsHodgeStatus::NullArgument;
        }
        let Some(data) = r.degrees().get(degree) else {
            set_library_error(&Error::DegreeOutOfRange {
                degree,
                length: r.complex().length(),
            });
            return CsHodgeStatus::InvariantViolation;
        };
        let Some(&kappa) = data.multiplicities.get(block) else {
            set_error(
                CsHodgeStatus::InvariantViolation,
                format!(
                    "block {block} out of range for {} blocks",
                    data.multiplicities.len()
                ),
            );
            return CsHodgeStatus::InvariantViolation;
        };
        *out_multiplicity = kappa;
        CsHodgeStatus::Ok
    })
}

/// Worst residual across all degrees through `out_residual`.
///
/// # Safety
/// `result` must be null or a live handle; `out_residual` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cshodge_result_worst_residual(
    result: *const CsHodgeResult,
    out_residual: *mut f64,
) -> CsHodgeStatus {
    guarded(CsHodgeStatus::Panic, || {
        let Some(r) = result_ref(result) else {
            return CsHodgeStatus::NullArgument;
        };
        if out_residual.is_null() {
            set_error(CsHodgeStatus::NullArgument, "out_residual is null".into());
            return CsHodgeStatus::NullArgument;
        }
        *out_residual = r.worst_residual();
        CsHodgeStatus::Ok
    })
}

/// Splits an element (JSON {"coords": [...]}) at the given degree into
/// harmonic, exact, and coexact parts; returns the full report as JSON.
/// Free with cshodge_string_free.
///
/// # Safety
/// `result` must be null or a live handle; `element_json` null or a valid
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cshodge_result_decompose_element(
    result: *const CsHodgeResult,
    degree: usize,
    element_json: *const c_char,
) -> *mut c_char {
    guarded(ptr::null_mut(), || {
        let Some(r) = result_ref(result) else {
            return ptr::null_mut();
        };
        let Some(text) = read_str(element_json, "element JSON") else {
            return ptr::null_mut();
        };
        let report = serde_json::from_str::<ModuleElementDto>(text)
            .map_err(Error::from)
            .and_then(|dto| dto.to_element(&r.complex().space(degree)))
            .and_then(|x| decompose_report(r, degree, &x));
        match report {
            Ok(rep) => own_string(serde_json::to_string_pretty(&rep).unwrap_or_default()),
            Err(e) => {
                set_library_error(&e);
                ptr::null_mut()
            }
        }
    })
}

/// Frees a result handle. Null is ignored.
///
/// # Safety
/// `result` must be null or a live handle from this library, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn cshodge_result_free(result: *mut CsHodgeResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
