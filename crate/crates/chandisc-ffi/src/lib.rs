// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! C ABI for the channel-discrimination toolkit.
//!
//! The surface follows the usual handle pattern: constructors return
//! opaque pointers through out-parameters and a status code; every
//! returned object is freed with its matching `_free` function; the last
//! failure's message is kept per thread and read back with
//! `chandisc_last_error_message`. JSON crossing the boundary uses the
//! same artifact shapes as the command-line tool, so handles and files
//! interoperate.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use chandisc::channel::apply_tensor_identity;
use chandisc::construct::{state_to_channels, verify_pair, ConstructedChannels};
use chandisc::detect::detect_entanglement;
use chandisc::discriminate::{advantage_report, helstrom, simulate_experiment};
use chandisc::state::{bell_state, isotropic_state, validate_state, DensityMatrix, StateFile};
use chandisc::{Error, Tolerances};

/// Status code returned by every fallible call. Zero is success; the
/// other values mirror the library's error kinds.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChandiscStatus {
    Ok = 0,
    NonSquare = 1,
    NotHermitian = 2,
    NotPsd = 3,
    TraceNotOne = 4,
    DimensionMismatch = 5,
    ParameterOutOfRange = 6,
    NonLinearApplier = 7,
    MapNotTracePreserving = 8,
    UnsupportedDim = 9,
    DegenerateMap = 10,
    NotTa = 11,
    NotHermiticityPreserving = 12,
    DegenerateTa = 13,
    NotDetected = 14,
    InvalidPovm = 15,
    InconsistentProvenance = 16,
    PurificationTooSmall = 17,
    Io = 18,
    Json = 19,
    Format = 20,
    /// A required pointer argument was null.
    NullPointer = 21,
    /// A string argument was not valid UTF-8.
    Utf8 = 22,
    /// The call panicked; the handle state is unchanged.
    Panic = 23,
}

/// A validated density matrix.
pub struct ChandiscState {
    inner: DensityMatrix,
}

/// A constructed channel pair bound to the probe it was built from.
pub struct ChandiscPair {
    built: ConstructedChannels,
    source: DensityMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn remember(status: ChandiscStatus, message: &str) -> ChandiscStatus {
    let cleaned: String = message.chars().filter(|&ch| ch != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(cleaned).unwrap_or_default();
    });
    status
}

fn status_of(err: &Error) -> ChandiscStatus {
    match err {
        Error::NonSquare { .. } => ChandiscStatus::NonSquare,
        Error::NotHermitian { .. } => ChandiscStatus::NotHermitian,
        Error::NotPsd { .. } => ChandiscStatus::NotPsd,
        Error::TraceNotOne { .. } => ChandiscStatus::TraceNotOne,
        Error::DimensionMismatch { .. } => ChandiscStatus::DimensionMismatch,
        Error::ParameterOutOfRange { .. } => ChandiscStatus::ParameterOutOfRange,
        Error::NonLinearApplier { .. } => ChandiscStatus::NonLinearApplier,
        Error::MapNotTracePreserving { .. } => ChandiscStatus::MapNotTracePreserving,
        Error::UnsupportedDim { .. } => ChandiscStatus::UnsupportedDim,
        Error::DegenerateMap { .. } => ChandiscStatus::DegenerateMap,
        Error::NotTa { .. } => ChandiscStatus::NotTa,
        Error::NotHermiticityPreserving { .. } => ChandiscStatus::NotHermiticityPreserving,
        Error::DegenerateTa { .. } => ChandiscStatus::DegenerateTa,
        Error::NotDetected => ChandiscStatus::NotDetected,
        Error::InvalidPovm { .. } => ChandiscStatus::InvalidPovm,
        Error::InconsistentProvenance { .. } => ChandiscStatus::InconsistentProvenance,
        Error::PurificationTooSmall { .. } => ChandiscStatus::PurificationTooSmall,
        Error::Io(_) => ChandiscStatus::Io,
        Error::Json(_) => ChandiscStatus::Json,
        Error::Format { .. } => ChandiscStatus::Format,
    }
}

fn fail(err: Error) -> ChandiscStatus {
    remember(status_of(&err), &err.to_string())
}

/// Run a fallible body, translating errors and panics into status codes.
fn guarded(body: impl FnOnce() -> Result<ChandiscStatus, Error>) -> ChandiscStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(err)) => fail(err),
        Err(_) => remember(ChandiscStatus::Panic, "internal panic"),
    }
}

fn null_arg(name: &str) -> ChandiscStatus {
    remember(ChandiscStatus::NullPointer, &format!("{name} must not be null"))
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, ChandiscStatus> {
    if ptr.is_null() {
        return Err(null_arg("string argument"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| remember(ChandiscStatus::Utf8, "string argument is not valid UTF-8"))
}

fn export_string(text: String, out: *mut *mut c_char) -> Result<ChandiscStatus, Error> {
    let cleaned: String = text.chars().filter(|&ch| ch != '\0').collect();
    let owned = CString::new(cleaned).expect("interior NULs removed");
    unsafe { *out = owned.into_raw() };
    Ok(ChandiscStatus::Ok)
}

/// Library version as a static NUL-terminated string; never freed.
#[no_mangle]
pub extern "C" fn chandisc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn chandisc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Free a string returned through a `char **` out-parameter.
///
/// # Safety
/// `text` must have come from this library and not have been freed yet.
#[no_mangle]
pub unsafe extern "C" fn chandisc_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Build the maximally entangled state on two `d`-dimensional factors.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn chandisc_state_bell(
    d: usize,
    out: *mut *mut ChandiscState,
) -> ChandiscStatus {
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| {
        if d == 0 {
            return Err(Error::ParameterOutOfRange { name: "d", value: 0.0 });
        }
        let state = bell_state(d);
        *out = Box::into_raw(Box::new(ChandiscState { inner: state }));
        Ok(ChandiscStatus::Ok)
    })
}

/// Build an isotropic state with the given visibility in [0, 1].
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn chandisc_state_isotropic(
    d: usize,
    visibility: f64,
    out: *mut *mut ChandiscState,
) -> ChandiscStatus {
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| {
        if d == 0 {
            return Err(Error::ParameterOutOfRange { name: "d", value: 0.0 });
        }
        let state = isotropic_state(d, visibility)?;
        *out = Box::into_raw(Box::new(ChandiscState { inner: state }));
        Ok(ChandiscStatus::Ok)
    })
}

/// Parse and validate a state from JSON. Accepts the bare state shape or
/// a provenance envelope, exactly like the file readers.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chandisc_state_from_json(
    json: *const c_char,
    out: *mut *mut ChandiscState,
) -> ChandiscStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let text = match read_str(json) {
        Ok(text) => text,
        Err(status) => return status,
    };
    guarded(|| {
        let mut value: serde_json::Value = serde_json::from_str(text).map_err(Error::Json)?;
        if let Some(inner) = value.get_mut("data") {
            value = inner.take();
        }
        let file: StateFile = serde_json::from_value(value).map_err(Error::Json)?;
        let state = validate_state(&file.matrix, &file.dims, &Tolerances::default())?;
        *out = Box::into_raw(Box::new(ChandiscState { inner: state }));
        Ok(ChandiscStatus::Ok)
    })
}

/// Serialize a state to the same JSON shape the file tools read.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable. Free the result
/// with `chandisc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn chandisc_state_to_json(
    state: *const ChandiscState,
    out: *mut *mut c_char,
) -> ChandiscStatus {
    if state.is_null() {
        return null_arg("state");
    }
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| {
        let text = serde_json::to_string(&(*state).inner).map_err(Error::Json)?;
        export_string(text, out)
    })
}

/// Free a state handle.
///
/// # Safety
/// `state` must have come from this library and not have been freed yet.
#[no_mangle]
pub unsafe extern "C" fn chandisc_state_free(state: *mut ChandiscState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Scan the positive-map registry. On success `*detected` says whether a
/// map flagged the state and `*negativity` holds the certified value.
///
/// # Safety
/// All pointers must be valid: `state` a live handle, the rest writable.
#[no_mangle]
pub unsafe extern "C" fn chandisc_detect(
    state: *const ChandiscState,
    detected: *mut bool,
    negativity: *mut f64,
) -> ChandiscStatus {
    if state.is_null() {
        return null_arg("state");
    }
    if detected.is_null() || negativity.is_null() {
        return null_arg("out");
    }
    guarded(|| {
        let result = detect_entanglement(&(*state).inner, &Tolerances::default())?;
        *detected = result.detected;
        *negativity = result.negativity;
        Ok(ChandiscStatus::Ok)
    })
}

/// Build the channel pair powered by a detected state. Fails with
/// `NotDetected` when no registry map flags the state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chandisc_construct(
    state: *const ChandiscState,
    out: *mut *mut ChandiscPair,
) -> ChandiscStatus {
    if state.is_null() {
        return null_arg("state");
    }
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| {
        let source = (*state).inner.clone();
        let built = state_to_channels(&source, &Tolerances::default())?;
        *out = Box::into_raw(Box::new(ChandiscPair { built, source }));
        Ok(ChandiscStatus::Ok)
    })
}

/// Scale factor `c` of a pair, or NaN on a null handle.
///
/// # Safety
/// `pair` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chandisc_pair_c(pair: *const ChandiscPair) -> f64 {
    if pair.is_null() {
        return f64::NAN;
    }
    (*pair).built.pair.c
}

/// Certified negativity of the probe the pair was built from, or NaN on
/// a null handle.
///
/// # Safety
/// `pair` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chandisc_pair_negativity(pair: *const ChandiscPair) -> f64 {
    if pair.is_null() {
        return f64::NAN;
    }
    (*pair).built.negativity.value
}

/// Re-check every invariant of the pair; `*passed` reports the verdict.
///
/// # Safety
/// `pair` must be a live handle; `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chandisc_pair_verify(
    pair: *const ChandiscPair,
    passed: *mut bool,
) -> ChandiscStatus {
    if pair.is_null() {
        return null_arg("pair");
    }
    if passed.is_null() {
        return null_arg("passed");
    }
    guarded(|| {
        let report = verify_pair(&(*pair).built.pair, &Tolerances::default())?;
        *passed = report.passed;
        Ok(ChandiscStatus::Ok)
    })
}

/// Serialize the pair, its generating map, and the bound negativity to
/// JSON; the file tools read this shape directly.
///
/// # Safety
/// `pair` must be a live handle; `out` must be writable. Free the result
/// with `chandisc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn chandisc_pair_to_json(
    pair: *const ChandiscPair,
    out: *mut *mut c_char,
) -> ChandiscStatus {
    if pair.is_null() {
        return null_arg("pair");
    }
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| {
        let text = serde_json::to_string(&(*pair).built).map_err(Error::Json)?;
        export_string(text, out)
    })
}

/// Full discrimination report for the pair and its source probe, as JSON.
///
/// # Safety
/// `pair` must be a live handle; `out` must be writable. Free the result
/// with `chandisc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn chandisc_pair_report_json(
    pair: *const ChandiscPair,
    seed: u64,
    out: *mut *mut c_char,
) -> ChandiscStatus {
    if pair.is_null() {
        return null_arg("pair");
    }
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| {
        let handle = &*pair;
        let report = advantage_report(
            &handle.built.pair,
            &handle.source,
            &handle.built.negativity,
            seed,
            &Tolerances::default(),
        )?;
        let text = serde_json::to_string(&report).map_err(Error::Json)?;
        export_string(text, out)
    })
}

/// Play the discrimination game against the source probe with the best
/// measurement; the result (counts, rates, intervals) comes back as JSON.
///
/// # Safety
/// `pair` must be a live handle; `out` must be writable. Free the result
/// with `chandisc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn chandisc_pair_simulate_json(
    pair: *const ChandiscPair,
    shots: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> ChandiscStatus {
    if pair.is_null() {
        return null_arg("pair");
    }
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| {
        let handle = &*pair;
        let tol = Tolerances::default();
        let out0 = apply_tensor_identity(&handle.built.pair.psi0, &handle.source)?;
        let out1 = apply_tensor_identity(&handle.built.pair.psi1, &handle.source)?;
        let best = helstrom(&out0, &out1, &tol)?;
        let result = simulate_experiment(&out0, &out1, &best.measurement, shots, seed, &tol)?;
        let text = serde_json::to_string(&result).map_err(Error::Json)?;
        export_string(text, out)
    })
}

/// Free a pair handle.
///
/// # Safety
/// `pair` must have come from this library and not have been freed yet.
#[no_mangle]
pub unsafe extern "C" fn chandisc_pair_free(pair: *mut ChandiscPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}
