// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Drives the library through the C ABI exactly as a foreign caller
//! would: out-parameters, status codes, thread-local error messages,
//! and explicit frees.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use chandisc_ffi::*;

unsafe fn last_error() -> String {
    CStr::from_ptr(chandisc_last_error_message())
        .to_string_lossy()
        .into_owned()
}

unsafe fn take_string(raw: *mut c_char) -> String {
    assert!(!raw.is_null());
    let text = CStr::from_ptr(raw).to_string_lossy().into_owned();
    chandisc_string_free(raw);
    text
}

#[test]
fn version_is_a_static_semver_string() {
    let raw = chandisc_version();
    assert!(!raw.is_null());
    let text = unsafe { CStr::from_ptr(raw) }.to_str().unwrap();
    assert_eq!(text, env!("CARGO_PKG_VERSION"));
    assert_eq!(text.split('.').count(), 3);
}

#[test]
fn full_pipeline_runs_through_the_handle_api() {
    unsafe {
        let mut state: *mut ChandiscState = ptr::null_mut();
        assert_eq!(chandisc_state_bell(2, &mut state), ChandiscStatus::Ok);
        assert!(!state.is_null());

        let mut detected = false;
        let mut negativity = 0.0f64;
        assert_eq!(
            chandisc_detect(state, &mut detected, &mut negativity),
            ChandiscStatus::Ok
        );
        assert!(detected);
        assert!((negativity - 0.5).abs() < 1e-12);

        let mut pair: *mut ChandiscPair = ptr::null_mut();
        assert_eq!(chandisc_construct(state, &mut pair), ChandiscStatus::Ok);
        assert!(!pair.is_null());
        assert!((chandisc_pair_c(pair) - 2.0 / 3.0).abs() < 1e-12);
        assert!((chandisc_pair_negativity(pair) - 0.5).abs() < 1e-12);

        let mut passed = false;
        assert_eq!(chandisc_pair_verify(pair, &mut passed), ChandiscStatus::Ok);
        assert!(passed);

        let mut raw: *mut c_char = ptr::null_mut();
        assert_eq!(chandisc_pair_report_json(pair, 7, &mut raw), ChandiscStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take_string(raw)).unwrap();
        let advantage = report["advantage"].as_f64().unwrap();
        assert!((advantage - 2.0 / 3.0).abs() < 1e-8);
        assert!(report["probeDistance"].as_f64().unwrap() > 1.99);

        let mut sim_raw: *mut c_char = ptr::null_mut();
        assert_eq!(
            chandisc_pair_simulate_json(pair, 2000, 11, &mut sim_raw),
            ChandiscStatus::Ok
        );
        let sim: serde_json::Value = serde_json::from_str(&take_string(sim_raw)).unwrap();
        assert_eq!(sim["shots"].as_u64().unwrap(), 2000);
        assert!(sim["successRate"].as_f64().unwrap() > 0.95);

        chandisc_pair_free(pair);
        chandisc_state_free(state);
    }
}

#[test]
fn json_round_trip_matches_the_wire_shape() {
    unsafe {
        let mut state: *mut ChandiscState = ptr::null_mut();
        assert_eq!(chandisc_state_isotropic(2, 0.8, &mut state), ChandiscStatus::Ok);

        let mut raw: *mut c_char = ptr::null_mut();
        assert_eq!(chandisc_state_to_json(state, &mut raw), ChandiscStatus::Ok);
        let text = take_string(raw);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["dims"], serde_json::json!([2, 2]));
        assert!(value["matrix"].is_object());

        let json = CString::new(text).unwrap();
        let mut again: *mut ChandiscState = ptr::null_mut();
        assert_eq!(
            chandisc_state_from_json(json.as_ptr(), &mut again),
            ChandiscStatus::Ok
        );

        let mut d0 = false;
        let mut n0 = 0.0;
        let mut d1 = false;
        let mut n1 = 0.0;
        assert_eq!(chandisc_detect(state, &mut d0, &mut n0), ChandiscStatus::Ok);
        assert_eq!(chandisc_detect(again, &mut d1, &mut n1), ChandiscStatus::Ok);
        assert_eq!(d0, d1);
        assert_eq!(n0, n1);

        chandisc_state_free(state);
        chandisc_state_free(again);
    }
}

#[test]
fn envelope_wrapped_json_is_accepted() {
    unsafe {
        let mut state: *mut ChandiscState = ptr::null_mut();
        assert_eq!(chandisc_state_bell(2, &mut state), ChandiscStatus::Ok);
        let mut raw: *mut c_char = ptr::null_mut();
        assert_eq!(chandisc_state_to_json(state, &mut raw), ChandiscStatus::Ok);
        let bare: serde_json::Value = serde_json::from_str(&take_string(raw)).unwrap();
        chandisc_state_free(state);

        let wrapped = serde_json::json!({ "provenance": {"toolVersion": "x"}, "data": bare });
        let json = CString::new(wrapped.to_string()).unwrap();
        let mut parsed: *mut ChandiscState = ptr::null_mut();
        assert_eq!(
            chandisc_state_from_json(json.as_ptr(), &mut parsed),
            ChandiscStatus::Ok
        );
        chandisc_state_free(parsed);
    }
}

#[test]
fn pair_json_exposes_the_artifact_shape() {
    unsafe {
        let mut state: *mut ChandiscState = ptr::null_mut();
        assert_eq!(chandisc_state_bell(3, &mut state), ChandiscStatus::Ok);
        let mut pair: *mut ChandiscPair = ptr::null_mut();
        assert_eq!(chandisc_construct(state, &mut pair), ChandiscStatus::Ok);

        let mut raw: *mut c_char = ptr::null_mut();
        assert_eq!(chandisc_pair_to_json(pair, &mut raw), ChandiscStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(raw)).unwrap();
        assert!(value["pair"]["psi0"].is_object());
        assert_eq!(value["map"]["name"].as_str().unwrap(), "transpose");
        assert!(value["negativity"]["value"].as_f64().unwrap() > 0.9);

        chandisc_pair_free(pair);
        chandisc_state_free(state);
    }
}

#[test]
fn failures_set_status_and_message() {
    unsafe {
        // Undetected probe: the maximally mixed state passes every map.
        let mut state: *mut ChandiscState = ptr::null_mut();
        assert_eq!(chandisc_state_isotropic(2, 0.0, &mut state), ChandiscStatus::Ok);
        let mut pair: *mut ChandiscPair = ptr::null_mut();
        assert_eq!(
            chandisc_construct(state, &mut pair),
            ChandiscStatus::NotDetected
        );
        assert!(pair.is_null());
        assert!(last_error().contains("no registry map"));
        chandisc_state_free(state);

        // Domain errors surface their own codes.
        let mut bad: *mut ChandiscState = ptr::null_mut();
        assert_eq!(
            chandisc_state_isotropic(2, 1.5, &mut bad),
            ChandiscStatus::ParameterOutOfRange
        );
        assert_eq!(
            chandisc_state_isotropic(0, 0.5, &mut bad),
            ChandiscStatus::ParameterOutOfRange
        );

        // Malformed and invalid JSON get distinct codes.
        let garbage = CString::new("not json").unwrap();
        assert_eq!(
            chandisc_state_from_json(garbage.as_ptr(), &mut bad),
            ChandiscStatus::Json
        );
        let mut entries = vec![[0.0f64, 0.0f64]; 16];
        entries[0] = [2.0, 0.0];
        let unnormalized = CString::new(
            serde_json::json!({
                "dims": [2, 2],
                "matrix": { "rows": 4, "cols": 4, "data": entries }
            })
            .to_string(),
        )
        .unwrap();
        let status = chandisc_state_from_json(unnormalized.as_ptr(), &mut bad);
        assert_eq!(status, ChandiscStatus::TraceNotOne);
        assert!(last_error().contains("trace"));
    }
}

#[test]
fn null_arguments_are_rejected_not_dereferenced() {
    unsafe {
        let mut state: *mut ChandiscState = ptr::null_mut();
        assert_eq!(
            chandisc_state_bell(2, ptr::null_mut()),
            ChandiscStatus::NullPointer
        );
        let mut detected = false;
        let mut negativity = 0.0;
        assert_eq!(
            chandisc_detect(ptr::null(), &mut detected, &mut negativity),
            ChandiscStatus::NullPointer
        );
        assert!(last_error().contains("null"));
        assert_eq!(
            chandisc_state_from_json(ptr::null(), &mut state),
            ChandiscStatus::NullPointer
        );
        assert!(chandisc_pair_c(ptr::null()).is_nan());
        assert!(chandisc_pair_negativity(ptr::null()).is_nan());

        // Frees tolerate null.
        chandisc_state_free(ptr::null_mut());
        chandisc_pair_free(ptr::null_mut());
        chandisc_string_free(ptr::null_mut());
    }
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("chandisc.h");
    let text = std::fs::read_to_string(header).expect("header generated at build time");
    for needle in [
        "#ifndef CHANDISC_H",
        "typedef struct ChandiscPair ChandiscPair;",
        "typedef struct ChandiscState ChandiscState;",
        "CHANDISC_STATUS_OK = 0",
        "CHANDISC_STATUS_NOT_DETECTED = 14",
        "chandisc_version(void)",
        "chandisc_last_error_message(void)",
        "chandisc_state_bell(",
        "chandisc_pair_report_json(",
        "chandisc_string_free(",
    ] {
        assert!(text.contains(needle), "header is missing {needle:?}");
    }
}
