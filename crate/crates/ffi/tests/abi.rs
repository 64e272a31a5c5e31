use std::ffi::{CStr, CString};
use std::ptr;

use hypertri_ffi::*;

fn params(n: u32, r: u32, exploratory: bool) -> *mut HtParams {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ht_params_new(n, r, exploratory, &mut out) }, HtStatus::Ok);
    out
}

fn last_error() -> String {
    let p = ht_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn params_validation_sets_last_error() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ht_params_new(6, 3, false, &mut out) }, HtStatus::InvalidArgument);
    assert!(last_error().contains("even"));
    assert!(out.is_null());
    assert_eq!(unsafe { ht_params_new(6, 3, true, ptr::null_mut()) }, HtStatus::NullPointer);
    let p = params(6, 3, true);
    unsafe { ht_params_free(p) };
}

#[test]
fn antipodal_round_trip_through_text() {
    let p = params(9, 2, false);
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { ht_construct_antipodal(9, 3, 2, &mut set) }, HtStatus::Ok);
    assert_eq!(unsafe { ht_vertex_set_len(set) }, 32);
    assert_eq!(unsafe { ht_vertex_set_dim(set) }, 9);

    let mut first = u64::MAX;
    assert_eq!(unsafe { ht_vertex_set_get(set, 0, &mut first) }, HtStatus::Ok);
    assert_eq!(first, 0);
    assert_eq!(unsafe { ht_vertex_set_get(set, 32, &mut first) }, HtStatus::InvalidArgument);

    let text = unsafe { ht_vertex_set_to_text(set, 2) };
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { ht_vertex_set_parse(text, 0, &mut back) }, HtStatus::Ok);
    assert_eq!(unsafe { ht_vertex_set_len(back) }, 32);

    let mut ok = false;
    assert_eq!(unsafe { ht_check_independent(back, p, &mut ok, ptr::null_mut()) }, HtStatus::Ok);
    assert!(ok);

    unsafe {
        ht_string_free(text);
        ht_vertex_set_free(back);
        ht_vertex_set_free(set);
        ht_params_free(p);
    }
}

#[test]
fn antipodal_errors_map_to_status() {
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { ht_construct_antipodal(9, 4, 2, &mut set) }, HtStatus::InvalidArgument);
    assert!(last_error().contains("not prime"));
    assert_eq!(unsafe { ht_construct_antipodal(6, 0, 2, &mut set) }, HtStatus::NotApplicable);
}

#[test]
fn checks_report_witnesses() {
    let p = params(3, 2, false);
    let bits = [3u64, 5, 6, 0];
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { ht_vertex_set_from_bits(3, bits.as_ptr(), bits.len(), &mut set) }, HtStatus::Ok);
    let mut ok = true;
    let mut w = [0u64; 3];
    assert_eq!(unsafe { ht_check_triangle_free(set, p, &mut ok, w.as_mut_ptr()) }, HtStatus::Ok);
    assert!(!ok);
    assert_eq!(w, [0, 3, 5]);
    let mut edge = [0u64; 2];
    assert_eq!(unsafe { ht_check_independent(set, p, &mut ok, edge.as_mut_ptr()) }, HtStatus::Ok);
    assert_eq!(edge, [0, 3]);
    let mut count = 0;
    assert_eq!(unsafe { ht_count_triangles_in_set(set, p, &mut count) }, HtStatus::Ok);
    assert_eq!(count, 4);

    let wrong = params(4, 2, false);
    assert_eq!(unsafe { ht_check_triangle_free(set, wrong, &mut ok, ptr::null_mut()) }, HtStatus::InvalidArgument);
    unsafe {
        ht_vertex_set_free(set);
        ht_params_free(p);
        ht_params_free(wrong);
    }
}

#[test]
fn counts_and_bounds() {
    let p = params(6, 2, false);
    let mut count = 0;
    assert_eq!(unsafe { ht_count_triangles_graph(p, &mut count) }, HtStatus::Ok);
    assert_eq!(count, 1280);
    let formula = unsafe { ht_triangle_count_formula(p) };
    assert_eq!(unsafe { CStr::from_ptr(formula) }.to_str().unwrap(), "1280");
    let json = unsafe { ht_bound_report_json(p) };
    let doc: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(doc["upper_r2"], "37");
    assert_eq!(doc["triangle_count"], "1280");
    unsafe {
        ht_string_free(formula);
        ht_string_free(json);
        ht_params_free(p);
    }
    let odd = params(5, 3, true);
    assert!(unsafe { ht_triangle_count_formula(odd) }.is_null());
    unsafe { ht_params_free(odd) };
}

#[test]
fn alteration_and_fixed_bit() {
    let p = params(8, 2, false);
    let mut set = ptr::null_mut();
    let mut trace = ptr::null_mut();
    assert_eq!(unsafe { ht_construct_alteration(p, 0.0, 7, 1, &mut set, &mut trace) }, HtStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(trace) }.to_str().unwrap()).unwrap();
    assert_eq!(doc["final_size"].as_u64().unwrap() as usize, unsafe { ht_vertex_set_len(set) });
    assert_eq!(doc["seed"], 7);
    let mut ok = false;
    assert_eq!(unsafe { ht_check_triangle_free(set, p, &mut ok, ptr::null_mut()) }, HtStatus::Ok);
    assert!(ok);
    unsafe {
        ht_string_free(trace);
        ht_vertex_set_free(set);
    }
    assert_eq!(
        unsafe { ht_construct_alteration(p, 1.5, 0, 1, &mut set, ptr::null_mut()) },
        HtStatus::InvalidArgument
    );
    unsafe { ht_params_free(p) };

    let q = params(6, 4, false);
    let mut fb = ptr::null_mut();
    assert_eq!(unsafe { ht_construct_fixed_bit(q, &mut fb) }, HtStatus::Ok);
    assert_eq!(unsafe { ht_vertex_set_len(fb) }, 9);
    unsafe {
        ht_vertex_set_free(fb);
        ht_params_free(q);
    }
}

#[test]
fn oracle_through_abi() {
    let p = params(4, 2, false);
    let (mut best, mut optimal) = (0usize, false);
    let mut witness = ptr::null_mut();
    assert_eq!(
        unsafe { ht_oracle(p, 1_000_000, 0.0, true, &mut best, &mut optimal, &mut witness) },
        HtStatus::Ok
    );
    assert_eq!((best, optimal), (8, true));
    assert_eq!(unsafe { ht_vertex_set_len(witness) }, 8);
    assert_eq!(
        unsafe { ht_oracle(p, 0, 0.0, true, &mut best, &mut optimal, ptr::null_mut()) },
        HtStatus::InvalidArgument
    );
    unsafe {
        ht_vertex_set_free(witness);
        ht_params_free(p);
    }
}

#[test]
fn parse_errors() {
    let text = CString::new("110\n1x0\n").unwrap();
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { ht_vertex_set_parse(text.as_ptr(), 0, &mut set) }, HtStatus::ParseError);
    assert!(last_error().contains("line 2"));
    assert_eq!(unsafe { ht_vertex_set_parse(ptr::null(), 0, &mut set) }, HtStatus::NullPointer);
}

#[test]
fn header_lists_every_entry_point() {
    let header = include_str!("../include/hypertri.h");
    for sym in [
        "ht_last_error",
        "ht_version",
        "ht_string_free",
        "ht_params_new",
        "ht_params_free",
        "ht_vertex_set_free",
        "ht_vertex_set_len",
        "ht_vertex_set_dim",
        "ht_vertex_set_get",
        "ht_vertex_set_from_bits",
        "ht_vertex_set_parse",
        "ht_vertex_set_to_text",
        "ht_construct_antipodal",
        "ht_construct_fixed_bit",
        "ht_construct_alteration",
        "ht_check_triangle_free",
        "ht_check_independent",
        "ht_count_triangles_graph",
        "ht_count_triangles_in_set",
        "ht_triangle_count_formula",
        "ht_bound_report_json",
        "ht_oracle",
    ] {
        assert!(header.contains(&format!("{sym}(")), "{sym} missing from header");
    }
    assert!(header.contains("typedef struct HtVertexSet HtVertexSet;"));
    let v = unsafe { CStr::from_ptr(ht_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
