use std::ffi::{CStr, CString};
use std::ptr;

use minmatch_ffi::*;

fn parse(text: &str) -> *mut MmGraph {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { mm_graph_parse(c.as_ptr(), &mut g) }, MmStatus::Ok);
    assert!(!g.is_null());
    g
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { mm_string_free(s) };
    out
}

const K4: &str = "mg 4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

#[test]
fn counts_and_sizes() {
    let g = parse(K4);
    let (mut n, mut m, mut c) = (0usize, 0usize, 0u64);
    unsafe {
        assert_eq!(mm_graph_vertex_count(g, &mut n), MmStatus::Ok);
        assert_eq!(mm_graph_edge_count(g, &mut m), MmStatus::Ok);
        assert_eq!(mm_count_matchings(g, 0, &mut c), MmStatus::Ok);
    }
    assert_eq!((n, m, c), (4, 6, 3));
    unsafe {
        assert_eq!(mm_count_matchings(g, 2, &mut c), MmStatus::Ok);
        mm_graph_free(g);
    }
    assert_eq!(c, 2);
}

#[test]
fn minimality_verdicts() {
    let g = parse(K4);
    let mut v = MmMinimality::default();
    assert_eq!(unsafe { mm_minimality(g, 3, &mut v) }, MmStatus::Ok);
    assert!(v.is_minimal && !v.has_witness && v.count == 3 && v.count_exact);
    assert_eq!(unsafe { mm_minimality(g, 2, &mut v) }, MmStatus::Ok);
    assert!(!v.is_minimal && v.has_witness && v.witness_edge == 0);
    assert_eq!(unsafe { mm_minimality(g, 0, &mut v) }, MmStatus::InvalidArgument);
    unsafe { mm_graph_free(g) };
}

#[test]
fn canonical_form_and_json_outputs() {
    let g = parse("mg 4 6\n2 3\n0 2\n1 3\n0 1\n1 2\n0 3\n");
    let mut s = ptr::null_mut();
    let mut aut = 0u64;
    assert_eq!(unsafe { mm_canonical_form(g, &mut s, &mut aut) }, MmStatus::Ok);
    assert_eq!(take(s), K4);
    assert_eq!(aut, 24);

    assert_eq!(unsafe { mm_reduce_json(g, &mut s) }, MmStatus::Ok);
    assert!(take(s).contains("\"stripped_k2\":0"));
    assert_eq!(unsafe { mm_classify_json(g, 3, &mut s) }, MmStatus::Ok);
    assert!(take(s).contains("\"name\":\"K4\""));
    unsafe { mm_graph_free(g) };

    assert_eq!(unsafe { mm_search_family_json(2, 4, 1, &mut s) }, MmStatus::Ok);
    let report = take(s);
    assert!(report.contains("\"canonical\":\"mg 2 2\\n0 1\\n0 1\\n\""), "{report}");
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("mg 2 1\n0 0\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { mm_graph_parse(bad.as_ptr(), &mut g) }, MmStatus::ParseError);
    assert!(g.is_null());
    let msg = unsafe { CStr::from_ptr(mm_last_error_message()) }.to_str().unwrap();
    assert!(msg.contains("loop"), "{msg}");

    assert_eq!(unsafe { mm_graph_parse(ptr::null(), &mut g) }, MmStatus::NullPointer);
    let mut c = 0;
    assert_eq!(unsafe { mm_count_matchings(ptr::null(), 0, &mut c) }, MmStatus::NullPointer);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mm_search_family_json(2, 5, 1, &mut s) }, MmStatus::InvalidArgument);
    assert!(s.is_null());
    unsafe {
        mm_graph_free(ptr::null_mut());
        mm_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/minmatch.h")).unwrap();
    for name in [
        "mm_graph_parse",
        "mm_graph_free",
        "mm_graph_vertex_count",
        "mm_graph_edge_count",
        "mm_count_matchings",
        "mm_minimality",
        "mm_reduce_json",
        "mm_classify_json",
        "mm_canonical_form",
        "mm_search_family_json",
        "mm_string_free",
        "mm_last_error_message",
        "typedef struct MmGraph MmGraph",
        "MM_STATUS_RESOURCE_GUARD",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
