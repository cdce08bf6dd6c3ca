use std::ffi::{CStr, CString};
use std::ptr;

use plumbcalc_ffi::*;

fn fixture(name: &str) -> *mut PcGraph {
    let name = CString::new(name).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { pc_graph_load_fixture(name.as_ptr(), &mut g) }, PcStatus::Ok);
    g
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pc_last_error_message()) }.to_str().unwrap().to_string()
}

#[test]
fn trefoil_upsilon_through_handles() {
    let g = fixture("trefoil");
    let mut n = 0usize;
    assert_eq!(unsafe { pc_graph_class_count(g, &mut n) }, PcStatus::Ok);
    assert_eq!(n, 1);
    let mut u = ptr::null_mut();
    assert_eq!(unsafe { pc_upsilon(g, 0, &mut u) }, PcStatus::Ok);
    assert_eq!(unsafe { pc_upsilon_breakpoint_count(u) }, 3);
    let mut pts = Vec::new();
    for i in 0..3 {
        let (mut a, mut b, mut c, mut d) = (0i64, 0i64, 0i64, 0i64);
        assert_eq!(unsafe { pc_upsilon_breakpoint(u, i, &mut a, &mut b, &mut c, &mut d) }, PcStatus::Ok);
        pts.push((a, b, c, d));
    }
    assert_eq!(pts, vec![(0, 1, 0, 1), (1, 1, -1, 1), (2, 1, 0, 1)]);
    let (mut num, mut den) = (0, 0);
    assert_eq!(unsafe { pc_upsilon_tau(u, &mut num, &mut den) }, PcStatus::Ok);
    assert_eq!((num, den), (1, 1));
    assert_eq!(unsafe { pc_upsilon_d(u, &mut num, &mut den) }, PcStatus::Ok);
    assert_eq!((num, den), (0, 1));
    let (mut a, mut b, mut c, mut d) = (0i64, 0i64, 0i64, 0i64);
    assert_eq!(unsafe { pc_upsilon_breakpoint(u, 3, &mut a, &mut b, &mut c, &mut d) }, PcStatus::OutOfRange);
    unsafe {
        pc_upsilon_free(u);
        pc_graph_free(g);
    }
}

#[test]
fn rp3_d_invariants() {
    let g = fixture("rp3");
    let mut ds = Vec::new();
    for class in 0..2 {
        let mut u = ptr::null_mut();
        assert_eq!(unsafe { pc_upsilon(g, class, &mut u) }, PcStatus::Ok);
        let (mut num, mut den) = (0, 0);
        assert_eq!(unsafe { pc_upsilon_d(u, &mut num, &mut den) }, PcStatus::Ok);
        ds.push((num, den));
        unsafe { pc_upsilon_free(u) };
    }
    ds.sort();
    assert_eq!(ds, vec![(-1, 4), (1, 4)]);
    let mut u = ptr::null_mut();
    assert_eq!(unsafe { pc_upsilon(g, 2, &mut u) }, PcStatus::OutOfRange);
    assert!(u.is_null());
    unsafe { pc_graph_free(g) };
}

#[test]
fn error_codes_follow_the_cli() {
    let mut g = ptr::null_mut();
    let bad = CString::new("v0 *\nv -2\nw -3\nedges:\nv0 v\n").unwrap();
    assert_eq!(unsafe { pc_graph_parse(bad.as_ptr(), &mut g) }, PcStatus::InvalidInput);
    assert!(g.is_null());
    assert!(!last_error().is_empty());

    let indefinite = CString::new("v0 *\nv 1\nedges:\nv0 v\n").unwrap();
    assert_eq!(unsafe { pc_graph_parse(indefinite.as_ptr(), &mut g) }, PcStatus::NotNegativeDefinite);
    assert!(last_error().contains("negative definite"));

    assert_eq!(unsafe { pc_graph_parse(ptr::null(), &mut g) }, PcStatus::NullArgument);
    let name = CString::new("nonesuch").unwrap();
    assert_eq!(unsafe { pc_graph_load_fixture(name.as_ptr(), &mut g) }, PcStatus::InvalidInput);
}

#[test]
fn invariants_as_json() {
    let text = CString::new(plumbcalc::fixtures::fixture("trefoil").unwrap().text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { pc_graph_parse(text.as_ptr(), &mut g) }, PcStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pc_invariants_json(g, 2, &mut s) }, PcStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    assert_eq!(json["classes"][0]["tau"], "1");
    assert_eq!(json["classes"][0]["upsilon_at_zero_equals_d"], true);
    unsafe {
        pc_string_free(s);
        pc_graph_free(g);
    }
    let v = unsafe { CStr::from_ptr(pc_version()) }.to_str().unwrap();
    assert_eq!(v, plumbcalc::ENGINE_VERSION);
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/plumbcalc.h")).unwrap();
    for sym in [
        "pc_graph_parse",
        "pc_graph_load_fixture",
        "pc_graph_free",
        "pc_graph_class_count",
        "pc_upsilon",
        "pc_upsilon_breakpoint_count",
        "pc_upsilon_breakpoint",
        "pc_upsilon_tau",
        "pc_upsilon_d",
        "pc_upsilon_free",
        "pc_invariants_json",
        "pc_string_free",
        "pc_last_error_message",
        "PC_STATUS_NOT_NEGATIVE_DEFINITE = 3",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
}
