use std::ffi::{c_char, CStr, CString};
use std::ptr;

use curvcheck_ffi::*;

fn last_error() -> String {
    let p = cc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn chart(name: &str, params: Option<&str>) -> *mut CcChart {
    let name = CString::new(name).unwrap();
    let params = params.map(|p| CString::new(p).unwrap());
    let mut out = ptr::null_mut();
    let st = unsafe {
        cc_chart_new(
            name.as_ptr(),
            params.as_ref().map_or(ptr::null(), |p| p.as_ptr()),
            &mut out,
        )
    };
    assert_eq!(
        st,
        CcStatus::Ok,
        "{}",
        if st == CcStatus::Ok {
            String::new()
        } else {
            last_error()
        }
    );
    out
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { cc_string_free(p) };
    s
}

#[test]
fn sphere_curvature_through_the_c_abi() {
    let c = chart("sphere", Some(r#"{"m": 3, "curvature": 4}"#));
    let mut dim = 0;
    assert_eq!(unsafe { cc_chart_dim(c, &mut dim) }, CcStatus::Ok);
    assert_eq!(dim, 3);

    let x = [0.1, -0.2, 0.05];
    let (u, v) = ([1.0, 0.3, 0.0], [0.0, 1.0, -0.5]);
    let mut k = 0.0;
    assert_eq!(
        unsafe { cc_sectional(c, x.as_ptr(), u.as_ptr(), v.as_ptr(), &mut k) },
        CcStatus::Ok
    );
    assert!((k - 4.0).abs() < 1e-10);

    let mut r = vec![0.0; 81];
    assert_eq!(
        unsafe { cc_riemann_tensor(c, x.as_ptr(), r.as_mut_ptr(), r.len()) },
        CcStatus::Ok
    );
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * 3 + b) * 3 + c) * 3 + d;
    assert!((r[idx(0, 1, 0, 1)] + r[idx(1, 0, 0, 1)]).abs() < 1e-12);

    // conformally flat chart with g = λ δ: Ric(e0, e0) = 2Kλ and R_0110 = Kλ²
    let e0 = [1.0, 0.0, 0.0];
    let mut ric = 0.0;
    assert_eq!(
        unsafe { cc_ricci(c, x.as_ptr(), e0.as_ptr(), e0.as_ptr(), &mut ric) },
        CcStatus::Ok
    );
    assert!((ric * ric / r[idx(0, 1, 1, 0)] - 16.0).abs() < 1e-9);

    let mut small = vec![0.0; 10];
    assert_eq!(
        unsafe { cc_riemann_tensor(c, x.as_ptr(), small.as_mut_ptr(), small.len()) },
        CcStatus::BufferTooSmall
    );
    assert!(last_error().contains("81"));
    unsafe { cc_chart_free(c) };
}

#[test]
fn kahler_charts_expose_their_metric() {
    let c = chart("fubini-study", Some(r#"{"n": 2}"#));
    let mut dim = 0;
    assert_eq!(unsafe { cc_chart_dim(c, &mut dim) }, CcStatus::Ok);
    assert_eq!(dim, 4);
    // holomorphic plane: sectional curvature 4
    let x = [0.2, 0.1, -0.3, 0.0];
    // coordinates are (x1, x2, y1, y2), so J∂x1 = ∂y1
    let (u, ju) = ([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]);
    let mut k = 0.0;
    assert_eq!(
        unsafe { cc_sectional(c, x.as_ptr(), u.as_ptr(), ju.as_ptr(), &mut k) },
        CcStatus::Ok
    );
    assert!((k - 4.0).abs() < 1e-9, "{k}");
    unsafe { cc_chart_free(c) };
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut out = ptr::null_mut();
    let bad = CString::new("froba").unwrap();
    assert_eq!(
        unsafe { cc_chart_new(bad.as_ptr(), ptr::null(), &mut out) },
        CcStatus::UnknownName
    );
    assert!(last_error().contains("sphere"));
    assert!(out.is_null());

    let name = CString::new("round-sphere").unwrap();
    assert_eq!(
        unsafe { cc_chart_new(name.as_ptr(), ptr::null(), &mut out) },
        CcStatus::InvalidArgument
    );

    let name = CString::new("sphere").unwrap();
    let params = CString::new("{not json").unwrap();
    assert_eq!(
        unsafe { cc_chart_new(name.as_ptr(), params.as_ptr(), &mut out) },
        CcStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cc_chart_new(ptr::null(), ptr::null(), &mut out) },
        CcStatus::NullArgument
    );

    let c = chart("euclidean", None);
    let x = [0.0; 3];
    let u = [1.0, 0.0, 0.0];
    let mut k = 0.0;
    assert_eq!(
        unsafe { cc_sectional(c, x.as_ptr(), u.as_ptr(), u.as_ptr(), &mut k) },
        CcStatus::Geometry
    );
    assert!(last_error().contains("degenerate"));
    assert_eq!(
        unsafe { cc_sectional(c, x.as_ptr(), u.as_ptr(), ptr::null(), &mut k) },
        CcStatus::NullArgument
    );

    // a successful call clears the message
    let mut dim = 0;
    assert_eq!(unsafe { cc_chart_dim(c, &mut dim) }, CcStatus::Ok);
    assert!(cc_last_error().is_null());
    unsafe { cc_chart_free(c) };
    unsafe { cc_chart_free(ptr::null_mut()) };
}

#[test]
fn scenarios_and_the_suite_return_json() {
    let sc =
        CString::new(r#"{"ambient": "s2xs2", "checks": ["einstein", "constant-curvature"], "points": {"random": 3}}"#)
            .unwrap();
    let mut report = ptr::null_mut();
    let mut exit = -1;
    assert_eq!(
        unsafe { cc_run_scenario(sc.as_ptr(), 2, &mut report, &mut exit) },
        CcStatus::Ok
    );
    assert_eq!(exit, 1);
    let v: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);

    let bad = CString::new(r#"{"ambient": "sphere", "checks": ["froba"]}"#).unwrap();
    let st = unsafe { cc_run_scenario(bad.as_ptr(), 1, &mut report, &mut exit) };
    assert_ne!(st, CcStatus::Ok);
    assert!(last_error().contains("froba"));

    let only = CString::new("kahler").unwrap();
    assert_eq!(
        unsafe { cc_verify_suite(only.as_ptr(), 42, 2, &mut report, &mut exit) },
        CcStatus::Ok
    );
    assert_eq!(exit, 0);
    let a = take_string(report);
    assert_eq!(
        unsafe { cc_verify_suite(only.as_ptr(), 42, 1, &mut report, &mut exit) },
        CcStatus::Ok
    );
    assert_eq!(a, take_string(report));
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/curvcheck.h")).unwrap();
    for f in [
        "cc_last_error",
        "cc_chart_new",
        "cc_chart_free",
        "cc_chart_dim",
        "cc_sectional",
        "cc_ricci",
        "cc_riemann_tensor",
        "cc_run_scenario",
        "cc_verify_suite",
        "cc_string_free",
        "typedef struct CcChart CcChart",
        "CC_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(f), "{f} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/curvcheck.h");
    let Ok(status) = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c", header])
        .status()
    else {
        eprintln!("no C compiler on PATH, skipping");
        return;
    };
    assert!(status.success());
}
