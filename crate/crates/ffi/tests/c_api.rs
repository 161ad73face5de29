use std::ffi::CString;
use std::process::Command;
use std::ptr;

use bergman_qc_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 512];
    let n = unsafe { bqc_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n >= 0);
    let bytes: Vec<u8> = buf[..n as usize].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn counterexample_instance_through_the_c_api() {
    unsafe {
        let mut src = ptr::null_mut();
        assert_eq!(bqc_params_new(cstr("1/8").as_ptr(), cstr("1/32").as_ptr(), &mut src), BqcStatus::Ok);
        let mut c = BqcClassification::default();
        assert_eq!(bqc_classify(src, &mut c), BqcStatus::Ok);
        assert_eq!(c.class_id, BqcClass::ExhaustiveHenceComplete as i32);

        let mut img = ptr::null_mut();
        assert_eq!(bqc_transport(src, cstr("2/3").as_ptr(), &mut img), BqcStatus::Ok);
        assert_eq!(bqc_params_r(img), 0.5);
        assert_eq!(bqc_params_t(img), 1.0 / 32.0);
        assert_eq!(bqc_classify(img, &mut c), BqcStatus::Ok);
        assert_eq!(c.class_id, BqcClass::NotComplete as i32);

        let mut l = 0.0;
        assert_eq!(bqc_qc_constant(cstr("2/3").as_ptr(), &mut l), BqcStatus::Ok);
        assert_eq!(l, 3.0);

        let mut g = BqcGamma::default();
        assert_eq!(bqc_gamma_origin(src, 0, &mut g), BqcStatus::Ok);
        assert_eq!(g.verdict, BqcVerdict::Divergent as i32);
        bqc_params_free(src);
        bqc_params_free(img);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut p = ptr::null_mut();
        let s = bqc_params_new(cstr("1/8").as_ptr(), cstr("3/4").as_ptr(), &mut p);
        assert_eq!(s, BqcStatus::InvalidParameter);
        assert!(p.is_null());
        assert!(last_error().contains("t"));
        let s = bqc_params_new(cstr("abc").as_ptr(), cstr("1/4").as_ptr(), &mut p);
        assert_eq!(s, BqcStatus::Parse);
        assert_eq!(bqc_classify(ptr::null(), ptr::null_mut()), BqcStatus::NullPointer);
        let mut tiny = [0 as std::ffi::c_char; 2];
        assert_eq!(bqc_last_error_message(tiny.as_mut_ptr(), tiny.len()), -1);
        let mut out = 0.0;
        assert_eq!(bqc_arc_log_capacity(1.0, std::f64::consts::PI, &mut out), BqcStatus::Ok);
        assert_eq!(bqc_last_error_message(ptr::null_mut(), 0), 0);
        assert!(out.abs() < 1e-15);
    }
}

#[test]
fn kernel_engine_handle() {
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(bqc_kernel_engine_new(BqcKernelDomain::Disc, 0.0, 30, &mut e), BqcStatus::Ok);
        let mut v = BqcKernelValue::default();
        assert_eq!(bqc_kernel_eval(e, 0.0, 0.0, &mut v), BqcStatus::Ok);
        assert!((v.kernel - 1.0 / std::f64::consts::PI).abs() < 1e-12);
        assert!((v.metric - 2.0).abs() < 1e-10);
        assert_eq!(bqc_kernel_eval(e, 1.5, 0.0, &mut v), BqcStatus::OutsideDomain);
        bqc_kernel_engine_free(e);
        let mut w = (0.0, 0.0);
        assert_eq!(bqc_qc_apply(2.0 / 3.0, 0.25, 0.0, &mut w.0, &mut w.1), BqcStatus::Ok);
        assert!((w.0 - 0.25f64.cbrt()).abs() < 1e-14);
    }
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/bergman_qc.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["bqc_params_new", "bqc_classify", "bqc_kernel_eval", "bqc_last_error_message"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    // syntax check with the system C compiler when there is one
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
