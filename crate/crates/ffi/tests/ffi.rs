use std::ffi::{c_char, CStr, CString};
use std::ptr;

use dlexplain::fixtures::{PROP_KB, PROP_PROBLEM, TRAINS_KB, TRAINS_PROBLEM, WAREHOUSE_KB, WAREHOUSE_PROBLEM};
use dlexplain_ffi::*;
use serde_json::Value;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { dlx_string_free(p) };
    s
}

fn last_error() -> String {
    let p = dlx_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn kb(text: &str) -> *mut DlxKb {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { dlx_kb_parse(c(text).as_ptr(), &mut out) }, DlxStatus::Ok);
    out
}

#[test]
fn translate_caption_axiom() {
    let mut out = ptr::null_mut();
    let status = unsafe { dlx_translate(c("A => R some (S some B)").as_ptr(), &mut out) };
    assert_eq!(status, DlxStatus::Ok);
    assert!(dlx_last_error_message().is_null());
    assert_eq!(take(out), "forall x0.(A(x0) -> exists x1.(R(x0,x1) & exists x2.(S(x1,x2) & B(x2))))");
}

#[test]
fn translate_reports_parse_errors() {
    let mut out = ptr::null_mut();
    let status = unsafe { dlx_translate(c("A => ").as_ptr(), &mut out) };
    assert_eq!(status, DlxStatus::Parse);
    assert!(out.is_null());
    assert!(last_error().contains("1:"));
}

#[test]
fn verify_on_trains() {
    let h = kb(TRAINS_KB);
    assert_eq!(unsafe { dlx_kb_individual_count(h) }, 10 + 30 + 30);
    let mut out = ptr::null_mut();
    let status =
        unsafe { dlx_verify(h, c(TRAINS_PROBLEM).as_ptr(), c("hasCar some (Closed and Short)").as_ptr(), &mut out) };
    assert_eq!(status, DlxStatus::Ok);
    let v: Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["tp"], 5);
    assert_eq!(v["tn"], 5);
    assert_eq!(v["accuracy"], 1);
    unsafe { dlx_kb_free(h) };
}

#[test]
fn learn_with_default_and_explicit_config() {
    let h = kb(PROP_KB);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { dlx_learn(h, c(PROP_PROBLEM).as_ptr(), ptr::null(), &mut out) }, DlxStatus::Ok);
    let v: Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["solutions"][0]["expression"], "p and q");

    let cfg = DlxConfig { top_k: 1, ..dlx_config_default() };
    assert_eq!(unsafe { dlx_learn(h, c(PROP_PROBLEM).as_ptr(), &cfg, &mut out) }, DlxStatus::Ok);
    let v: Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["solutions"].as_array().unwrap().len(), 1);
    assert_eq!(v["config"]["top_k"], 1);

    let bad = DlxConfig { noise_den: 0, ..dlx_config_default() };
    assert_eq!(unsafe { dlx_learn(h, c(PROP_PROBLEM).as_ptr(), &bad, &mut out) }, DlxStatus::InvalidConfig);
    let bad = DlxConfig { max_length: 0, ..dlx_config_default() };
    assert_eq!(unsafe { dlx_learn(h, c(PROP_PROBLEM).as_ptr(), &bad, &mut out) }, DlxStatus::InvalidConfig);
    assert!(last_error().contains("max_length"));
    unsafe { dlx_kb_free(h) };
}

#[test]
fn warehouse_learn_through_handle() {
    let h = kb(WAREHOUSE_KB);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { dlx_learn(h, c(WAREHOUSE_PROBLEM).as_ptr(), ptr::null(), &mut out) }, DlxStatus::Ok);
    let v: Value = serde_json::from_str(&take(out)).unwrap();
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 10);
    assert!(sols.iter().all(|s| s["accuracy"] == 1));
    unsafe { dlx_kb_free(h) };
}

#[test]
fn null_and_bad_arguments() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { dlx_kb_parse(ptr::null(), &mut out) }, DlxStatus::NullArgument);
    assert_eq!(unsafe { dlx_kb_parse(c("class A").as_ptr(), ptr::null_mut()) }, DlxStatus::NullArgument);
    assert_eq!(unsafe { dlx_kb_parse(c("klass A").as_ptr(), &mut out) }, DlxStatus::Parse);
    let invalid = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { dlx_kb_parse(invalid.as_ptr() as *const c_char, &mut out) }, DlxStatus::InvalidUtf8);

    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { dlx_verify(ptr::null(), c("+ a").as_ptr(), c("Thing").as_ptr(), &mut s) },
        DlxStatus::NullArgument
    );
    let h = kb("class A\nind a\nind b\ntype a A\n");
    assert_eq!(unsafe { dlx_verify(h, c("+ a\n- zz\n").as_ptr(), c("A").as_ptr(), &mut s) }, DlxStatus::Parse);
    assert_eq!(unsafe { dlx_verify(h, c("+ a\n- b\n").as_ptr(), c("A").as_ptr(), &mut s) }, DlxStatus::Ok);
    let v: Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["truePositives"], serde_json::json!(["a"]));
    unsafe {
        dlx_kb_free(h);
        dlx_kb_free(ptr::null_mut());
        dlx_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { dlx_kb_individual_count(ptr::null()) }, 0);
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/dlexplain.h");
    for name in [
        "dlx_config_default",
        "dlx_kb_parse",
        "dlx_kb_free",
        "dlx_kb_individual_count",
        "dlx_verify",
        "dlx_learn",
        "dlx_translate",
        "dlx_last_error_message",
        "dlx_string_free",
        "typedef struct DlxKb DlxKb",
        "DLX_STATUS_PARSE = 3",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
