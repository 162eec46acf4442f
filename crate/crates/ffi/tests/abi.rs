use std::ffi::{CStr, CString};
use std::ptr;

use fqcert_ffi::*;

fn word(text: &str, rank: usize) -> *mut FqWord {
    let s = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fq_word_parse(s.as_ptr(), rank, &mut out) }, FqStatus::Ok);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(fq_last_error_message()) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { fq_string_free(p) };
    s
}

#[test]
fn parse_and_print() {
    let w = word("aaB", 2);
    assert_eq!(take_string(unsafe { fq_word_to_string(w) }), "aaB");
    unsafe { fq_word_free(w) };

    let bad = CString::new("abc").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fq_word_parse(bad.as_ptr(), 2, &mut out) }, FqStatus::BadSyntax);
    assert!(out.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments_are_reported() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fq_word_parse(ptr::null(), 2, &mut out) }, FqStatus::NullPointer);
    let text = CString::new("a").unwrap();
    assert_eq!(unsafe { fq_word_parse(text.as_ptr(), 2, ptr::null_mut()) }, FqStatus::NullPointer);
    let mut flag = false;
    assert_eq!(unsafe { fq_oracle_conjugate(ptr::null(), ptr::null(), &mut flag) }, FqStatus::NullPointer);
    unsafe {
        fq_word_free(ptr::null_mut());
        fq_certificate_free(ptr::null_mut());
        fq_report_free(ptr::null_mut());
        fq_string_free(ptr::null_mut());
    }
}

#[test]
fn oracle() {
    let (a, b) = (word("ab", 2), word("ba", 2));
    let mut conj = false;
    assert_eq!(unsafe { fq_oracle_conjugate(a, b, &mut conj) }, FqStatus::Ok);
    assert!(conj);
    unsafe {
        fq_word_free(a);
        fq_word_free(b);
    }
}

#[test]
fn nonconjugacy_round_trip() {
    let (a, b) = (word("a", 2), word("b", 2));
    let mut cert = ptr::null_mut();
    let status = unsafe { fq_certify_nonconjugate(a, b, FqMode::Auto, ptr::null(), &mut cert, ptr::null_mut()) };
    assert_eq!(status, FqStatus::Ok);
    let json = take_string(unsafe { fq_certificate_to_json(cert) });
    assert!(json.contains("\"modulus\":[2]"));

    let text = CString::new(json.replace("\"modulus\":[2]", "\"modulus\":[3]")).unwrap();
    let mut tampered = ptr::null_mut();
    assert_eq!(unsafe { fq_certificate_from_json(text.as_ptr(), &mut tampered) }, FqStatus::Ok);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { fq_verify(tampered, &mut report) }, FqStatus::Ok);
    assert!(!unsafe { fq_report_accepted(report) });
    let n = unsafe { fq_report_fact_count(report) };
    let failed: Vec<String> = (0..n)
        .filter_map(|i| {
            let mut passed = true;
            let d = unsafe { CStr::from_ptr(fq_report_fact(report, i, &mut passed)) };
            (!passed).then(|| d.to_string_lossy().into_owned())
        })
        .collect();
    assert_eq!(failed, vec!["N is the least modulus with that property"]);
    assert!(unsafe { fq_report_fact(report, n, ptr::null_mut()) }.is_null());

    unsafe {
        fq_report_free(report);
        fq_certificate_free(tampered);
        fq_certificate_free(cert);
        fq_word_free(a);
        fq_word_free(b);
    }
}

#[test]
fn conjugate_inputs_yield_witness() {
    let (a, b) = (word("ab", 2), word("ba", 2));
    let (mut cert, mut h) = (ptr::null_mut(), ptr::null_mut());
    let status = unsafe { fq_certify_nonconjugate(a, b, FqMode::Auto, ptr::null(), &mut cert, &mut h) };
    assert_eq!(status, FqStatus::ElementsConjugate);
    assert!(cert.is_null());
    assert_eq!(take_string(unsafe { fq_word_to_string(h) }), "a");
    unsafe {
        fq_word_free(h);
        fq_word_free(a);
        fq_word_free(b);
    }
}

#[test]
fn omnipotence_orders() {
    let ws = [word("a", 2), word("b", 2)];
    let handles: Vec<*const FqWord> = ws.iter().map(|&w| w as *const _).collect();
    let targets = [2u64, 3];
    let mut cert = ptr::null_mut();
    let caps = fq_caps_default();
    assert_eq!(
        unsafe { fq_certify_omnipotence(handles.as_ptr(), targets.as_ptr(), 2, &caps, &mut cert) },
        FqStatus::Ok
    );
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { fq_verify(cert, &mut report) }, FqStatus::Ok);
    assert!(unsafe { fq_report_accepted(report) });
    assert_eq!(unsafe { fq_report_order_count(report) }, 2);
    let mut o = 0;
    assert_eq!(unsafe { fq_report_order(report, 1, &mut o) }, FqStatus::Ok);
    assert_eq!(o, 3);
    assert_eq!(unsafe { fq_report_order(report, 2, &mut o) }, FqStatus::OutOfRange);

    let dep = [word("a", 2), word("aa", 2)];
    let handles: Vec<*const FqWord> = dep.iter().map(|&w| w as *const _).collect();
    let mut none = ptr::null_mut();
    assert_eq!(
        unsafe { fq_certify_omnipotence(handles.as_ptr(), [1u64, 1].as_ptr(), 2, ptr::null(), &mut none) },
        FqStatus::NotIndependent
    );
    unsafe {
        fq_report_free(report);
        fq_certificate_free(cert);
        for w in ws.into_iter().chain(dep) {
            fq_word_free(w);
        }
    }
}

#[test]
fn malformed_json() {
    let text = CString::new("{\"version\":1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fq_certificate_from_json(text.as_ptr(), &mut out) }, FqStatus::Malformed);
}
