//! C ABI over `fqcert`.
//!
//! Every object crosses the boundary as an opaque pointer that the caller
//! releases with the matching `*_free` function. Functions return an
//! `FqStatus`; on failure a description is available from
//! `fq_last_error_message` on the same thread. Strings returned by the
//! library are NUL-terminated and released with `fq_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fqcert::words::oracle_conjugate;
use fqcert::{Caps, Certificate, Error, SearchMode, VerificationReport, Word};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BadSyntax = 3,
    RankMismatch = 4,
    TrivialWord = 5,
    ElementsConjugate = 6,
    SearchExhausted = 7,
    NotIndependent = 8,
    Malformed = 9,
    BadArgument = 10,
    OutOfRange = 11,
    Internal = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FqMode {
    Auto = 0,
    Strong = 1,
    Weak = 2,
}

/// Search limits. Obtain defaults from `fq_caps_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FqCaps {
    pub max_index: u64,
    pub max_prime: u64,
    pub max_rounds: u64,
    pub jobs: u64,
}

/// A reduced free-group word.
pub struct FqWord(Word);

/// A non-conjugacy or omnipotence certificate.
pub struct FqCertificate(Certificate);

/// The facts checked by a verifier and the verdict.
pub struct FqReport {
    report: VerificationReport,
    descriptions: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> FqStatus {
    match e {
        Error::BadSyntax(_) | Error::IndexOutOfRange { .. } => FqStatus::BadSyntax,
        Error::BadRank(_) | Error::BadArgument(_) => FqStatus::BadArgument,
        Error::RankMismatch(..) => FqStatus::RankMismatch,
        Error::TrivialWord => FqStatus::TrivialWord,
        Error::ElementsConjugate { .. } => FqStatus::ElementsConjugate,
        Error::SearchExhausted { .. } => FqStatus::SearchExhausted,
        Error::NotIndependent { .. } => FqStatus::NotIndependent,
        Error::Malformed(_) => FqStatus::Malformed,
        _ => FqStatus::Internal,
    }
}

fn fail(e: Error) -> FqStatus {
    set_error(e.to_string());
    status_of(&e)
}

/// Runs `f`, turning panics into `FqStatus::Panic`.
fn guard(f: impl FnOnce() -> FqStatus) -> FqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            FqStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, FqStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(FqStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        FqStatus::InvalidUtf8
    })
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, FqStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        FqStatus::NullPointer
    })
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> FqStatus {
    *out = Box::into_raw(Box::new(value));
    FqStatus::Ok
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! check_out {
    ($out:expr) => {
        if $out.is_null() {
            set_error("null output pointer");
            return FqStatus::NullPointer;
        }
    };
}

fn caps_of(caps: Option<&FqCaps>) -> Caps {
    match caps {
        None => Caps::default(),
        Some(c) => Caps {
            max_index: c.max_index as usize,
            max_prime: c.max_prime,
            max_rounds: c.max_rounds as usize,
            jobs: c.jobs.max(1) as usize,
            ..Caps::default()
        },
    }
}

/// The message for the last failed call on this thread; empty when none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn fq_caps_default() -> FqCaps {
    let c = Caps::default();
    FqCaps {
        max_index: c.max_index as u64,
        max_prime: c.max_prime,
        max_rounds: c.max_rounds as u64,
        jobs: c.jobs as u64,
    }
}

/// Parses `text` (`a`–`z` generators, `A`–`Z` inverses, `1` for the
/// identity) over `rank` generators.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_word_parse(text: *const c_char, rank: usize, out: *mut *mut FqWord) -> FqStatus {
    guard(|| {
        check_out!(out);
        let text = try_ffi!(str_arg(text));
        match Word::parse(text, rank) {
            Ok(w) => write_out(out, FqWord(w)),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `w` must come from `fq_word_parse` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fq_word_free(w: *mut FqWord) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// The word in text syntax; release with `fq_string_free`.
///
/// # Safety
/// `w` must be a live word handle.
#[no_mangle]
pub unsafe extern "C" fn fq_word_to_string(w: *const FqWord) -> *mut c_char {
    match w.as_ref() {
        Some(w) => into_c_string(w.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// Decides conjugacy of two words.
///
/// # Safety
/// `a`, `b` must be live word handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_oracle_conjugate(a: *const FqWord, b: *const FqWord, out: *mut bool) -> FqStatus {
    guard(|| {
        check_out!(out);
        let (a, b) = (try_ffi!(ref_arg(a)), try_ffi!(ref_arg(b)));
        match oracle_conjugate(&a.0, &b.0) {
            Ok(c) => {
                *out = c;
                FqStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Certifies that `a` and `b` are not conjugate. When they are conjugate the
/// status is `ElementsConjugate` and, if `conjugator` is non-null, a word `h`
/// with `h⁻¹ a h = b` is written there.
///
/// # Safety
/// `a`, `b` must be live word handles; `caps` may be null for defaults;
/// `out` must be writable; `conjugator` may be null.
#[no_mangle]
pub unsafe extern "C" fn fq_certify_nonconjugate(
    a: *const FqWord,
    b: *const FqWord,
    mode: FqMode,
    caps: *const FqCaps,
    out: *mut *mut FqCertificate,
    conjugator: *mut *mut FqWord,
) -> FqStatus {
    guard(|| {
        check_out!(out);
        let (a, b) = (try_ffi!(ref_arg(a)), try_ffi!(ref_arg(b)));
        let mode = match mode {
            FqMode::Auto => SearchMode::Auto,
            FqMode::Strong => SearchMode::Strong,
            FqMode::Weak => SearchMode::Weak,
        };
        match fqcert::certify_nonconjugate(&a.0, &b.0, mode, &caps_of(caps.as_ref())) {
            Ok(c) => write_out(out, FqCertificate(Certificate::Nonconjugacy(c))),
            Err(Error::ElementsConjugate { conjugator: h }) => {
                if !conjugator.is_null() {
                    write_out(conjugator, FqWord(h.clone()));
                }
                fail(Error::ElementsConjugate { conjugator: h })
            }
            Err(e) => fail(e),
        }
    })
}

/// Certifies that the `len` elements can be given orders `targets[i]·K` in
/// one finite quotient.
///
/// # Safety
/// `elements` and `targets` must point to `len` entries; `caps` may be null;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_certify_omnipotence(
    elements: *const *const FqWord,
    targets: *const u64,
    len: usize,
    caps: *const FqCaps,
    out: *mut *mut FqCertificate,
) -> FqStatus {
    guard(|| {
        check_out!(out);
        if len == 0 || elements.is_null() || targets.is_null() {
            set_error("need at least one element and target");
            return FqStatus::NullPointer;
        }
        let handles = std::slice::from_raw_parts(elements, len);
        let mut words = Vec::with_capacity(len);
        for &h in handles {
            words.push(try_ffi!(ref_arg(h)).0.clone());
        }
        let targets = std::slice::from_raw_parts(targets, len);
        match fqcert::certify_omnipotence(&words, targets, &caps_of(caps.as_ref())) {
            Ok(c) => write_out(out, FqCertificate(Certificate::Omnipotence(c))),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `c` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fq_certificate_free(c: *mut FqCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Canonical JSON text; release with `fq_string_free`.
///
/// # Safety
/// `c` must be a live certificate handle.
#[no_mangle]
pub unsafe extern "C" fn fq_certificate_to_json(c: *const FqCertificate) -> *mut c_char {
    match c.as_ref() {
        Some(c) => into_c_string(fqcert::to_canonical_json(&c.0)),
        None => ptr::null_mut(),
    }
}

/// Parses certificate JSON. Only the shape is checked; use `fq_verify`.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_certificate_from_json(text: *const c_char, out: *mut *mut FqCertificate) -> FqStatus {
    guard(|| {
        check_out!(out);
        let text = try_ffi!(str_arg(text));
        match fqcert::from_json(text) {
            Ok(c) => write_out(out, FqCertificate(c)),
            Err(e) => fail(e),
        }
    })
}

/// Independently re-checks a certificate.
///
/// # Safety
/// `c` must be a live certificate handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_verify(c: *const FqCertificate, out: *mut *mut FqReport) -> FqStatus {
    guard(|| {
        check_out!(out);
        let c = try_ffi!(ref_arg(c));
        let report = fqcert::verify(&c.0);
        let descriptions =
            report.facts.iter().map(|f| CString::new(f.description.clone()).unwrap_or_default()).collect();
        write_out(out, FqReport { report, descriptions })
    })
}

/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn fq_report_accepted(r: *const FqReport) -> bool {
    r.as_ref().is_some_and(|r| r.report.accepted())
}

/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn fq_report_fact_count(r: *const FqReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.facts.len())
}

/// Description of fact `i`, owned by the report; null when out of range.
///
/// # Safety
/// `r` must be a live report handle; `passed` may be null.
#[no_mangle]
pub unsafe extern "C" fn fq_report_fact(r: *const FqReport, i: usize, passed: *mut bool) -> *const c_char {
    let Some(r) = r.as_ref() else {
        return ptr::null();
    };
    match (r.report.facts.get(i), r.descriptions.get(i)) {
        (Some(f), Some(d)) => {
            if !passed.is_null() {
                *passed = f.passed;
            }
            d.as_ptr()
        }
        _ => ptr::null(),
    }
}

/// Number of element orders computed (omnipotence certificates only).
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn fq_report_order_count(r: *const FqReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.orders.len())
}

/// # Safety
/// `r` must be a live report handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_report_order(r: *const FqReport, i: usize, out: *mut u64) -> FqStatus {
    let Some(r) = r.as_ref() else {
        return FqStatus::NullPointer;
    };
    check_out!(out);
    match r.report.orders.get(i) {
        Some(&o) => {
            *out = o;
            FqStatus::Ok
        }
        None => {
            set_error(format!("order index {i} out of range"));
            FqStatus::OutOfRange
        }
    }
}

/// # Safety
/// `r` must come from `fq_verify` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fq_report_free(r: *mut FqReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
