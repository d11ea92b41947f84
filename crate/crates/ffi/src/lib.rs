//! C ABI over `wahl-core`.
//!
//! Integers cross the boundary as NUL-terminated decimal strings, rationals as
//! `"p/q"` (or `"p"` when integral). Objects are opaque handles created by a
//! `*_new` or derived function and released by the matching `*_free`.
//! Strings returned through `char **out` belong to the caller and are
//! released with `wahl_string_free`.
//!
//! Every fallible function returns a `WahlStatus`. On anything other than
//! `WAHL_STATUS_OK` the output is left untouched and `wahl_last_error`
//! describes the failure. Positions are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use wahl_core::correspondence::{canonical_bundle_class, phi_backward, phi_forward, BundleClass};
use wahl_core::cyclic_quotient::{
    minimal_resolution, pair_to_cq, wahl_contraction, CyclicQuotient, WahlPair,
};
use wahl_core::markov::{enumerate, mutate_entries, MarkovTriple};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WahlStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not UTF-8.
    InvalidUtf8 = 2,
    /// A string argument was not a decimal integer.
    ParseError = 3,
    /// The inputs violate a mathematical precondition.
    DomainError = 4,
    /// `wahl_command_json` was given an invalid command line.
    UsageError = 5,
    /// Internal failure; please report.
    Panic = 6,
}

/// A Markov triple, sorted ascending.
pub struct WahlMarkovTriple(MarkovTriple);

/// A cyclic quotient singularity `1/r(1, q)` in normal form.
pub struct WahlQuotient(CyclicQuotient);

/// Rank, canonical degree and `c2` of an exceptional bundle class on P².
pub struct WahlBundleClass(BundleClass);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Fail(WahlStatus, String);

impl From<wahl_core::Error> for Fail {
    fn from(e: wahl_core::Error) -> Self {
        Fail(WahlStatus::DomainError, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WahlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            WahlStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            WahlStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(WahlStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(WahlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_int(p: *const c_char, what: &str) -> Result<BigInt, Fail> {
    let s = read_str(p, what)?;
    s.trim()
        .parse()
        .map_err(|_| Fail(WahlStatus::ParseError, format!("{what} = {s:?} is not a decimal integer")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Fail(WahlStatus::Panic, "interior NUL".into()))?;
    out.write(c.into_raw());
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(v)))
}

fn rational_text(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        q.to_string()
    }
}

/// Message for the most recent failure on this thread; empty after a success.
/// Valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn wahl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wahl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wahl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// Markov triples

/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_markov_new(
    a: *const c_char,
    b: *const c_char,
    c: *const c_char,
    out: *mut *mut WahlMarkovTriple,
) -> WahlStatus {
    guard(|| {
        let t = MarkovTriple::new(read_int(a, "a")?, read_int(b, "b")?, read_int(c, "c")?)?;
        put_box(out, WahlMarkovTriple(t))
    })
}

/// # Safety
/// `t` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn wahl_markov_free(t: *mut WahlMarkovTriple) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Entry `pos` (0, 1 or 2) of the sorted triple.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_markov_entry(
    t: *const WahlMarkovTriple,
    pos: usize,
    out: *mut *mut c_char,
) -> WahlStatus {
    guard(|| {
        let t = handle(t, "t")?;
        put_string(out, t.0.get(pos)?.to_string())
    })
}

/// Mutation at `pos` of the sorted triple; the result is sorted again.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_markov_mutate(
    t: *const WahlMarkovTriple,
    pos: usize,
    out: *mut *mut WahlMarkovTriple,
) -> WahlStatus {
    guard(|| {
        let t = handle(t, "t")?;
        let raw = mutate_entries(t.0.entries(), pos)?;
        put_box(out, WahlMarkovTriple(MarkovTriple::from_entries(raw)?))
    })
}

/// Number of triples whose largest entry is at most `max`.
///
/// # Safety
/// `max` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_markov_count(max: *const c_char, out: *mut usize) -> WahlStatus {
    guard(|| {
        let max = read_int(max, "max")?;
        put(out, enumerate(&max).len())
    })
}

// Cyclic quotients

/// `1/r(1, q)` in normal form.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_quotient_new(
    r: *const c_char,
    q: *const c_char,
    out: *mut *mut WahlQuotient,
) -> WahlStatus {
    guard(|| {
        let c = CyclicQuotient::new(&read_int(r, "r")?, &read_int(q, "q")?)?;
        put_box(out, WahlQuotient(c))
    })
}

/// The Wahl singularity `1/n²(1, na - 1)`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_quotient_of_wahl(
    n: *const c_char,
    a: *const c_char,
    out: *mut *mut WahlQuotient,
) -> WahlStatus {
    guard(|| {
        let w = WahlPair::new(&read_int(n, "n")?, &read_int(a, "a")?)?;
        put_box(out, WahlQuotient(pair_to_cq(&w)))
    })
}

/// What remains of `1/n²(1, na - 1)` after contracting every curve of its
/// resolution chain except the first.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_quotient_contraction(
    n: *const c_char,
    a: *const c_char,
    out: *mut *mut WahlQuotient,
) -> WahlStatus {
    guard(|| {
        let w = WahlPair::new(&read_int(n, "n")?, &read_int(a, "a")?)?;
        put_box(out, WahlQuotient(wahl_contraction(&w)))
    })
}

/// # Safety
/// `c` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn wahl_quotient_free(c: *mut WahlQuotient) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Order `r`; `"1"` for a smooth point.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_quotient_order(c: *const WahlQuotient, out: *mut *mut c_char) -> WahlStatus {
    guard(|| put_string(out, handle(c, "c")?.0.order().to_string()))
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_quotient_twist(c: *const WahlQuotient, out: *mut *mut c_char) -> WahlStatus {
    guard(|| put_string(out, handle(c, "c")?.0.twist().to_string()))
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_quotient_is_smooth(c: *const WahlQuotient, out: *mut bool) -> WahlStatus {
    guard(|| put(out, handle(c, "c")?.0.is_smooth()))
}

/// Minimal resolution chain, e.g. `"[3, 5, 2]"`; `"[]"` when smooth.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_quotient_chain(c: *const WahlQuotient, out: *mut *mut c_char) -> WahlStatus {
    guard(|| put_string(out, minimal_resolution(&handle(c, "c")?.0).to_string()))
}

/// Text form such as `"1/25(1,9)"`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_quotient_to_string(
    c: *const WahlQuotient,
    out: *mut *mut c_char,
) -> WahlStatus {
    guard(|| put_string(out, handle(c, "c")?.0.to_string()))
}

// Exceptional bundle classes

/// Class of rank `r` and degree `d`, with `d` reduced to its canonical
/// representative and the exceptional `c2`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_bundle_class_new(
    r: *const c_char,
    d: *const c_char,
    out: *mut *mut WahlBundleClass,
) -> WahlStatus {
    guard(|| {
        let b = canonical_bundle_class(&read_int(r, "r")?, &read_int(d, "d")?)?;
        put_box(out, WahlBundleClass(b))
    })
}

/// # Safety
/// `b` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn wahl_bundle_class_free(b: *mut WahlBundleClass) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_bundle_class_rank(
    b: *const WahlBundleClass,
    out: *mut *mut c_char,
) -> WahlStatus {
    guard(|| put_string(out, handle(b, "b")?.0.rank.to_string()))
}

/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_bundle_class_degree(
    b: *const WahlBundleClass,
    out: *mut *mut c_char,
) -> WahlStatus {
    guard(|| put_string(out, handle(b, "b")?.0.degree.to_string()))
}

/// `c2` as `"p"` or `"p/q"`.
///
/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_bundle_class_c2(
    b: *const WahlBundleClass,
    out: *mut *mut c_char,
) -> WahlStatus {
    guard(|| put_string(out, rational_text(&handle(b, "b")?.0.c2)))
}

/// Bundle class attached to the entry at `pos` of the sorted triple.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_phi_forward(
    t: *const WahlMarkovTriple,
    pos: usize,
    out: *mut *mut WahlBundleClass,
) -> WahlStatus {
    guard(|| {
        let t = handle(t, "t")?;
        put_box(out, WahlBundleClass(phi_forward(&t.0, pos)?))
    })
}

/// The unique triple mapping to `b`.
///
/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_phi_backward(
    b: *const WahlBundleClass,
    out: *mut *mut WahlMarkovTriple,
) -> WahlStatus {
    guard(|| {
        let b = handle(b, "b")?;
        put_box(out, WahlMarkovTriple(phi_backward(&b.0)?))
    })
}

// Command interface

/// Runs a command line without the program name, e.g.
/// `{"wahl", "resolve", "5", "2"}`, and returns
/// its JSON record. `--format json` is appended.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wahl_command_json(
    argc: usize,
    argv: *const *const c_char,
    out: *mut *mut c_char,
) -> WahlStatus {
    guard(|| {
        if argv.is_null() && argc > 0 {
            return Err(null("argv"));
        }
        let mut args = vec!["wahl".to_string()];
        for i in 0..argc {
            args.push(read_str(*argv.add(i), "argv[i]")?.to_string());
        }
        args.extend(["--format".into(), "json".into()]);
        let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
        let code = wahl_core::cli::run(args, &mut stdout, &mut stderr);
        let err = String::from_utf8_lossy(&stderr).trim().to_string();
        match code {
            0 => put_string(out, String::from_utf8_lossy(&stdout).into_owned()),
            2 => Err(Fail(WahlStatus::UsageError, err)),
            _ if err.is_empty() => Err(Fail(WahlStatus::DomainError, "command reported failure".into())),
            _ => Err(Fail(WahlStatus::DomainError, err)),
        }
    })
}
