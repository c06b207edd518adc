//! C ABI over `monoid_recon`.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free`. Every call returns an [`MrStatus`]; on
//! anything but `MR_OK` a message is available from
//! [`mr_last_error_message`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use monoid_recon::corpus;
use monoid_recon::harness::parse::load;
use monoid_recon::harness::report::Report;
use monoid_recon::harness::suites::{run, Suite, SuiteConfig, Target};
use monoid_recon::ideals::{enumerate_ideals, spec};
use monoid_recon::monoid::FiniteCommMonoid;
use monoid_recon::scheme::sections::centre;
use monoid_recon::scheme::{build_scheme, MonoidScheme};
use monoid_recon::topology::Site;

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrStatus {
    MR_OK = 0,
    MR_NULL_POINTER = 1,
    MR_INVALID_UTF8 = 2,
    MR_PARSE_ERROR = 3,
    MR_INVALID_DEFINITION = 4,
    MR_NOT_FOUND = 5,
    MR_UNKNOWN_SUITE = 6,
    MR_PANIC = 7,
}

pub use MrStatus::*;

/// A finite commutative monoid.
pub struct MrMonoid {
    inner: FiniteCommMonoid,
}

/// A monoid scheme glued from affine charts.
pub struct MrScheme {
    inner: MonoidScheme,
}

/// The outcome of a verification run.
pub struct MrReport {
    inner: Report,
    records: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: MrStatus, msg: impl Into<String>) -> MrStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> MrStatus + UnwindSafe) -> MrStatus {
    catch_unwind(f).unwrap_or_else(|_| fail(MR_PANIC, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, MrStatus> {
    if s.is_null() {
        return Err(fail(MR_NULL_POINTER, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(MR_INVALID_UTF8, "string is not UTF-8"))
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

unsafe fn write_out<T>(out: *mut T, value: T) -> MrStatus {
    if out.is_null() {
        return fail(MR_NULL_POINTER, "null output pointer");
    }
    out.write(value);
    MR_OK
}

/// Boxes `value` into a handle, checking `out` first so nothing leaks.
unsafe fn give<T>(out: *mut *mut T, value: T) -> MrStatus {
    if out.is_null() {
        return fail(MR_NULL_POINTER, "null output pointer");
    }
    write_out(out, Box::into_raw(Box::new(value)))
}

/// The message for the last failing call on this thread, or null. The
/// pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn mr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn mr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Looks up a corpus monoid by name.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_monoid_corpus(name: *const c_char, out: *mut *mut MrMonoid) -> MrStatus {
    guard(|| {
        let name = try_status!(read_str(name));
        match corpus::monoid_by_name(name) {
            Some(m) => give(out, MrMonoid { inner: m }),
            None => fail(MR_NOT_FOUND, format!("no corpus monoid `{name}`")),
        }
    })
}

/// Parses definition text and returns its first monoid.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_monoid_parse(text: *const c_char, out: *mut *mut MrMonoid) -> MrStatus {
    guard(|| {
        let text = try_status!(read_str(text));
        let inputs = match load(text, &corpus::monoids()) {
            Ok(i) => i,
            Err(e) => return fail(MR_PARSE_ERROR, e.to_string()),
        };
        if let Some((name, problem)) = inputs.invalid.first() {
            return fail(MR_INVALID_DEFINITION, format!("{name}: {problem}"));
        }
        match inputs.monoids.into_iter().next() {
            Some(m) => give(out, MrMonoid { inner: m }),
            None => fail(MR_NOT_FOUND, "no monoid in input"),
        }
    })
}

/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mr_monoid_free(m: *mut MrMonoid) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

unsafe fn with_monoid(m: *const MrMonoid, out: *mut usize, f: impl FnOnce(&FiniteCommMonoid) -> usize + UnwindSafe) -> MrStatus {
    guard(|| match m.as_ref() {
        Some(m) => write_out(out, f(&m.inner)),
        None => fail(MR_NULL_POINTER, "null monoid"),
    })
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_monoid_size(m: *const MrMonoid, out: *mut usize) -> MrStatus {
    with_monoid(m, out, |m| m.size())
}

/// Number of ideals, the empty ideal included.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_monoid_ideal_count(m: *const MrMonoid, out: *mut usize) -> MrStatus {
    with_monoid(m, out, |m| enumerate_ideals(m).len())
}

/// Number of prime ideals, the empty ideal included.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_monoid_prime_count(m: *const MrMonoid, out: *mut usize) -> MrStatus {
    with_monoid(m, out, |m| spec(m).size())
}

/// Number of Grothendieck topologies.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_monoid_topology_count(m: *const MrMonoid, out: *mut usize) -> MrStatus {
    with_monoid(m, out, |m| Site::new(m).enumerate_topologies().len())
}

/// Looks up a corpus scheme by name.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_scheme_corpus(name: *const c_char, out: *mut *mut MrScheme) -> MrStatus {
    guard(|| {
        let name = try_status!(read_str(name));
        let Some(g) = corpus::scheme_by_name(name) else {
            return fail(MR_NOT_FOUND, format!("no corpus scheme `{name}`"));
        };
        match build_scheme(&g) {
            Ok(x) => give(out, MrScheme { inner: x }),
            Err(e) => fail(MR_INVALID_DEFINITION, e.to_string()),
        }
    })
}

/// Parses definition text and builds its first scheme.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_scheme_parse(text: *const c_char, out: *mut *mut MrScheme) -> MrStatus {
    guard(|| {
        let text = try_status!(read_str(text));
        let inputs = match load(text, &corpus::monoids()) {
            Ok(i) => i,
            Err(e) => return fail(MR_PARSE_ERROR, e.to_string()),
        };
        if let Some((name, problem)) = inputs.invalid.first() {
            return fail(MR_INVALID_DEFINITION, format!("{name}: {problem}"));
        }
        let Some(g) = inputs.schemes.first() else {
            return fail(MR_NOT_FOUND, "no scheme in input");
        };
        match build_scheme(g) {
            Ok(x) => give(out, MrScheme { inner: x }),
            Err(e) => fail(MR_INVALID_DEFINITION, e.to_string()),
        }
    })
}

/// # Safety
/// `x` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mr_scheme_free(x: *mut MrScheme) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

unsafe fn with_scheme(x: *const MrScheme, out: *mut usize, f: impl FnOnce(&MonoidScheme) -> usize + UnwindSafe) -> MrStatus {
    guard(|| match x.as_ref() {
        Some(x) => write_out(out, f(&x.inner)),
        None => fail(MR_NULL_POINTER, "null scheme"),
    })
}

/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_scheme_point_count(x: *const MrScheme, out: *mut usize) -> MrStatus {
    with_scheme(x, out, |x| x.point_count())
}

/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_scheme_open_count(x: *const MrScheme, out: *mut usize) -> MrStatus {
    with_scheme(x, out, |x| x.opens().len())
}

/// Size of the monoid of global sections of the structure sheaf.
///
/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_scheme_centre_size(x: *const MrScheme, out: *mut usize) -> MrStatus {
    with_scheme(x, out, |x| centre(x).size())
}

/// Runs one suite, or every suite when `suite` is null, over the corpus.
///
/// # Safety
/// `suite` must be null or a nul-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_verify_corpus(suite: *const c_char, out: *mut *mut MrReport) -> MrStatus {
    guard(|| {
        let suites = if suite.is_null() {
            Suite::ALL.to_vec()
        } else {
            let name = try_status!(read_str(suite));
            match Suite::from_name(name) {
                Some(s) => vec![s],
                None => return fail(MR_UNKNOWN_SUITE, format!("unknown suite `{name}`")),
            }
        };
        let report = Report::new(b"corpus\n", run(&Target::corpus(), &suites, &SuiteConfig::default()));
        let records = CString::new(report.render_records(false)).expect("records contain no nul");
        give(out, MrReport { inner: report, records })
    })
}

/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_report_failures(r: *const MrReport, out: *mut usize) -> MrStatus {
    guard(|| match r.as_ref() {
        Some(r) => write_out(out, r.inner.failures()),
        None => fail(MR_NULL_POINTER, "null report"),
    })
}

/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_report_record_count(r: *const MrReport, out: *mut usize) -> MrStatus {
    guard(|| match r.as_ref() {
        Some(r) => write_out(out, r.inner.records.len()),
        None => fail(MR_NULL_POINTER, "null report"),
    })
}

/// The machine-readable records. The string is owned by the report.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_report_records(r: *const MrReport, out: *mut *const c_char) -> MrStatus {
    guard(|| match r.as_ref() {
        Some(r) => write_out(out, r.records.as_ptr()),
        None => fail(MR_NULL_POINTER, "null report"),
    })
}

/// # Safety
/// `r` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mr_report_free(r: *mut MrReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
