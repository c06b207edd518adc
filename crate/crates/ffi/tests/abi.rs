use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use monoid_recon_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = mr_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn monoid_counts() {
    let mut m = ptr::null_mut();
    let mut n = 0;
    unsafe {
        assert_eq!(mr_monoid_corpus(c("E").as_ptr(), &mut m), MR_OK);
        assert_eq!(mr_monoid_size(m, &mut n), MR_OK);
        assert_eq!(n, 3);
        assert_eq!(mr_monoid_topology_count(m, &mut n), MR_OK);
        assert_eq!(n, 4);
        mr_monoid_free(m);
    }
}

#[test]
fn parsed_monoid() {
    let mut m = ptr::null_mut();
    let mut n = 0;
    unsafe {
        assert_eq!(mr_monoid_parse(c("monoid F 2 0\n0 1\n1 1\n").as_ptr(), &mut m), MR_OK);
        assert_eq!(mr_monoid_ideal_count(m, &mut n), MR_OK);
        assert_eq!(n, 3);
        mr_monoid_free(m);
    }
}

#[test]
fn error_codes() {
    let mut m = ptr::null_mut();
    let mut n = 0;
    unsafe {
        assert_eq!(mr_monoid_corpus(c("nope").as_ptr(), &mut m), MR_NOT_FOUND);
        assert!(last_error().contains("nope"));
        assert_eq!(mr_monoid_corpus(ptr::null(), &mut m), MR_NULL_POINTER);
        assert_eq!(mr_monoid_corpus(c("B").as_ptr(), ptr::null_mut()), MR_NULL_POINTER);
        assert_eq!(mr_monoid_size(ptr::null(), &mut n), MR_NULL_POINTER);
        assert_eq!(mr_monoid_parse(c("monoid Q 2 0\n0 1\n1 x\n").as_ptr(), &mut m), MR_PARSE_ERROR);
        assert_eq!(mr_monoid_parse(c("monoid Q 3 0\n0 1 2\n1 1 0\n2 0 2\n").as_ptr(), &mut m), MR_INVALID_DEFINITION);
        assert!(m.is_null());
        let mut r = ptr::null_mut();
        assert_eq!(mr_verify_corpus(c("nope").as_ptr(), &mut r), MR_UNKNOWN_SUITE);
        let bytes = [0xffu8, 0];
        assert_eq!(mr_monoid_corpus(bytes.as_ptr().cast(), &mut m), MR_INVALID_UTF8);
    }
}

#[test]
fn scheme_and_report() {
    let mut x = ptr::null_mut();
    let mut n = 0;
    unsafe {
        assert_eq!(mr_scheme_corpus(c("X2").as_ptr(), &mut x), MR_OK);
        assert_eq!(mr_scheme_open_count(x, &mut n), MR_OK);
        assert_eq!(n, 6);
        mr_scheme_free(x);
        let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/X2.scheme")).unwrap();
        assert_eq!(mr_scheme_parse(c(&text).as_ptr(), &mut x), MR_OK);
        assert_eq!(mr_scheme_centre_size(x, &mut n), MR_OK);
        assert_eq!(n, 5);
        mr_scheme_free(x);

        let mut r = ptr::null_mut();
        assert_eq!(mr_verify_corpus(c("incidence").as_ptr(), &mut r), MR_OK);
        assert_eq!(mr_report_failures(r, &mut n), MR_OK);
        assert_eq!(n, 0);
        assert_eq!(mr_report_record_count(r, &mut n), MR_OK);
        assert!(n > 0);
        let mut records = ptr::null();
        assert_eq!(mr_report_records(r, &mut records), MR_OK);
        let text = CStr::from_ptr(records).to_str().unwrap();
        assert_eq!(text.lines().count(), n + 1);
        mr_report_free(r);
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libmonoid_recon_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let out = std::env::temp_dir().join(format!("monoid-recon-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
