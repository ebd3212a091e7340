#![allow(clippy::excessive_precision)]

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use catalytic_otto_ffi::*;

fn engine(beta_h: f64, omega_h: f64, beta_c: f64, omega_c: f64) -> *mut CottoEngine {
    let mut e = ptr::null_mut();
    let s = unsafe { cotto_engine_new(beta_h, omega_h, beta_c, omega_c, &mut e) };
    assert_eq!(s, CottoStatus::Ok);
    e
}

fn last_error() -> String {
    let p = cotto_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn d_otto_cycle_through_the_abi() {
    let e = engine(0.3, 1.0, 3.0, 0.5);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cotto_protocol_d_otto(2, &mut p) }, CottoStatus::Ok);
    let mut out = CottoCycle::default();
    let mut cat = [0.0; 4];
    let s = unsafe { cotto_run_cycle(e, p, CottoFixedPoint::MaxWork, &mut out, cat.as_mut_ptr(), cat.len()) };
    assert_eq!(s, CottoStatus::Ok);
    assert!(out.has_eta);
    assert!((out.eta - 0.75).abs() < 1e-12);
    assert!((out.work - 0.084825889529098703536).abs() < 1e-15);
    assert_eq!(out.catalyst_dim, 2);
    assert!((cat[0] + cat[1] - 1.0).abs() < 1e-15);
    assert_eq!(cat[2..], [0.0, 0.0]);

    let mut cf = CottoClosedForm::default();
    assert_eq!(unsafe { cotto_closed_form(e, 2, &mut cf) }, CottoStatus::Ok);
    assert!(((cf.work_d - out.work) / cf.work_d).abs() < 1e-12);
    assert!(cf.in_engine_regime);

    let mut regime = false;
    assert_eq!(unsafe { cotto_engine_regime(e, 5, &mut regime) }, CottoStatus::Ok);
    assert!(!regime);
    unsafe {
        cotto_protocol_free(p);
        cotto_engine_free(e);
    }
}

#[test]
fn parsed_identity_protocol_has_no_efficiency() {
    let e = engine(0.3, 1.0, 3.0, 0.5);
    let text = CString::new("# nothing happens\n").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { cotto_protocol_parse(text.as_ptr(), 2, &mut p) },
        CottoStatus::Ok
    );
    let mut out = CottoCycle::default();
    let s = unsafe { cotto_run_cycle(e, p, CottoFixedPoint::MaxEfficiency, &mut out, ptr::null_mut(), 0) };
    assert_eq!(s, CottoStatus::Ok);
    assert!(!out.has_eta);
    assert_eq!((out.q_h, out.q_c, out.work), (0.0, 0.0, 0.0));
    unsafe {
        cotto_protocol_free(p);
        cotto_engine_free(e);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut e = ptr::null_mut();
    let s = unsafe { cotto_engine_new(f64::NAN, 1.0, 3.0, 0.5, &mut e) };
    assert_eq!(s, CottoStatus::InvalidArgument);
    assert!(e.is_null());
    assert!(last_error().contains("finite"));

    assert_eq!(
        unsafe { cotto_engine_new(0.3, 1.0, 3.0, 0.5, ptr::null_mut()) },
        CottoStatus::NullPointer
    );

    let bad = CString::new("0 0 0 1 1 0\n0 0 0 0 1 0\n").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { cotto_protocol_parse(bad.as_ptr(), 1, &mut p) },
        CottoStatus::ParseError
    );
    assert!(p.is_null());
    assert!(!last_error().is_empty());

    let e = engine(0.3, 1.0, 3.0, 0.5);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cotto_protocol_d_otto(3, &mut p) }, CottoStatus::Ok);
    let mut out = CottoCycle::default();
    let mut cat = [0.0; 2];
    let s = unsafe { cotto_run_cycle(e, p, CottoFixedPoint::MaxWork, &mut out, cat.as_mut_ptr(), 2) };
    assert_eq!(s, CottoStatus::BufferTooSmall);
    assert_eq!(
        unsafe { cotto_protocol_d_otto(0, &mut p) },
        CottoStatus::InvalidArgument
    );

    // a successful call clears the message
    let mut cf = CottoClosedForm::default();
    assert_eq!(unsafe { cotto_closed_form(e, 1, &mut cf) }, CottoStatus::Ok);
    assert!(cotto_last_error().is_null());

    assert_eq!(unsafe { cotto_protocol_dim(ptr::null()) }, 0);
    unsafe {
        cotto_protocol_free(p);
        cotto_engine_free(e);
        cotto_engine_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/catalytic_otto.h")).unwrap();
    for name in [
        "typedef struct CottoEngine CottoEngine;",
        "typedef struct CottoProtocol CottoProtocol;",
        "COTTO_STATUS_PANIC = 6",
        "cotto_engine_new",
        "cotto_engine_free",
        "cotto_closed_form",
        "cotto_engine_regime",
        "cotto_protocol_d_otto",
        "cotto_protocol_parse",
        "cotto_protocol_free",
        "cotto_run_cycle",
        "cotto_last_error",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compiles and runs a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let target_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .and_then(|deps| deps.parent())
        .map(PathBuf::from)
        .unwrap();
    let lib = target_dir.join("libcatalytic_otto_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = tempfile::tempdir().unwrap();
    let bin = exe.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
