use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use imtheta_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    imt_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = imt_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

unsafe fn parse(src: &str, n: usize, field: &str) -> *mut ImtPoly {
    let mut p = ptr::null_mut();
    let (s, f) = (cstr(src), cstr(field));
    assert_eq!(imt_poly_parse(s.as_ptr(), n, f.as_ptr(), &mut p), ImtStatus::Ok);
    p
}

#[test]
fn arithmetic_and_printing() {
    unsafe {
        let a = parse("z1 + i*z2", 2, "gaussian");
        let b = parse("z1 - i*z2", 2, "gaussian");
        assert_eq!(imt_poly_nvars(a), 2);
        let mut prod = ptr::null_mut();
        assert_eq!(imt_poly_mul(a, b, &mut prod), ImtStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(imt_poly_to_string(prod, &mut s), ImtStatus::Ok);
        assert_eq!(take(s), "z1^2 + z2^2");
        let mut sum = ptr::null_mut();
        assert_eq!(imt_poly_add(a, b, &mut sum), ImtStatus::Ok);
        assert_eq!(imt_poly_to_string(sum, &mut s), ImtStatus::Ok);
        assert_eq!(take(s), "2*z1");
        for p in [a, b, prod, sum] {
            imt_poly_free(p);
        }
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let p = parse("12*z1^2 - 1/2*u1", 1, "rational");
        let mut s = ptr::null_mut();
        assert_eq!(imt_poly_to_json(p, &mut s), ImtStatus::Ok);
        let json = take(s);
        assert_eq!(
            json,
            r#"{"nvars":1,"field":"rational","terms":[{"coeff":"12","zexp":[2],"uexp":[0]},{"coeff":"-1/2","zexp":[0],"uexp":[1]}]}"#
        );
        let mut q = ptr::null_mut();
        let j = cstr(&json);
        assert_eq!(imt_poly_from_json(j.as_ptr(), &mut q), ImtStatus::Ok);
        assert_eq!(imt_poly_to_string(q, &mut s), ImtStatus::Ok);
        assert_eq!(take(s), "12*z1^2 - 1/2*u1");
        imt_poly_free(p);
        imt_poly_free(q);
    }
}

#[test]
fn image_maps() {
    unsafe {
        let f = parse("u1^2*z1^4", 1, "rational");
        let mut e = ptr::null_mut();
        assert_eq!(imt_eval_e(f, &mut e), ImtStatus::Ok);
        let mut s = ptr::null_mut();
        imt_poly_to_string(e, &mut s);
        assert_eq!(take(s), "12*z1^2");

        let mut z = ptr::null_mut();
        assert_eq!(imt_eval_z(f, &mut z), ImtStatus::Ok);
        assert_eq!(imt_laurent_to_string(z, false, &mut s), ImtStatus::Ok);
        assert_eq!(take(s), "24*z1^2");
        assert_eq!(imt_laurent_to_json(z, &mut s), ImtStatus::Ok);
        assert_eq!(take(s), r#"{"nvars":1,"field":"rational","terms":[{"coeff":"24","zexp":[2]}]}"#);

        let g = parse("z1^2", 1, "rational");
        let mut l = ptr::null_mut();
        assert_eq!(imt_laplace(g, &mut l), ImtStatus::Ok);
        assert_eq!(imt_laurent_to_string(l, true, &mut s), ImtStatus::Ok);
        assert_eq!(take(s), "2*u1^-3");

        let mut member = true;
        assert_eq!(imt_member_theta(f, &mut member), ImtStatus::Ok);
        assert!(!member);
        let t = parse("u1*z1 - 1", 1, "rational");
        assert_eq!(imt_member_theta(t, &mut member), ImtStatus::Ok);
        assert!(member);

        imt_laurent_free(z);
        imt_laurent_free(l);
        for p in [f, e, g, t] {
            imt_poly_free(p);
        }
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut p = ptr::null_mut();
        let rational = cstr("rational");
        let bad = cstr("z1 +* z2");
        assert_eq!(imt_poly_parse(bad.as_ptr(), 2, rational.as_ptr(), &mut p), ImtStatus::SyntaxError);
        assert!(p.is_null());
        assert!(last_error().contains("byte 4"));

        let z3 = cstr("z3");
        assert_eq!(imt_poly_parse(z3.as_ptr(), 2, rational.as_ptr(), &mut p), ImtStatus::IndexOutOfRange);
        let div0 = cstr("3/0");
        assert_eq!(imt_poly_parse(div0.as_ptr(), 1, rational.as_ptr(), &mut p), ImtStatus::ZeroDenominator);
        let imag = cstr("i");
        assert_eq!(imt_poly_parse(imag.as_ptr(), 1, rational.as_ptr(), &mut p), ImtStatus::SyntaxError);
        let f4 = cstr("fp:4");
        assert_eq!(imt_poly_parse(z3.as_ptr(), 3, f4.as_ptr(), &mut p), ImtStatus::InvalidField);
        assert_eq!(imt_poly_parse(ptr::null(), 1, rational.as_ptr(), &mut p), ImtStatus::NullArgument);
        let garbage = cstr("{");
        assert_eq!(imt_poly_from_json(garbage.as_ptr(), &mut p), ImtStatus::InvalidInput);

        let a = parse("z1", 1, "fp:5");
        let mut z = ptr::null_mut();
        assert_eq!(imt_eval_z(a, &mut z), ImtStatus::PositiveCharacteristic);
        assert!(last_error().contains("fp:5"));
        let b = parse("z1", 2, "rational");
        let mut sum = ptr::null_mut();
        assert_eq!(imt_poly_add(a, b, &mut sum), ImtStatus::MismatchedContext);
        assert_eq!(imt_poly_to_string(a, ptr::null_mut()), ImtStatus::NullArgument);

        // a success clears the message
        let mut s = ptr::null_mut();
        assert_eq!(imt_poly_to_string(a, &mut s), ImtStatus::Ok);
        imt_string_free(s);
        assert!(imt_last_error_message().is_null());

        imt_poly_free(a);
        imt_poly_free(b);
        imt_poly_free(ptr::null_mut());
        imt_laurent_free(ptr::null_mut());
        imt_string_free(ptr::null_mut());
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/imtheta.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "typedef struct ImtPoly ImtPoly;",
        "typedef struct ImtLaurent ImtLaurent;",
        "IMT_STATUS_OK = 0",
        "imt_poly_parse",
        "imt_poly_from_json",
        "imt_poly_free",
        "imt_poly_to_string",
        "imt_poly_to_json",
        "imt_eval_e",
        "imt_eval_z",
        "imt_laplace",
        "imt_member_theta",
        "imt_laurent_to_string",
        "imt_string_free",
        "imt_last_error_message",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    // target/<profile>/deps/capi-<hash>
    let profile_dir = exe.parent()?.parent()?;
    [profile_dir.join("libimtheta_ffi.a"), profile_dir.join("deps/libimtheta_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "imtheta.h"

int main(void) {
    ImtPoly *f = NULL, *e = NULL;
    char *s = NULL;
    bool member = true;
    if (imt_poly_parse("u1^2*z1^4", 1, "rational", &f) != IMT_STATUS_OK) return 1;
    if (imt_eval_e(f, &e) != IMT_STATUS_OK) return 2;
    if (imt_poly_to_string(e, &s) != IMT_STATUS_OK) return 3;
    if (strcmp(s, "12*z1^2") != 0) return 4;
    imt_string_free(s);
    if (imt_member_theta(f, &member) != IMT_STATUS_OK || member) return 5;
    if (imt_poly_parse("z1 +* z2", 2, "rational", &e) != IMT_STATUS_SYNTAX_ERROR) return 6;
    if (imt_last_error_message() == NULL) return 7;
    imt_poly_free(f);
    imt_poly_free(e);
    printf("ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    let Some(lib) = static_lib() else {
        eprintln!("static library not found next to the test binary; skipping C link check");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping C link check");
        return;
    }
    let dir = std::env::temp_dir().join(format!("imtheta-capi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    let exe = dir.join("smoke");
    std::fs::write(&src, C_SMOKE).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to compile or link");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C smoke program exited with {}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
    let _ = std::fs::remove_dir_all(dir);
}
