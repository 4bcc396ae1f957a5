use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use probarg_ffi::*;

const SIX_ARGS: &str = "arg(a1). arg(a2). arg(a3). arg(a4). arg(a5). arg(a6).
att(a1,a2). att(a2,a1). att(a2,a3). att(a3,a4). att(a4,a5). att(a5,a4). att(a5,a3). att(a6,a5).";

fn parse(text: &str, format: ProbargFormat) -> Result<*mut ProbargFramework, ProbargStatus> {
    let c = CString::new(text).unwrap();
    let mut af = ptr::null_mut();
    let status = unsafe { probarg_framework_parse(c.as_ptr(), format, &mut af) };
    if status == ProbargStatus::Ok {
        Ok(af)
    } else {
        Err(status)
    }
}

fn last_error() -> String {
    let p = probarg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn framework_names_and_size() {
    let af = parse(SIX_ARGS, ProbargFormat::Apx).unwrap();
    unsafe {
        assert_eq!(probarg_framework_len(af), 6);
        assert_eq!(CStr::from_ptr(probarg_framework_name(af, 5)).to_str().unwrap(), "a6");
        assert!(probarg_framework_name(af, 6).is_null());
        probarg_framework_free(af);
    }
}

#[test]
fn parse_errors_set_message() {
    assert_eq!(parse("arg(a).\natt(a b).", ProbargFormat::Apx), Err(ProbargStatus::Parse));
    assert!(last_error().contains("line 2"));
    assert_eq!(parse("a\nb\n", ProbargFormat::Tgf), Err(ProbargStatus::Parse));
    assert_eq!(parse("arg(a). att(a,z).", ProbargFormat::Apx), Err(ProbargStatus::InvalidArgument));
    let status = unsafe { probarg_framework_parse(ptr::null(), ProbargFormat::Apx, &mut ptr::null_mut()) };
    assert_eq!(status, ProbargStatus::NullPointer);
}

#[test]
fn grounded_and_stable_labellings() {
    let af = parse(SIX_ARGS, ProbargFormat::Apx).unwrap();
    unsafe {
        let mut ls = ptr::null_mut();
        assert_eq!(probarg_semantics(af, ProbargSemantics::Grounded, &mut ls), ProbargStatus::Ok);
        assert_eq!(probarg_labellings_count(ls), 1);
        let mut labels = [9u8; 6];
        assert_eq!(probarg_labellings_get(ls, 0, labels.as_mut_ptr(), 6), ProbargStatus::Ok);
        assert_eq!(labels, [2, 2, 2, 2, 1, 0]);
        assert_eq!(probarg_labellings_get(ls, 1, labels.as_mut_ptr(), 6), ProbargStatus::InvalidArgument);
        assert_eq!(probarg_labellings_get(ls, 0, labels.as_mut_ptr(), 5), ProbargStatus::InvalidArgument);
        probarg_labellings_free(ls);

        assert_eq!(probarg_semantics(af, ProbargSemantics::Stable, &mut ls), ProbargStatus::Ok);
        assert_eq!(probarg_labellings_count(ls), 2);
        probarg_labellings_free(ls);
        probarg_framework_free(af);
    }
}

#[test]
fn properties_and_epistemic_labelling() {
    let af = parse(SIX_ARGS, ProbargFormat::Apx).unwrap();
    let row = [0.7, 0.3, 0.7, 0.3, 0.0, 1.0];
    unsafe {
        let mut mask = 0u32;
        assert_eq!(probarg_classify(af, row.as_ptr(), 6, 1e-9, &mut mask), ProbargStatus::Ok);
        // COH SFOU FOU SOPT OPT JUS RAT
        assert_eq!(mask, 0b0000_1011_1111);
        let mut holds = true;
        assert_eq!(
            probarg_check(af, row.as_ptr(), 6, ProbargProperty::Ter, 1e-9, &mut holds),
            ProbargStatus::Ok
        );
        assert!(!holds);
        let mut labels = [9u8; 6];
        assert_eq!(
            probarg_epistemic_labelling(af, row.as_ptr(), 6, 1e-9, labels.as_mut_ptr()),
            ProbargStatus::Ok
        );
        assert_eq!(labels, [0, 1, 0, 1, 1, 0]);
        assert_eq!(
            probarg_classify(af, row.as_ptr(), 5, 1e-9, &mut mask),
            ProbargStatus::InvalidArgument
        );
        let bad = [1.5, 0.3, 0.7, 0.3, 0.0, 1.0];
        assert_eq!(
            probarg_classify(af, bad.as_ptr(), 6, 1e-9, &mut mask),
            ProbargStatus::InvalidArgument
        );
        probarg_framework_free(af);
    }
}

#[test]
fn completion() {
    let af = parse("arg(A). arg(B). arg(C). att(A,B). att(B,C). att(C,A).", ProbargFormat::Apx).unwrap();
    let coh = 1 << ProbargProperty::Coh as u32;
    unsafe {
        let pi = [0.4, f64::NAN, f64::NAN];
        let mut out = [0.0; 3];
        let mut h = 0.0;
        assert_eq!(probarg_complete(af, pi.as_ptr(), 3, coh, 1e-8, out.as_mut_ptr(), &mut h), ProbargStatus::Ok);
        for (g, w) in out.iter().zip([0.4, 0.5, 0.5]) {
            assert!((g - w).abs() < 1e-6, "{out:?}");
        }
        assert!(h > 0.0);
        let rat = 1 << ProbargProperty::Rat as u32;
        assert_eq!(
            probarg_complete(af, pi.as_ptr(), 3, rat, 1e-8, out.as_mut_ptr(), ptr::null_mut()),
            ProbargStatus::Unsupported
        );
        probarg_framework_free(af);
    }

    let af = parse("arg(A). arg(B). arg(C). att(A,B). att(A,C). att(B,C).", ProbargFormat::Apx).unwrap();
    unsafe {
        let pi = [f64::NAN, 0.7, 0.6];
        let mut out = [0.0; 3];
        let status = probarg_complete(af, pi.as_ptr(), 3, coh, 1e-8, out.as_mut_ptr(), ptr::null_mut());
        assert_eq!(status, ProbargStatus::Infeasible);
        assert!(last_error().contains("B->C"), "{}", last_error());
        probarg_framework_free(af);
    }
}

#[test]
fn errors_are_per_thread() {
    assert_eq!(parse("nonsense", ProbargFormat::Apx), Err(ProbargStatus::Parse));
    std::thread::spawn(|| assert!(probarg_last_error().is_null()))
        .join()
        .unwrap();
    assert!(!probarg_last_error().is_null());
    parse("arg(a).", ProbargFormat::Apx).map(|af| unsafe { probarg_framework_free(af) }).unwrap();
    assert!(probarg_last_error().is_null());
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/probarg.h")).unwrap();
    for f in [
        "probarg_framework_parse",
        "probarg_framework_free",
        "probarg_framework_len",
        "probarg_framework_name",
        "probarg_semantics",
        "probarg_labellings_count",
        "probarg_labellings_get",
        "probarg_labellings_free",
        "probarg_epistemic_labelling",
        "probarg_check",
        "probarg_classify",
        "probarg_complete",
        "probarg_last_error",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f}");
    }
    assert!(header.contains("typedef struct ProbargFramework ProbargFramework;"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "probarg.h"

int main(void) {
    ProbargFramework *af = NULL;
    if (probarg_framework_parse("arg(a). arg(b). att(a,b).", PROBARG_FORMAT_APX, &af) != PROBARG_STATUS_OK)
        return 10;
    ProbargLabellings *ls = NULL;
    if (probarg_semantics(af, PROBARG_SEMANTICS_GROUNDED, &ls) != PROBARG_STATUS_OK) return 11;
    uint8_t labels[2];
    if (probarg_labellings_get(ls, 0, labels, 2) != PROBARG_STATUS_OK) return 12;
    printf("%s=%d %s=%d\n", probarg_framework_name(af, 0), labels[0], probarg_framework_name(af, 1), labels[1]);
    probarg_labellings_free(ls);
    if (probarg_framework_parse("junk", PROBARG_FORMAT_APX, &af) != PROBARG_STATUS_PARSE) return 13;
    printf("%s\n", strlen(probarg_last_error()) > 0 ? "error set" : "no error");
    probarg_framework_free(af);
    return 0;
}
"#;

/// Compiles a C program against the header and the static library.
#[test]
fn c_program_links_against_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libprobarg_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let work = std::env::temp_dir().join(format!("probarg-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    let bin = work.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{:?}", out.status);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "a=0 b=1\nerror set\n");
}
