use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use forbidden_diff_ffi::*;

fn parse(spec: &str) -> *mut FdiffSet {
    let spec = CString::new(spec).unwrap();
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { fdiff_set_parse(spec.as_ptr(), &mut set) }, FdiffStatus::Ok);
    assert!(!set.is_null());
    set
}

fn witness(result: *const FdiffResult) -> Vec<i64> {
    unsafe {
        let len = fdiff_result_witness_len(result);
        let mut buf = vec![0i64; len];
        let mut written = 0;
        assert_eq!(
            fdiff_result_witness_copy(result, buf.as_mut_ptr(), len, &mut written),
            FdiffStatus::Ok
        );
        assert_eq!(written, len);
        buf
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(fdiff_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn compute_squares_sixty() {
    let set = parse("squares");
    let mut result = ptr::null_mut();
    unsafe {
        assert_eq!(fdiff_compute_d(set, 60, 1, 0, &mut result), FdiffStatus::Ok);
        assert_eq!(fdiff_result_value(result), 16);
        let w = witness(result);
        assert_eq!(w.len(), 16);
        let mut valid = false;
        assert_eq!(
            fdiff_validate_witness(set, w.as_ptr(), w.len(), &mut valid),
            FdiffStatus::Ok
        );
        assert!(valid);
        fdiff_result_free(result);
        fdiff_set_free(set);
    }
}

#[test]
fn bad_spec_reports_error() {
    let spec = CString::new("cubes").unwrap();
    let mut set = ptr::null_mut();
    let status = unsafe { fdiff_set_parse(spec.as_ptr(), &mut set) };
    assert_eq!(status, FdiffStatus::InvalidSpec);
    assert!(set.is_null());
    assert!(last_error().contains("cubes"));
}

#[test]
fn null_pointers_are_rejected() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            fdiff_compute_d(ptr::null(), 10, 1, 0, &mut out),
            FdiffStatus::NullPointer
        );
        assert_eq!(fdiff_set_parse(ptr::null(), ptr::null_mut()), FdiffStatus::NullPointer);
        fdiff_set_free(ptr::null_mut());
        fdiff_result_free(ptr::null_mut());
    }
}

#[test]
fn budget_exhaustion_maps_to_status() {
    let set = parse("squares");
    let mut result = ptr::null_mut();
    let status = unsafe { fdiff_compute_d(set, 150, 1, 5, &mut result) };
    assert_eq!(status, FdiffStatus::BudgetExhausted);
    assert!(result.is_null());
    unsafe { fdiff_set_free(set) };
}

#[test]
fn membership_and_invalid_witness() {
    let set = parse("primes-1");
    unsafe {
        let mut hit = false;
        assert_eq!(fdiff_set_contains(set, 6, &mut hit), FdiffStatus::Ok);
        assert!(hit);
        assert_eq!(fdiff_set_contains(set, 5, &mut hit), FdiffStatus::Ok);
        assert!(!hit);
        let values = [1i64, 3];
        let mut valid = true;
        assert_eq!(
            fdiff_validate_witness(set, values.as_ptr(), 2, &mut valid),
            FdiffStatus::Ok
        );
        assert!(!valid);
        fdiff_set_free(set);
    }
}

#[test]
fn small_buffer() {
    let set = parse("squares");
    let mut result = ptr::null_mut();
    unsafe {
        assert_eq!(fdiff_greedy(set, 30, &mut result), FdiffStatus::Ok);
        assert_eq!(fdiff_result_value(result), 10);
        let mut buf = [0i64; 2];
        let mut written = 0;
        let status = fdiff_result_witness_copy(result, buf.as_mut_ptr(), 2, &mut written);
        assert_eq!(status, FdiffStatus::BufferTooSmall);
        assert_eq!(written, 10);
        fdiff_result_free(result);
        fdiff_set_free(set);
    }
}

#[test]
fn density_and_formulas() {
    let set = parse("squares+3");
    let mut result = ptr::null_mut();
    unsafe {
        assert_eq!(fdiff_local_density(set, 8, 1, &mut result), FdiffStatus::Ok);
        assert_eq!((fdiff_result_value(result), fdiff_result_denominator(result)), (2, 8));
        assert_eq!(witness(result), vec![0, 2]);
        fdiff_result_free(result);
        fdiff_set_free(set);

        let name = CString::new("primes").unwrap();
        assert_eq!(fdiff_formula(name.as_ptr(), 100, &mut result), FdiffStatus::Ok);
        assert_eq!(fdiff_result_value(result), 25);
        fdiff_result_free(result);

        let name = CString::new("squares+1").unwrap();
        assert_eq!(fdiff_formula(name.as_ptr(), 60, &mut result), FdiffStatus::Ok);
        assert_eq!(fdiff_result_value(result), 20);
        fdiff_result_free(result);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(fdiff_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_api() {
    let header = include_str!("../include/forbidden_diff.h");
    for symbol in [
        "fdiff_set_parse",
        "fdiff_set_free",
        "fdiff_compute_d",
        "fdiff_local_density",
        "fdiff_result_witness_copy",
        "fdiff_last_error",
        "FDIFF_STATUS_BUDGET_EXHAUSTED",
        "typedef struct FdiffSet FdiffSet",
    ] {
        assert!(header.contains(symbol), "missing {symbol}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    if !cc.status.success() {
        return;
    }
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let dir = std::env::temp_dir().join(format!("fdiff-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("probe.c");
    std::fs::write(
        &src,
        "#include \"forbidden_diff.h\"\nint main(void) { return fdiff_version() == 0; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include])
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}
