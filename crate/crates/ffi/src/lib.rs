//! C ABI for `forbidden-diff`.
//!
//! Every function returns an [`FdiffStatus`]. Objects are opaque handles
//! created by `fdiff_*` constructors and released with the matching `_free`.
//! On failure, [`fdiff_last_error`] describes the most recent error on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use forbidden_diff::formulas::{greedy_construct, Formula};
use forbidden_diff::modular::local_density_with;
use forbidden_diff::modular::DEFAULT_MODULUS_CAP;
use forbidden_diff::validate::forbidden_pair;
use forbidden_diff::{compute_d, Budget, Error, ForbiddenSet, SearchConfig};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdiffStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSpec = 3,
    InvalidArgument = 4,
    OutOfRange = 5,
    BudgetExhausted = 6,
    InvalidWitness = 7,
    Io = 8,
    BufferTooSmall = 9,
    Internal = 10,
    Panic = 11,
}

/// A parsed forbidden set.
pub struct FdiffSet {
    inner: ForbiddenSet,
}

/// A value with an optional witness set.
pub struct FdiffResult {
    value: u64,
    denominator: u64,
    witness: Vec<i64>,
    nodes: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> FdiffStatus {
    match err {
        Error::OutOfRange(_) => FdiffStatus::OutOfRange,
        Error::InvalidSpec { .. } | Error::Parse { .. } => FdiffStatus::InvalidSpec,
        Error::InvalidArgument(_) | Error::Inconsistent(_) | Error::LogMismatch(_) => FdiffStatus::InvalidArgument,
        Error::BudgetExhausted(_) => FdiffStatus::BudgetExhausted,
        Error::InvalidWitness(_) => FdiffStatus::InvalidWitness,
        Error::Io(_) => FdiffStatus::Io,
        Error::Internal(_) => FdiffStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), FdiffStatus>) -> FdiffStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FdiffStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("panic inside forbidden-diff");
            FdiffStatus::Panic
        }
    }
}

fn lift<T>(r: forbidden_diff::Result<T>) -> Result<T, FdiffStatus> {
    r.map_err(|e| {
        set_error(&e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> FdiffStatus {
    set_error(&format!("{what} is null"));
    FdiffStatus::NullPointer
}

unsafe fn borrow_set<'a>(set: *const FdiffSet) -> Result<&'a ForbiddenSet, FdiffStatus> {
    set.as_ref().map(|s| &s.inner).ok_or_else(|| null("set"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, FdiffStatus> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        FdiffStatus::InvalidUtf8
    })
}

fn config(threads: u32, max_nodes: u64) -> SearchConfig {
    let budget = if max_nodes == 0 {
        Budget::unlimited()
    } else {
        Budget::nodes(max_nodes)
    };
    SearchConfig::default()
        .with_threads(threads as usize)
        .with_budget(budget)
}

fn hand_out(out: *mut *mut FdiffResult, result: FdiffResult) -> Result<(), FdiffStatus> {
    // SAFETY: caller checked `out` for null.
    unsafe { *out = Box::into_raw(Box::new(result)) };
    Ok(())
}

/// Message for the last failed call on this thread. Valid until the next
/// call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn fdiff_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fdiff_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a set specification such as `squares`, `primes-1` or `list:1,4,9`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdiff_set_parse(spec: *const c_char, out: *mut *mut FdiffSet) -> FdiffStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let spec = read_str(spec, "spec")?;
        let inner = lift(spec.parse::<ForbiddenSet>())?;
        *out = Box::into_raw(Box::new(FdiffSet { inner }));
        Ok(())
    })
}

/// # Safety
/// `set` must come from [`fdiff_set_parse`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fdiff_set_free(set: *mut FdiffSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Membership test for a single integer.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdiff_set_contains(set: *const FdiffSet, value: i64, out: *mut bool) -> FdiffStatus {
    guard(|| {
        let set = borrow_set(set)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lift(set.contains(value))?;
        Ok(())
    })
}

/// Computes D(X, n) exactly. `threads == 0` uses every core, `max_nodes == 0`
/// means no budget.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdiff_compute_d(
    set: *const FdiffSet,
    n: u64,
    threads: u32,
    max_nodes: u64,
    out: *mut *mut FdiffResult,
) -> FdiffStatus {
    guard(|| {
        let set = borrow_set(set)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let v = lift(compute_d(set, n, &config(threads, max_nodes)))?;
        hand_out(
            out,
            FdiffResult {
                value: v.d,
                denominator: 1,
                witness: v.witness,
                nodes: v.nodes_expanded,
            },
        )
    })
}

/// Greedy X-set in [1, n]. The value is a lower bound on D(X, n).
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdiff_greedy(set: *const FdiffSet, n: u64, out: *mut *mut FdiffResult) -> FdiffStatus {
    guard(|| {
        let set = borrow_set(set)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let g = lift(greedy_construct(set, n))?;
        hand_out(
            out,
            FdiffResult {
                value: g.value,
                denominator: 1,
                witness: g.witness.unwrap_or_default(),
                nodes: 0,
            },
        )
    })
}

/// Local density d_X(m). The result holds `d` as value, `m` as denominator
/// and the optimal residues as witness.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdiff_local_density(
    set: *const FdiffSet,
    m: u64,
    threads: u32,
    out: *mut *mut FdiffResult,
) -> FdiffStatus {
    guard(|| {
        let set = borrow_set(set)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let r = lift(local_density_with(set, m, DEFAULT_MODULUS_CAP, &config(threads, 0)))?;
        let witness = r.witness.iter().map(|&w| w as i64).collect();
        hand_out(
            out,
            FdiffResult {
                value: r.d,
                denominator: r.m,
                witness,
                nodes: 0,
            },
        )
    })
}

/// Evaluates a closed form: `primes`, `squares+1` or `squares+2-lb`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdiff_formula(name: *const c_char, n: u64, out: *mut *mut FdiffResult) -> FdiffStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let formula = lift(read_str(name, "name")?.parse::<Formula>())?;
        let r = lift(formula.evaluate(n))?;
        hand_out(
            out,
            FdiffResult {
                value: r.value,
                denominator: 1,
                witness: r.witness.unwrap_or_default(),
                nodes: 0,
            },
        )
    })
}

/// Checks that no two elements of `values` differ by a member of the set.
///
/// # Safety
/// `set` must be a live handle, `values` must point to `len` integers
/// (may be null when `len == 0`), and `valid` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdiff_validate_witness(
    set: *const FdiffSet,
    values: *const i64,
    len: usize,
    valid: *mut bool,
) -> FdiffStatus {
    guard(|| {
        let set = borrow_set(set)?;
        if valid.is_null() {
            return Err(null("valid"));
        }
        let values: &[i64] = match (values.is_null(), len) {
            (_, 0) => &[],
            (true, _) => return Err(null("values")),
            (false, len) => std::slice::from_raw_parts(values, len),
        };
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        *valid = lift(forbidden_pair(set, &sorted))?.is_none();
        Ok(())
    })
}

/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdiff_result_value(result: *const FdiffResult) -> u64 {
    result.as_ref().map_or(0, |r| r.value)
}

/// Denominator for density results, 1 otherwise.
///
/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdiff_result_denominator(result: *const FdiffResult) -> u64 {
    result.as_ref().map_or(0, |r| r.denominator)
}

/// Search nodes expanded, when the result came from a search.
///
/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdiff_result_nodes(result: *const FdiffResult) -> u64 {
    result.as_ref().map_or(0, |r| r.nodes)
}

/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdiff_result_witness_len(result: *const FdiffResult) -> usize {
    result.as_ref().map_or(0, |r| r.witness.len())
}

/// Copies the witness into `buf`. Fails with `BufferTooSmall` if `cap` is
/// less than the witness length; `written` always receives that length.
///
/// # Safety
/// `result` must be a live handle, `buf` must have room for `cap` integers,
/// `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn fdiff_result_witness_copy(
    result: *const FdiffResult,
    buf: *mut i64,
    cap: usize,
    written: *mut usize,
) -> FdiffStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        let len = r.witness.len();
        if !written.is_null() {
            *written = len;
        }
        if cap < len {
            set_error(&format!("buffer holds {cap} values, witness has {len}"));
            return Err(FdiffStatus::BufferTooSmall);
        }
        if len > 0 {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(r.witness.as_ptr(), buf, len);
        }
        Ok(())
    })
}

/// # Safety
/// `result` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fdiff_result_free(result: *mut FdiffResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
