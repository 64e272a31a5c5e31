//! C ABI over `hypertri`.
//!
//! Objects cross the boundary as opaque handles (`HtParams`, `HtVertexSet`)
//! that the caller releases with the matching `*_free` function. Every
//! fallible call returns an [`HtStatus`]; on failure a description is
//! available from [`ht_last_error`] on the same thread. Strings returned by
//! the library are owned by the caller and released with [`ht_string_free`].
//!
//! Vertices are passed as `uint64_t` masks: coordinate `i` (1-based) is bit
//! `i - 1`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use hypertri::bounds;
use hypertri::constructions::{self, SamplingPlan};
use hypertri::oracle::{self, SearchLimits};
use hypertri::textfmt::{parse_vertex_set, write_vertex_set};
use hypertri::verify::{self, Verdict};
use hypertri::{Error, Mode, Params, VertexSet};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HtStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    TooLarge = 3,
    NotApplicable = 4,
    ParseError = 5,
    Internal = 6,
}

/// Opaque instance handle.
pub struct HtParams(Params);

/// Opaque vertex-set handle.
pub struct HtVertexSet(VertexSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> HtStatus {
    match e {
        Error::TooLarge(_) => HtStatus::TooLarge,
        Error::NotApplicable(_) | Error::NonIntegral { .. } => HtStatus::NotApplicable,
        Error::Parse { .. } => HtStatus::ParseError,
        _ => HtStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> HtStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null_arg(name: &str) -> HtStatus {
    set_error(format!("{name} is null"));
    HtStatus::NullPointer
}

/// Runs `body`, turning panics into `HtStatus::Internal`.
fn guarded<F: FnOnce() -> HtStatus>(body: F) -> HtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            HtStatus::Internal
        }
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn write_out<T>(out: *mut T, value: T) {
    // SAFETY: callers check `out` for null first.
    unsafe { out.write(value) };
}

fn boxed_set(set: VertexSet) -> *mut HtVertexSet {
    Box::into_raw(Box::new(HtVertexSet(set)))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ht_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ht_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ht_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Creates an instance. `exploratory` relaxes the distance rule to
/// `1 <= r <= n`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ht_params_new(n: u32, r: u32, exploratory: bool, out: *mut *mut HtParams) -> HtStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let mode = if exploratory { Mode::Exploratory } else { Mode::Strict };
    match Params::with_mode(n, r, mode) {
        Ok(p) => {
            unsafe { write_out(out, Box::into_raw(Box::new(HtParams(p)))) };
            HtStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `params` must be null or a handle from [`ht_params_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ht_params_free(params: *mut HtParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

/// # Safety
/// `set` must be null or a live vertex-set handle.
#[no_mangle]
pub unsafe extern "C" fn ht_vertex_set_free(set: *mut HtVertexSet) {
    if !set.is_null() {
        drop(unsafe { Box::from_raw(set) });
    }
}

/// Number of members, 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live vertex-set handle.
#[no_mangle]
pub unsafe extern "C" fn ht_vertex_set_len(set: *const HtVertexSet) -> usize {
    unsafe { set.as_ref() }.map_or(0, |s| s.0.len())
}

/// Dimension `n`, 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live vertex-set handle.
#[no_mangle]
pub unsafe extern "C" fn ht_vertex_set_dim(set: *const HtVertexSet) -> u32 {
    unsafe { set.as_ref() }.map_or(0, |s| s.0.dim())
}

/// Mask of the `index`-th member in ascending order.
///
/// # Safety
/// `set` must be a live vertex-set handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_vertex_set_get(set: *const HtVertexSet, index: usize, out: *mut u64) -> HtStatus {
    let Some(set) = (unsafe { set.as_ref() }) else {
        return null_arg("set");
    };
    if out.is_null() {
        return null_arg("out");
    }
    match set.0.members().get(index) {
        Some(v) => {
            unsafe { write_out(out, v.bits()) };
            HtStatus::Ok
        }
        None => {
            set_error(format!("index {index} out of range for {} members", set.0.len()));
            HtStatus::InvalidArgument
        }
    }
}

/// Builds a set from `len` masks; duplicates are merged.
///
/// # Safety
/// `bits` must point to `len` readable values (or be null when `len == 0`),
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ht_vertex_set_from_bits(
    n: u32,
    bits: *const u64,
    len: usize,
    out: *mut *mut HtVertexSet,
) -> HtStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let slice: &[u64] = if len == 0 {
        &[]
    } else if bits.is_null() {
        return null_arg("bits");
    } else {
        unsafe { std::slice::from_raw_parts(bits, len) }
    };
    match VertexSet::from_bits(n, slice.iter().copied()) {
        Ok(s) => {
            unsafe { write_out(out, boxed_set(s)) };
            HtStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Parses the vertex-set text format. `expected_n == 0` takes the
/// dimension from the header or first line.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_vertex_set_parse(
    text: *const c_char,
    expected_n: u32,
    out: *mut *mut HtVertexSet,
) -> HtStatus {
    if text.is_null() {
        return null_arg("text");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
        set_error("text is not UTF-8");
        return HtStatus::ParseError;
    };
    let n = (expected_n != 0).then_some(expected_n);
    match parse_vertex_set(text, n) {
        Ok(p) => {
            unsafe { write_out(out, boxed_set(p.set)) };
            HtStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Renders a set in the text format; `r == 0` omits `r` from the header.
/// Returns null on a null handle.
///
/// # Safety
/// `set` must be null or a live vertex-set handle.
#[no_mangle]
pub unsafe extern "C" fn ht_vertex_set_to_text(set: *const HtVertexSet, r: u32) -> *mut c_char {
    match unsafe { set.as_ref() } {
        Some(s) => into_c_string(write_vertex_set(&s.0, (r != 0).then_some(r))),
        None => ptr::null_mut(),
    }
}

/// Antipodal-block independent set; `p == 0` picks the best prime.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ht_construct_antipodal(n: u32, p: u32, r: u32, out: *mut *mut HtVertexSet) -> HtStatus {
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| {
        let p = if p == 0 {
            match constructions::select_antipodal_prime(n, r) {
                Some(p) => p,
                None => {
                    set_error(format!("no prime p with p | {n}, p ∤ {r} and {n}/p > {r}"));
                    return HtStatus::NotApplicable;
                }
            }
        } else {
            p
        };
        match constructions::antipodal_construction(n, p, r) {
            Ok(s) => {
                unsafe { write_out(out, boxed_set(s)) };
                HtStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Fixed-bit triangle-free family on level `r/2`.
///
/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_construct_fixed_bit(params: *const HtParams, out: *mut *mut HtVertexSet) -> HtStatus {
    let Some(params) = (unsafe { params.as_ref() }) else {
        return null_arg("params");
    };
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| match constructions::fixed_bit_construction(&params.0) {
        Ok(s) => {
            unsafe { write_out(out, boxed_set(s)) };
            HtStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Random sampling plus alteration. `probability <= 0` selects the optimal
/// probability. When `trace_json` is non-null it receives the run's trace as
/// a JSON string owned by the caller.
///
/// # Safety
/// `params` must be a live handle; `out` writable; `trace_json` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ht_construct_alteration(
    params: *const HtParams,
    probability: f64,
    seed: u64,
    trials: u32,
    out: *mut *mut HtVertexSet,
    trace_json: *mut *mut c_char,
) -> HtStatus {
    let Some(params) = (unsafe { params.as_ref() }) else {
        return null_arg("params");
    };
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| {
        let plan = SamplingPlan {
            probability: (probability > 0.0 || probability.is_nan()).then_some(probability),
            seed,
            trials: trials.max(1),
        };
        match constructions::alteration_construction(&params.0, &plan) {
            Ok((set, trace)) => {
                unsafe { write_out(out, boxed_set(set)) };
                if !trace_json.is_null() {
                    let text = serde_json::to_string(&trace).unwrap_or_default();
                    unsafe { write_out(trace_json, into_c_string(text)) };
                }
                HtStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

unsafe fn check_common(
    set: *const HtVertexSet,
    params: *const HtParams,
    out_ok: *mut bool,
    witness: *mut u64,
    witness_len: usize,
    check: fn(&VertexSet, &Params) -> hypertri::Result<Verdict>,
) -> HtStatus {
    let Some(set) = (unsafe { set.as_ref() }) else {
        return null_arg("set");
    };
    let Some(params) = (unsafe { params.as_ref() }) else {
        return null_arg("params");
    };
    if out_ok.is_null() {
        return null_arg("out_ok");
    }
    guarded(|| match check(&set.0, &params.0) {
        Ok(verdict) => {
            unsafe { write_out(out_ok, verdict.is_ok()) };
            if let (Some(v), false) = (verdict.violation(), witness.is_null()) {
                for (i, w) in v.witnesses.iter().take(witness_len).enumerate() {
                    unsafe { write_out(witness.add(i), w.bits()) };
                }
            }
            HtStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Sets `*out_ok`; on a violation writes the least violating triple to
/// `witness[0..3]` when `witness` is non-null.
///
/// # Safety
/// Handles must be live, `out_ok` writable, `witness` null or room for 3.
#[no_mangle]
pub unsafe extern "C" fn ht_check_triangle_free(
    set: *const HtVertexSet,
    params: *const HtParams,
    out_ok: *mut bool,
    witness: *mut u64,
) -> HtStatus {
    unsafe { check_common(set, params, out_ok, witness, 3, verify::check_triangle_free) }
}

/// Like [`ht_check_triangle_free`] with a 2-element witness (an edge).
///
/// # Safety
/// Handles must be live, `out_ok` writable, `witness` null or room for 2.
#[no_mangle]
pub unsafe extern "C" fn ht_check_independent(
    set: *const HtVertexSet,
    params: *const HtParams,
    out_ok: *mut bool,
    witness: *mut u64,
) -> HtStatus {
    unsafe { check_common(set, params, out_ok, witness, 2, verify::check_independent) }
}

fn saturate(x: u128) -> u64 {
    u64::try_from(x).unwrap_or(u64::MAX)
}

/// Brute-force triangle count of the whole graph.
///
/// # Safety
/// `params` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_count_triangles_graph(params: *const HtParams, out: *mut u64) -> HtStatus {
    let Some(params) = (unsafe { params.as_ref() }) else {
        return null_arg("params");
    };
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| match verify::count_triangles_graph(&params.0) {
        Ok(c) => {
            unsafe { write_out(out, saturate(c)) };
            HtStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Triangles with all corners in `set`.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_count_triangles_in_set(
    set: *const HtVertexSet,
    params: *const HtParams,
    out: *mut u64,
) -> HtStatus {
    let Some(set) = (unsafe { set.as_ref() }) else {
        return null_arg("set");
    };
    let Some(params) = (unsafe { params.as_ref() }) else {
        return null_arg("params");
    };
    if out.is_null() {
        return null_arg("out");
    }
    guarded(|| match verify::count_triangles_in_set(&set.0, &params.0) {
        Ok(c) => {
            unsafe { write_out(out, saturate(c)) };
            HtStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Exact triangle count from the closed form, as a decimal string; null on
/// failure.
///
/// # Safety
/// `params` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn ht_triangle_count_formula(params: *const HtParams) -> *mut c_char {
    let Some(params) = (unsafe { params.as_ref() }) else {
        null_arg("params");
        return ptr::null_mut();
    };
    match bounds::triangle_count_formula(&params.0) {
        Ok(c) => into_c_string(c.to_string()),
        Err(e) => {
            fail(e);
            ptr::null_mut()
        }
    }
}

/// The full bound report as JSON (exact integers as decimal strings).
///
/// # Safety
/// `params` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn ht_bound_report_json(params: *const HtParams) -> *mut c_char {
    let Some(params) = (unsafe { params.as_ref() }) else {
        null_arg("params");
        return ptr::null_mut();
    };
    into_c_string(bounds::bound_report(&params.0).to_json().to_string())
}

/// Branch-and-bound maximum. `time_budget_secs <= 0` means no time limit.
/// `out_witness` may be null.
///
/// # Safety
/// `params` must be live; `out_best` and `out_optimal` writable;
/// `out_witness` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ht_oracle(
    params: *const HtParams,
    max_nodes: u64,
    time_budget_secs: f64,
    allow_symmetry: bool,
    out_best: *mut usize,
    out_optimal: *mut bool,
    out_witness: *mut *mut HtVertexSet,
) -> HtStatus {
    let Some(params) = (unsafe { params.as_ref() }) else {
        return null_arg("params");
    };
    if out_best.is_null() || out_optimal.is_null() {
        return null_arg("out_best/out_optimal");
    }
    if max_nodes == 0 {
        set_error("max_nodes must be positive");
        return HtStatus::InvalidArgument;
    }
    let limits = SearchLimits {
        max_nodes,
        time_budget: (time_budget_secs > 0.0 && time_budget_secs.is_finite())
            .then(|| Duration::from_secs_f64(time_budget_secs)),
        allow_symmetry,
    };
    guarded(|| match oracle::max_triangle_free_exact(&params.0, &limits) {
        Ok(res) => {
            unsafe {
                write_out(out_best, res.best_size);
                write_out(out_optimal, res.optimal);
                if !out_witness.is_null() {
                    write_out(out_witness, boxed_set(res.witness));
                }
            }
            HtStatus::Ok
        }
        Err(e) => fail(e),
    })
}
