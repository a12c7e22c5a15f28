//! C ABI for the exact verification engine.
//!
//! Conventions:
//! - Every fallible entry point returns an `int32_t` status: `BGP_OK` (0) on
//!   success, a negative `BGP_ERR_*` code otherwise. Out-parameters are only
//!   written on success.
//! - The model is an opaque handle created by [`bgp_model_new`] and released
//!   by [`bgp_model_free`].
//! - Strings returned through out-parameters are NUL-terminated, UTF-8, and
//!   owned by the caller, who must release them with [`bgp_string_free`].
//! - Panics never cross the boundary; they are caught and reported as
//!   `BGP_ERR_PANIC`.

use bgg_poisson::chains;
use bgg_poisson::forms::kernel_to_text;
use bgg_poisson::kernels::poisson_kernel;
use bgg_poisson::model::Model;
use bgg_poisson::verify::{self, RunConfig};
use libc::{c_char, size_t};
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

/// Success.
pub const BGP_OK: i32 = 0;
/// A pointer argument was NULL.
pub const BGP_ERR_NULL: i32 = -1;
/// An argument was outside its documented range.
pub const BGP_ERR_RANGE: i32 = -2;
/// A string argument was not valid UTF-8 or named an unknown id.
pub const BGP_ERR_INVALID: i32 = -3;
/// An internal panic was caught; the operation had no effect.
pub const BGP_ERR_PANIC: i32 = -4;

/// Opaque handle to a fixed-dimension model instance.
pub struct BgpModel {
    inner: Model,
}

fn to_c_string(s: String) -> *mut c_char {
    // interior NUL bytes never occur in the text formats; map defensively
    CString::new(s)
        .unwrap_or_else(|_| CString::new("invalid").unwrap())
        .into_raw()
}

/// Version of the underlying engine as a static NUL-terminated string.
/// The pointer is valid for the lifetime of the process; do not free it.
#[no_mangle]
pub extern "C" fn bgp_version() -> *const c_char {
    static VERSION: OnceLock<CString> = OnceLock::new();
    VERSION
        .get_or_init(|| CString::new(env!("CARGO_PKG_VERSION")).unwrap())
        .as_ptr()
}

/// Create a model for boundary dimension `n` (2..=6) and store the handle in
/// `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn bgp_model_new(n: u32, out: *mut *mut BgpModel) -> i32 {
    if out.is_null() {
        return BGP_ERR_NULL;
    }
    if !(2..=6).contains(&n) {
        return BGP_ERR_RANGE;
    }
    match catch_unwind(|| BgpModel {
        inner: Model::new(n as usize),
    }) {
        Ok(m) => {
            unsafe { *out = Box::into_raw(Box::new(m)) };
            BGP_OK
        }
        Err(_) => BGP_ERR_PANIC,
    }
}

/// Release a model handle. Passing NULL is a no-op.
///
/// # Safety
/// `m` must be NULL or a pointer obtained from [`bgp_model_new`] that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn bgp_model_free(m: *mut BgpModel) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Store the boundary dimension `n` of the model in `*out`.
///
/// # Safety
/// `m` must be a live handle from [`bgp_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bgp_model_n(m: *const BgpModel, out: *mut u32) -> i32 {
    if m.is_null() || out.is_null() {
        return BGP_ERR_NULL;
    }
    unsafe { *out = (*m).inner.n as u32 };
    BGP_OK
}

/// Store the dimension of the standard value space (`n + 2`) in `*out`.
///
/// # Safety
/// `m` must be a live handle from [`bgp_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bgp_model_value_dim(m: *const BgpModel, out: *mut u32) -> i32 {
    if m.is_null() || out.is_null() {
        return BGP_ERR_NULL;
    }
    unsafe { *out = (*m).inner.d as u32 };
    BGP_OK
}

/// Store the dimension of the symmetry algebra in `*out`.
///
/// # Safety
/// `m` must be a live handle from [`bgp_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bgp_model_algebra_dim(m: *const BgpModel, out: *mut u32) -> i32 {
    if m.is_null() || out.is_null() {
        return BGP_ERR_NULL;
    }
    unsafe { *out = (*m).inner.alg.dim() as u32 };
    BGP_OK
}

/// Serialize the degree-`k` kernel (0 <= k <= n) in the exact text format and
/// store a newly-allocated string in `*out`. Free it with [`bgp_string_free`].
///
/// # Safety
/// `m` must be a live handle from [`bgp_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bgp_kernel_text(
    m: *const BgpModel,
    k: u32,
    out: *mut *mut c_char,
) -> i32 {
    if m.is_null() || out.is_null() {
        return BGP_ERR_NULL;
    }
    let model = unsafe { &(*m).inner };
    if k as usize > model.n {
        return BGP_ERR_RANGE;
    }
    match catch_unwind(AssertUnwindSafe(|| {
        let phi = poisson_kernel(model, k as usize);
        kernel_to_text(&phi, model.n, model.d)
    })) {
        Ok(text) => {
            unsafe { *out = to_c_string(text) };
            BGP_OK
        }
        Err(_) => BGP_ERR_PANIC,
    }
}

/// Write the chain homology dimensions for degrees `0..=n` into `out`, which
/// must have room for `len >= n + 1` entries.
///
/// # Safety
/// `m` must be a live handle from [`bgp_model_new`]; `out` must point to at
/// least `len` writable `uint32_t` slots.
#[no_mangle]
pub unsafe extern "C" fn bgp_homology_dims(
    m: *const BgpModel,
    out: *mut u32,
    len: size_t,
) -> i32 {
    if m.is_null() || out.is_null() {
        return BGP_ERR_NULL;
    }
    let model = unsafe { &(*m).inner };
    if len < model.n + 1 {
        return BGP_ERR_RANGE;
    }
    match catch_unwind(AssertUnwindSafe(|| chains::homology(model))) {
        Ok(h) => {
            for (i, v) in h.hdims.iter().enumerate() {
                unsafe { *out.add(i) = *v as u32 };
            }
            BGP_OK
        }
        Err(_) => BGP_ERR_PANIC,
    }
}

fn run_report(n: u32, filter: Option<Vec<String>>) -> Result<(String, u32), i32> {
    if !(2..=6).contains(&n) {
        return Err(BGP_ERR_RANGE);
    }
    if let Some(ids) = &filter {
        for id in ids {
            if verify::find_check(id).is_none() {
                return Err(BGP_ERR_INVALID);
            }
        }
    }
    let cfg = RunConfig {
        check_filter: filter,
        ..RunConfig::default()
    };
    match catch_unwind(AssertUnwindSafe(|| verify::run_all(n as usize, &cfg))) {
        Ok(report) => {
            let failures = report.summary.fail as u32;
            match serde_json::to_string_pretty(&report) {
                Ok(json) => Ok((json, failures)),
                Err(_) => Err(BGP_ERR_PANIC),
            }
        }
        Err(_) => Err(BGP_ERR_PANIC),
    }
}

/// Run the full check registry at boundary dimension `n` (2..=6). On success,
/// store the JSON report in `*out_json` (free with [`bgp_string_free`]) and
/// the number of failed checks in `*out_failures`. The return code reports
/// whether the run completed, not whether the checks passed.
///
/// # Safety
/// `out_json` and `out_failures` must be valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn bgp_verify_json(
    n: u32,
    out_json: *mut *mut c_char,
    out_failures: *mut u32,
) -> i32 {
    if out_json.is_null() || out_failures.is_null() {
        return BGP_ERR_NULL;
    }
    match run_report(n, None) {
        Ok((json, failures)) => {
            unsafe {
                *out_json = to_c_string(json);
                *out_failures = failures;
            }
            BGP_OK
        }
        Err(code) => code,
    }
}

/// Run a single check (by registry id) at boundary dimension `n`. Behaves
/// like [`bgp_verify_json`] restricted to one id; unknown ids yield
/// `BGP_ERR_INVALID`.
///
/// # Safety
/// `check_id` must be a NUL-terminated string; `out_json` and `out_failures`
/// must be valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn bgp_check_json(
    n: u32,
    check_id: *const c_char,
    out_json: *mut *mut c_char,
    out_failures: *mut u32,
) -> i32 {
    if check_id.is_null() || out_json.is_null() || out_failures.is_null() {
        return BGP_ERR_NULL;
    }
    let id = match unsafe { CStr::from_ptr(check_id) }.to_str() {
        Ok(s) => s.to_string(),
        Err(_) => return BGP_ERR_INVALID,
    };
    match run_report(n, Some(vec![id])) {
        Ok((json, failures)) => {
            unsafe {
                *out_json = to_c_string(json);
                *out_failures = failures;
            }
            BGP_OK
        }
        Err(code) => code,
    }
}

/// Release a string allocated by this library. Passing NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a pointer previously returned through an out-parameter
/// of this library that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn bgp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
