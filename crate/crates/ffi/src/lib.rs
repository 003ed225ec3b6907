//! C ABI over `fctp-core`.
//!
//! Instances and solve results are opaque handles owned by the caller and
//! released with their `*_free` function. Every fallible call returns an
//! [`FctpStatus`]; on failure a description is available from
//! [`fctp_last_error`] on the same thread. Variant and mode arguments take
//! the `FCTP_VARIANT_*` / `FCTP_GHG_*` constants.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fctp::evaluator::{self, GhgMode};
use fctp::exact;
use fctp::format;
use fctp::heuristics::{construct_solution, SolveResult, Variant};
use fctp::instances::{generate_instance, GenSpec};
use fctp::model::{validate_instance, EmissionParams, Instance, Matrix, Solution};
use fctp::stats::{t_test, TTestKind};

pub const FCTP_VARIANT_NN: u32 = 0;
pub const FCTP_VARIANT_DX: u32 = 1;
pub const FCTP_VARIANT_DY10: u32 = 2;
pub const FCTP_VARIANT_DY11: u32 = 3;
pub const FCTP_VARIANT_DY12: u32 = 4;

pub const FCTP_GHG_UNWEIGHTED: u32 = 0;
pub const FCTP_GHG_WEIGHTED: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FctpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInstance = 4,
    ShapeMismatch = 5,
    Solve = 6,
    Stats = 7,
    Io = 8,
    InvalidArgument = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Cost breakdown `Z = transport + fixed`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FctpCost {
    pub transport: f64,
    pub fixed: f64,
    pub total: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FctpFeasibility {
    pub nonneg_ok: bool,
    pub capacity_ok: bool,
    pub demand_ok: bool,
    pub emissions: f64,
    pub ghg_ok: bool,
    pub feasible: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FctpTTest {
    pub t: f64,
    pub p: f64,
    pub df: f64,
    pub n_a: usize,
    pub n_b: usize,
}

/// Opaque instance handle (instance data plus emission parameters).
pub struct FctpInstance {
    instance: Instance,
    params: EmissionParams,
}

/// Opaque result of one heuristic construction.
pub struct FctpSolveResult {
    inner: SolveResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(FctpStatus, String);

fn fail<T>(status: FctpStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FctpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            FctpStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            FctpStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: caller guarantees `p` is null or valid for reads
    unsafe { p.as_ref() }.map_or_else(|| fail(FctpStatus::NullPointer, format!("{what} is null")), Ok)
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: caller guarantees `p` is null or valid for writes
    unsafe { p.as_mut() }.map_or_else(|| fail(FctpStatus::NullPointer, format!("{what} is null")), Ok)
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(FctpStatus::NullPointer, format!("{what} is null"));
    }
    // SAFETY: non-null and NUL-terminated per the caller contract
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .or_else(|_| fail(FctpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn f64_slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return fail(FctpStatus::NullPointer, format!("{what} is null"));
    }
    // SAFETY: caller guarantees `len` readable doubles at `p`
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

fn variant(code: u32) -> Result<Variant, Failure> {
    Variant::ALL.into_iter().find(|v| v.code() == code).map_or_else(
        || fail(FctpStatus::InvalidArgument, format!("unknown variant code {code}")),
        Ok,
    )
}

fn mode(code: u32) -> Result<GhgMode, Failure> {
    match code {
        FCTP_GHG_UNWEIGHTED => Ok(GhgMode::Unweighted),
        FCTP_GHG_WEIGHTED => Ok(GhgMode::Weighted),
        _ => fail(FctpStatus::InvalidArgument, format!("unknown ghg mode code {code}")),
    }
}

fn format_failure(e: format::FormatError) -> Failure {
    let status = match e {
        format::FormatError::Io { .. } => FctpStatus::Io,
        _ => FctpStatus::Parse,
    };
    Failure(status, e.to_string())
}

fn boxed_instance(out: &mut *mut FctpInstance, instance: Instance, params: EmissionParams) -> Result<(), Failure> {
    let report = validate_instance(&instance);
    if !report.ok() {
        return fail(FctpStatus::InvalidInstance, report.to_string());
    }
    *out = Box::into_raw(Box::new(FctpInstance { instance, params }));
    Ok(())
}

fn copy_flow(flow: &Matrix, buf: *mut f64, len: usize) -> Result<(), Failure> {
    let data = flow.as_slice();
    if data.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return fail(FctpStatus::NullPointer, "flow buffer is null");
    }
    if len < data.len() {
        return fail(
            FctpStatus::BufferTooSmall,
            format!("flow buffer holds {len} values, {} needed", data.len()),
        );
    }
    // SAFETY: `buf` has room for `len >= data.len()` doubles
    unsafe { ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len()) };
    Ok(())
}

fn feasibility(f: &evaluator::FeasibilityReport) -> FctpFeasibility {
    FctpFeasibility {
        nonneg_ok: f.nonneg_ok,
        capacity_ok: f.capacity_ok,
        demand_ok: f.demand_ok,
        emissions: f.emissions,
        ghg_ok: f.ghg_ok,
        feasible: f.feasible,
    }
}

fn cost(c: &evaluator::CostBreakdown) -> FctpCost {
    FctpCost {
        transport: c.transport,
        fixed: c.fixed,
        total: c.total,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fctp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next `fctp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn fctp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses an instance in the `.fctp` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fctp_instance_parse(text: *const c_char, out: *mut *mut FctpInstance) -> FctpStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out")? };
        let text = unsafe { c_str(text, "text")? };
        let (instance, params) = format::parse_instance(text).map_err(format_failure)?;
        boxed_instance(out, instance, params)
    })
}

/// Reads an instance file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fctp_instance_read(path: *const c_char, out: *mut *mut FctpInstance) -> FctpStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out")? };
        let path = unsafe { c_str(path, "path")? };
        let (instance, params) = format::read_instance(path).map_err(format_failure)?;
        boxed_instance(out, instance, params)
    })
}

/// Generates a random `m`×`n` instance with the default value ranges.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fctp_instance_generate(
    m: usize,
    n: usize,
    seed: u64,
    out: *mut *mut FctpInstance,
) -> FctpStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out")? };
        let (instance, params) = generate_instance(&GenSpec::new(m, n, seed))
            .or_else(|e| fail(FctpStatus::InvalidArgument, e.to_string()))?;
        boxed_instance(out, instance, params)
    })
}

/// Serializes an instance; free the string with [`fctp_string_free`].
///
/// # Safety
/// `instance` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fctp_instance_to_text(instance: *const FctpInstance, out: *mut *mut c_char) -> FctpStatus {
    guard(|| {
        let inst = unsafe { deref(instance, "instance")? };
        let out = unsafe { out_ptr(out, "out")? };
        let text = format::serialize_instance(&inst.instance, &inst.params).map_err(format_failure)?;
        *out = CString::new(text)
            .or_else(|_| fail(FctpStatus::Parse, "serialized text contains NUL"))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fctp_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by CString::into_raw above
        drop(unsafe { CString::from_raw(s) });
    }
}

/// # Safety
/// `instance` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fctp_instance_free(instance: *mut FctpInstance) {
    if !instance.is_null() {
        // SAFETY: allocated by Box::into_raw in boxed_instance
        drop(unsafe { Box::from_raw(instance) });
    }
}

/// Number of centers (`m`) and customers (`n`).
///
/// # Safety
/// `instance` must be a live handle; `m` and `n` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fctp_instance_dims(instance: *const FctpInstance, m: *mut usize, n: *mut usize) -> FctpStatus {
    guard(|| {
        let inst = unsafe { deref(instance, "instance")? };
        *unsafe { out_ptr(m, "m")? } = inst.instance.num_centers();
        *unsafe { out_ptr(n, "n")? } = inst.instance.num_customers();
        Ok(())
    })
}

/// Replaces the emission factors with scalar values.
///
/// # Safety
/// `instance` must be a live handle not shared with another thread.
#[no_mangle]
pub unsafe extern "C" fn fctp_instance_set_emissions(
    instance: *mut FctpInstance,
    alpha_manufacturer: f64,
    alpha: f64,
    beta_manufacturer: f64,
    beta: f64,
    ghg_cap: f64,
) -> FctpStatus {
    guard(|| {
        let inst = unsafe { out_ptr(instance, "instance")? };
        let params = EmissionParams::uniform(alpha_manufacturer, alpha, beta_manufacturer, beta, ghg_cap);
        if !params.is_valid() {
            return fail(
                FctpStatus::InvalidArgument,
                "emission factors must be >= 0 and the cap > 0",
            );
        }
        inst.params = params;
        Ok(())
    })
}

/// Runs one heuristic construction.
///
/// # Safety
/// `instance` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fctp_solve(
    instance: *const FctpInstance,
    variant_code: u32,
    ghg_mode: u32,
    seed: u64,
    out: *mut *mut FctpSolveResult,
) -> FctpStatus {
    guard(|| {
        let inst = unsafe { deref(instance, "instance")? };
        let out = unsafe { out_ptr(out, "out")? };
        let inner = construct_solution(
            &inst.instance,
            &inst.params,
            mode(ghg_mode)?,
            variant(variant_code)?,
            seed,
        )
        .or_else(|e| fail(FctpStatus::Solve, e.to_string()))?;
        *out = Box::into_raw(Box::new(FctpSolveResult { inner }));
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a handle from [`fctp_solve`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fctp_result_free(result: *mut FctpSolveResult) {
    if !result.is_null() {
        // SAFETY: allocated by Box::into_raw in fctp_solve
        drop(unsafe { Box::from_raw(result) });
    }
}

/// # Safety
/// `result` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fctp_result_cost(result: *const FctpSolveResult, out: *mut FctpCost) -> FctpStatus {
    guard(|| {
        let r = unsafe { deref(result, "result")? };
        *unsafe { out_ptr(out, "out")? } = cost(&r.inner.cost);
        Ok(())
    })
}

/// # Safety
/// `result` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fctp_result_feasibility(
    result: *const FctpSolveResult,
    out: *mut FctpFeasibility,
) -> FctpStatus {
    guard(|| {
        let r = unsafe { deref(result, "result")? };
        *unsafe { out_ptr(out, "out")? } = feasibility(&r.inner.feasibility);
        Ok(())
    })
}

/// Copies the m×n flow matrix, row-major, into `buf` (`len >= m*n`).
///
/// # Safety
/// `result` must be a live handle; `buf` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fctp_result_flow(result: *const FctpSolveResult, buf: *mut f64, len: usize) -> FctpStatus {
    guard(|| {
        let r = unsafe { deref(result, "result")? };
        copy_flow(&r.inner.solution.flow, buf, len)
    })
}

/// Evaluates a row-major m×n flow matrix against an instance.
///
/// # Safety
/// `instance` must be a live handle, `flow` must hold `len` doubles, and the
/// output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fctp_evaluate(
    instance: *const FctpInstance,
    flow: *const f64,
    len: usize,
    ghg_mode: u32,
    out_cost: *mut FctpCost,
    out_feasibility: *mut FctpFeasibility,
) -> FctpStatus {
    guard(|| {
        let inst = unsafe { deref(instance, "instance")? };
        let out_cost = unsafe { out_ptr(out_cost, "out_cost")? };
        let out_feasibility = unsafe { out_ptr(out_feasibility, "out_feasibility")? };
        let values = unsafe { f64_slice(flow, len, "flow")? };
        let (m, n) = (inst.instance.num_centers(), inst.instance.num_customers());
        let Some(matrix) = Matrix::from_vec(m, n, values.to_vec()) else {
            return fail(
                FctpStatus::ShapeMismatch,
                format!("flow has {len} values, expected {}", m * n),
            );
        };
        let solution = Solution::new(matrix);
        let mode = mode(ghg_mode)?;
        let c = evaluator::total_cost(&inst.instance, &solution)
            .or_else(|e| fail(FctpStatus::ShapeMismatch, e.to_string()))?;
        let f = evaluator::check_feasibility(&inst.instance, &inst.params, &solution, mode)
            .or_else(|e| fail(FctpStatus::ShapeMismatch, e.to_string()))?;
        *out_cost = cost(&c);
        *out_feasibility = feasibility(&f);
        Ok(())
    })
}

/// Brute-force optimum over unsplit assignments (small instances only).
/// `flow_buf` may be null when `flow_len` is 0 and the flows are not needed.
///
/// # Safety
/// `instance` must be a live handle, `out_cost` valid for writes, and
/// `flow_buf` must hold `flow_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fctp_exact_optimum(
    instance: *const FctpInstance,
    ghg_mode: u32,
    out_cost: *mut FctpCost,
    flow_buf: *mut f64,
    flow_len: usize,
) -> FctpStatus {
    guard(|| {
        let inst = unsafe { deref(instance, "instance")? };
        let out_cost = unsafe { out_ptr(out_cost, "out_cost")? };
        let r = exact::brute_force_optimum(&inst.instance, &inst.params, mode(ghg_mode)?)
            .or_else(|e| fail(FctpStatus::Solve, e.to_string()))?;
        if !(flow_buf.is_null() && flow_len == 0) {
            copy_flow(&r.solution.flow, flow_buf, flow_len)?;
        }
        *out_cost = cost(&r.cost);
        Ok(())
    })
}

/// Unpaired two-sample t-test; pooled variance unless `welch` is set.
///
/// # Safety
/// `a` and `b` must hold `len_a` and `len_b` doubles; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn fctp_t_test(
    a: *const f64,
    len_a: usize,
    b: *const f64,
    len_b: usize,
    welch: bool,
    out: *mut FctpTTest,
) -> FctpStatus {
    guard(|| {
        let a = unsafe { f64_slice(a, len_a, "a")? };
        let b = unsafe { f64_slice(b, len_b, "b")? };
        let out = unsafe { out_ptr(out, "out")? };
        let kind = if welch { TTestKind::Welch } else { TTestKind::Pooled };
        let r = t_test(a, b, kind).or_else(|e| fail(FctpStatus::Stats, e.to_string()))?;
        *out = FctpTTest {
            t: r.t,
            p: r.p,
            df: r.df,
            n_a: r.n_a,
            n_b: r.n_b,
        };
        Ok(())
    })
}
