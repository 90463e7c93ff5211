//! C ABI over `rdnet`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`RdnetStatus`]; on failure the message is kept per thread and read
//! back with [`rdnet_last_error_message`]. Panics are caught and reported as
//! [`RdnetStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use rdnet::config::RunConfig;
use rdnet::io::{read_field, write_field};
use rdnet::lipschitz::boundary_derivative_anchor;
use rdnet::net::{build_selector_net, Net};
use rdnet::pde::solve_steady;
use rdnet::verify::{
    threshold_net_for_field, verify_lemma2_lemma3, verify_theorem1, verify_theorem2, ProbeOptions, Problem,
    VerificationReport,
};
use rdnet::{Error, ScalarField, UniformGrid};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdnetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Config = 3,
    Numerical = 4,
    Io = 5,
    Panic = 6,
}

impl From<&Error> for RdnetStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Config(_) => RdnetStatus::Config,
            Error::Divergence { .. } | Error::NonConvergence { .. } | Error::Evaluation { .. } => {
                RdnetStatus::Numerical
            }
            Error::Io { .. } | Error::Csv(_) | Error::Json(_) => RdnetStatus::Io,
            _ => RdnetStatus::InvalidInput,
        }
    }
}

/// Which verifier [`rdnet_verify`] runs.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdnetVerifier {
    /// Threshold net in 1D; `param` is epsilon.
    Theorem1 = 0,
    /// Selector net in 2D; `param` is delta, the margin is the default.
    Theorem2 = 1,
    /// Derivative constants; `param` is ignored.
    Lemma2Lemma3 = 2,
}

/// A steady-state problem loaded from a TOML run configuration.
pub struct RdnetProblem {
    config: RunConfig,
    problem: Problem,
}

/// A nodal field on the uniform grid of the unit square or interval.
pub struct RdnetField(ScalarField);

/// A threshold or selector network.
pub struct RdnetNet(Net);

/// The outcome of one verifier.
pub struct RdnetReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, recording any error or panic for [`rdnet_last_error_message`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RdnetStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RdnetStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            RdnetStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            RdnetStatus::from(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            RdnetStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn path<'a>(p: *const c_char, what: &'static str) -> Result<&'a Path, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::InvalidInput(format!("{what} is not UTF-8")))?;
    Ok(Path::new(s))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next `rdnet_*` call on the same thread.
#[no_mangle]
pub extern "C" fn rdnet_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rdnet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a TOML run configuration.
///
/// # Safety
/// `config_path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_problem_load(
    config_path: *const c_char,
    out_problem: *mut *mut RdnetProblem,
) -> RdnetStatus {
    guard(|| {
        let slot = out(out_problem, "out_problem")?;
        let (config, _) = RunConfig::load(path(config_path, "config_path")?)?;
        let problem = config.problem()?;
        *slot = boxed(RdnetProblem { config, problem });
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`rdnet_problem_load`].
#[no_mangle]
pub unsafe extern "C" fn rdnet_problem_free(p: *mut RdnetProblem) {
    free(p)
}

/// Solves the problem to steady state from its configured initial field.
///
/// # Safety
/// `problem` must be a live handle; `out_field` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_problem_solve(
    problem: *const RdnetProblem,
    out_field: *mut *mut RdnetField,
) -> RdnetStatus {
    guard(|| {
        let p = deref(problem, "problem")?;
        let slot = out(out_field, "out_field")?;
        let init = p.config.initial_field()?;
        let s = solve_steady(&init, &p.problem.diffusion, &p.problem.boundary, &p.problem.config)?;
        *slot = boxed(RdnetField(s.field));
        Ok(())
    })
}

/// Builds a field from `n^dim` nodal values in row-major order (last axis fastest).
///
/// # Safety
/// `values` must point to `len` doubles; `out_field` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_field_new(
    dim: usize,
    n: usize,
    values: *const f64,
    len: usize,
    out_field: *mut *mut RdnetField,
) -> RdnetStatus {
    guard(|| {
        let slot = out(out_field, "out_field")?;
        let v = slice(values, len, "values")?;
        let field = ScalarField::new(UniformGrid::new(dim, n)?, v.to_vec())?;
        *slot = boxed(RdnetField(field));
        Ok(())
    })
}

/// Reads a field CSV (`x[,y],value`).
///
/// # Safety
/// `csv_path` must be a NUL-terminated string; `out_field` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_field_read_csv(csv_path: *const c_char, out_field: *mut *mut RdnetField) -> RdnetStatus {
    guard(|| {
        let slot = out(out_field, "out_field")?;
        *slot = boxed(RdnetField(read_field(path(csv_path, "csv_path")?)?));
        Ok(())
    })
}

/// Writes a field CSV with full round-trip precision.
///
/// # Safety
/// `field` must be a live handle; `csv_path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rdnet_field_write_csv(field: *const RdnetField, csv_path: *const c_char) -> RdnetStatus {
    guard(|| {
        let f = deref(field, "field")?;
        write_field(path(csv_path, "csv_path")?, &f.0)?;
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a field handle.
#[no_mangle]
pub unsafe extern "C" fn rdnet_field_free(f: *mut RdnetField) {
    free(f)
}

/// Spatial dimension, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdnet_field_dim(field: *const RdnetField) -> usize {
    field.as_ref().map_or(0, |f| f.0.grid().dim())
}

/// Nodes per axis, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdnet_field_n(field: *const RdnetField) -> usize {
    field.as_ref().map_or(0, |f| f.0.grid().n())
}

/// Copies the nodal values into `buf`, which must hold `n^dim` doubles.
///
/// # Safety
/// `field` must be a live handle and `buf` must point to `buf_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rdnet_field_values(field: *const RdnetField, buf: *mut f64, buf_len: usize) -> RdnetStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let v = f.0.values();
        if buf_len < v.len() {
            return Err(Error::InvalidInput(format!("buffer holds {buf_len} values, field has {}", v.len())).into());
        }
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        std::slice::from_raw_parts_mut(buf, v.len()).copy_from_slice(v);
        Ok(())
    })
}

/// Multilinear interpolation at `x` (`dim` coordinates in [0, 1]).
///
/// # Safety
/// `field` must be a live handle, `x` must point to `dim` doubles and
/// `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_field_interpolate(
    field: *const RdnetField,
    x: *const f64,
    dim: usize,
    out_value: *mut f64,
) -> RdnetStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let slot = out(out_value, "out_value")?;
        *slot = f.0.interpolate(slice(x, dim, "x")?)?;
        Ok(())
    })
}

/// Threshold net with `m` intervals (2m step neurons) sampling a 1D field.
///
/// # Safety
/// `field` must be a live handle; `out_net` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_threshold_net_build(
    field: *const RdnetField,
    m: usize,
    out_net: *mut *mut RdnetNet,
) -> RdnetStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let slot = out(out_net, "out_net")?;
        *slot = boxed(RdnetNet(threshold_net_for_field(&f.0, m)?.into()));
        Ok(())
    })
}

/// Selector net over a partition of side at most `delta` with ramp margin
/// `gamma`, sampling the field at each rectangle's lower corner.
///
/// # Safety
/// `field` must be a live handle; `out_net` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_selector_net_build(
    field: *const RdnetField,
    delta: f64,
    gamma: f64,
    out_net: *mut *mut RdnetNet,
) -> RdnetStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let slot = out(out_net, "out_net")?;
        let net = build_selector_net(|x| f.0.interpolate(x), delta, gamma, f.0.grid().dim())?;
        *slot = boxed(RdnetNet(net.into()));
        Ok(())
    })
}

/// Parses a net from its JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_net` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_net_from_json(json: *const c_char, out_net: *mut *mut RdnetNet) -> RdnetStatus {
    guard(|| {
        let slot = out(out_net, "out_net")?;
        if json.is_null() {
            return Err(Fail::Null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| Error::InvalidInput("json is not UTF-8".into()))?;
        *slot = boxed(RdnetNet(Net::from_json(text)?));
        Ok(())
    })
}

/// Serialises a net; free the string with [`rdnet_string_free`].
///
/// # Safety
/// `net` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_net_to_json(net: *const RdnetNet, out_json: *mut *mut c_char) -> RdnetStatus {
    guard(|| {
        let n = deref(net, "net")?;
        let slot = out(out_json, "out_json")?;
        *slot = CString::new(n.0.to_json()?).unwrap_or_default().into_raw();
        Ok(())
    })
}

/// Evaluates the net at `x` (`dim` coordinates in [0, 1]).
///
/// # Safety
/// `net` must be a live handle, `x` must point to `dim` doubles and
/// `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_net_eval(
    net: *const RdnetNet,
    x: *const f64,
    dim: usize,
    out_value: *mut f64,
) -> RdnetStatus {
    guard(|| {
        let n = deref(net, "net")?;
        let slot = out(out_value, "out_value")?;
        *slot = n.0.eval(slice(x, dim, "x")?)?;
        Ok(())
    })
}

/// Input dimension, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdnet_net_dim(net: *const RdnetNet) -> usize {
    net.as_ref().map_or(0, |n| n.0.dim())
}

/// Number of hidden plus output layers, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdnet_net_layer_count(net: *const RdnetNet) -> usize {
    net.as_ref().map_or(0, |n| n.0.layer_sizes().len())
}

/// Width of layer `index`, or 0 when out of range.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdnet_net_layer_size(net: *const RdnetNet, index: usize) -> usize {
    net.as_ref()
        .and_then(|n| n.0.layer_sizes().get(index).copied())
        .unwrap_or(0)
}

/// # Safety
/// `n` must be null or a net handle.
#[no_mangle]
pub unsafe extern "C" fn rdnet_net_free(n: *mut RdnetNet) {
    free(n)
}

/// Runs one verifier against `field`. A report whose checks fail is still
/// `RDNET_STATUS_OK`; inspect it with [`rdnet_report_passed`].
///
/// # Safety
/// `problem` and `field` must be live handles; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_verify(
    problem: *const RdnetProblem,
    field: *const RdnetField,
    verifier: RdnetVerifier,
    param: f64,
    seed: u64,
    probes: usize,
    out_report: *mut *mut RdnetReport,
) -> RdnetStatus {
    guard(|| {
        let p = deref(problem, "problem")?;
        let f = deref(field, "field")?;
        let slot = out(out_report, "out_report")?;
        if probes == 0 {
            return Err(Error::InvalidInput("probes must be positive".into()).into());
        }
        let opts = ProbeOptions { count: probes, seed };
        let mut report = match verifier {
            RdnetVerifier::Theorem1 => {
                let anchor = boundary_derivative_anchor(&p.problem.boundary, f.0.grid())?;
                verify_theorem1(&p.problem, &f.0, param, anchor, &opts)?
            }
            RdnetVerifier::Theorem2 => {
                let partition = rdnet::net::build_partition(2, param)?;
                let gamma = rdnet::net::default_gamma(&partition);
                verify_theorem2(&p.problem, &f.0, param, gamma, &opts)?
            }
            RdnetVerifier::Lemma2Lemma3 => verify_lemma2_lemma3(&p.problem, &f.0)?,
        };
        report.runtime_ms = 0;
        *slot = boxed(RdnetReport(report));
        Ok(())
    })
}

/// 1 if every check passed, 0 otherwise (including a null handle).
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdnet_report_passed(report: *const RdnetReport) -> i32 {
    report.as_ref().map_or(0, |r| i32::from(r.0.status.is_pass()))
}

/// Headline predicted bound, measured value and tolerance.
///
/// # Safety
/// `report` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_report_headline(
    report: *const RdnetReport,
    out_predicted: *mut f64,
    out_measured: *mut f64,
    out_tolerance: *mut f64,
) -> RdnetStatus {
    guard(|| {
        let r = &deref(report, "report")?.0;
        *out(out_predicted, "out_predicted")? = r.predicted;
        *out(out_measured, "out_measured")? = r.measured;
        *out(out_tolerance, "out_tolerance")? = r.tolerance;
        Ok(())
    })
}

/// Serialises the full report; free the string with [`rdnet_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rdnet_report_to_json(report: *const RdnetReport, out_json: *mut *mut c_char) -> RdnetStatus {
    guard(|| {
        let r = deref(report, "report")?;
        let slot = out(out_json, "out_json")?;
        *slot = CString::new(r.0.to_json()?).unwrap_or_default().into_raw();
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a report handle.
#[no_mangle]
pub unsafe extern "C" fn rdnet_report_free(r: *mut RdnetReport) {
    free(r)
}
