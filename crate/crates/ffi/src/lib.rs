//! C ABI over the curvcheck engine.
//!
//! Every fallible function returns a [`CcStatus`]; on anything other than
//! `CC_STATUS_OK` the message is available from [`cc_last_error`] on the
//! same thread. Charts are opaque handles released with [`cc_chart_free`].
//! Strings handed out by the library are released with [`cc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use curvcheck::catalog::{instantiate, Instance, Params};
use curvcheck::riemann::{curvature_at, ricci, sectional, CurvatureData, MetricChart};
use curvcheck::runner::{parse_scenario, verify_suite, Overrides, SuiteOptions};
use curvcheck::GeoError;

/// Result codes shared by all entry points.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    UnknownName = 4,
    Dimension = 5,
    Geometry = 6,
    Scenario = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// An ambient metric chart, either Riemannian or the underlying metric of a
/// Kähler chart.
pub struct CcChart {
    metric: MetricChart,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(CcStatus, String);

impl From<GeoError> for Failure {
    fn from(e: GeoError) -> Self {
        let code = match e {
            GeoError::UnknownName { .. } => CcStatus::UnknownName,
            GeoError::Dimension { .. } => CcStatus::Dimension,
            GeoError::InvalidParam { .. } | GeoError::Parse(_) => CcStatus::InvalidArgument,
            GeoError::Scenario(_) | GeoError::Io(_) => CcStatus::Scenario,
            _ => CcStatus::Geometry,
        };
        Failure(code, e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

/// Runs `f`, records any error or panic, and returns the status code.
fn guard(f: impl FnOnce() -> Outcome<()>) -> CcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CcStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            CcStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Outcome<()> {
    if p.is_null() {
        Err(Failure(CcStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    non_null(p, what)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CcStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn slice_arg<'a>(p: *const f64, len: usize, what: &str) -> Outcome<&'a [f64]> {
    non_null(p, what)?;
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn chart_arg<'a>(chart: *const CcChart) -> Outcome<&'a CcChart> {
    non_null(chart, "chart")?;
    Ok(&*chart)
}

fn into_c_string(s: String) -> Outcome<*mut c_char> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(CcStatus::Panic, "output contains a NUL byte".into()))
}

fn curvature(chart: &CcChart, point: &[f64]) -> Outcome<CurvatureData> {
    Ok(curvature_at(&chart.metric, point)?)
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn cc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a catalog chart. `params_json` may be null or a JSON object of
/// parameter overrides. Immersion entries are rejected.
///
/// # Safety
/// `name` and `params_json` must be null or NUL-terminated strings and
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_chart_new(
    name: *const c_char,
    params_json: *const c_char,
    out: *mut *mut CcChart,
) -> CcStatus {
    guard(|| {
        non_null(out, "out")?;
        let name = str_arg(name, "name")?;
        let params: Params = if params_json.is_null() {
            Params::new()
        } else {
            serde_json::from_str(str_arg(params_json, "params_json")?)
                .map_err(|e| Failure(CcStatus::InvalidArgument, format!("params_json: {e}")))?
        };
        let metric = match instantiate(name, &params)? {
            Instance::Metric(m) => m,
            Instance::Kahler(k) => k.metric,
            Instance::Immersion(_) => {
                return Err(Failure(
                    CcStatus::InvalidArgument,
                    format!("'{name}' is an immersion, not an ambient chart"),
                ))
            }
        };
        *out = Box::into_raw(Box::new(CcChart { metric }));
        Ok(())
    })
}

/// Releases a chart. Null is ignored.
///
/// # Safety
/// `chart` must be null or a handle from [`cc_chart_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_chart_free(chart: *mut CcChart) {
    if !chart.is_null() {
        drop(Box::from_raw(chart));
    }
}

/// Dimension of the chart.
///
/// # Safety
/// `chart` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cc_chart_dim(chart: *const CcChart, out: *mut usize) -> CcStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = chart_arg(chart)?.metric.dim;
        Ok(())
    })
}

/// Sectional curvature of the plane spanned by `u` and `v` at `point`.
/// All three arrays have the chart dimension.
///
/// # Safety
/// The arrays must hold `dim` doubles each and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_sectional(
    chart: *const CcChart,
    point: *const f64,
    u: *const f64,
    v: *const f64,
    out: *mut f64,
) -> CcStatus {
    guard(|| {
        non_null(out, "out")?;
        let chart = chart_arg(chart)?;
        let m = chart.metric.dim;
        let cd = curvature(chart, slice_arg(point, m, "point")?)?;
        *out = sectional(&cd, slice_arg(u, m, "u")?, slice_arg(v, m, "v")?)?;
        Ok(())
    })
}

/// Ricci curvature `Ric(w, eta)` at `point`.
///
/// # Safety
/// The arrays must hold `dim` doubles each and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_ricci(
    chart: *const CcChart,
    point: *const f64,
    w: *const f64,
    eta: *const f64,
    out: *mut f64,
) -> CcStatus {
    guard(|| {
        non_null(out, "out")?;
        let chart = chart_arg(chart)?;
        let m = chart.metric.dim;
        let cd = curvature(chart, slice_arg(point, m, "point")?)?;
        *out = ricci(&cd, slice_arg(w, m, "w")?, slice_arg(eta, m, "eta")?)?;
        Ok(())
    })
}

/// Writes the covariant curvature tensor at `point` into `out`, row-major
/// with index `((a*m + b)*m + c)*m + d`. `out_len` must be at least `m^4`.
///
/// # Safety
/// `point` must hold `dim` doubles and `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cc_riemann_tensor(
    chart: *const CcChart,
    point: *const f64,
    out: *mut f64,
    out_len: usize,
) -> CcStatus {
    guard(|| {
        let chart = chart_arg(chart)?;
        let m = chart.metric.dim;
        let need = m.pow(4);
        if out_len < need {
            return Err(Failure(
                CcStatus::BufferTooSmall,
                format!("buffer holds {out_len} values, {need} needed"),
            ));
        }
        non_null(out, "out")?;
        let cd = curvature(chart, slice_arg(point, m, "point")?)?;
        std::slice::from_raw_parts_mut(out, need).copy_from_slice(&cd.riemann);
        Ok(())
    })
}

/// Runs a scenario given as JSON text and returns the JSON report in
/// `out_report`. `out_exit` receives 0 when every check passed and 1 when
/// some failed. `parallel` of 0 uses one thread.
///
/// # Safety
/// `scenario_json` must be a NUL-terminated string; the out pointers must be
/// writable. The report is released with [`cc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cc_run_scenario(
    scenario_json: *const c_char,
    parallel: usize,
    out_report: *mut *mut c_char,
    out_exit: *mut i32,
) -> CcStatus {
    guard(|| {
        non_null(out_report, "out_report")?;
        non_null(out_exit, "out_exit")?;
        let sc = parse_scenario(str_arg(scenario_json, "scenario_json")?, &Overrides::default())?;
        let report = sc.run(parallel.max(1))?;
        *out_report = into_c_string(report.to_json())?;
        *out_exit = report.exit_code();
        Ok(())
    })
}

/// Runs the built-in verification suite and returns its JSON report.
/// `only` may be null or a group name. `out_exit` is 0 when every
/// expectation is met and 1 otherwise.
///
/// # Safety
/// `only` must be null or a NUL-terminated string; the out pointers must be
/// writable. The report is released with [`cc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cc_verify_suite(
    only: *const c_char,
    seed: u64,
    parallel: usize,
    out_report: *mut *mut c_char,
    out_exit: *mut i32,
) -> CcStatus {
    guard(|| {
        non_null(out_report, "out_report")?;
        non_null(out_exit, "out_exit")?;
        let only = if only.is_null() {
            None
        } else {
            Some(str_arg(only, "only")?.to_owned())
        };
        let opts = SuiteOptions {
            only,
            seed,
            parallel: parallel.max(1),
            ..SuiteOptions::default()
        };
        let report = verify_suite(&opts)?;
        *out_report = into_c_string(report.to_json())?;
        *out_exit = report.exit_code();
        Ok(())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
