//! C ABI for the `qlaplace` library.
//!
//! Functions are described by JSON (the same tagged form the CLI reads) and
//! held behind the opaque [`QlFunction`] handle. Every entry point returns a
//! [`QlStatus`]; on failure [`ql_last_error_message`] gives a description,
//! valid until the next call on the same thread. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use qlaplace::partition::{q_partition, q_partition_pr, DensityOfStates};
use qlaplace::qmath::{q_exp, q_log, QIndex};
use qlaplace::transform::{
    classical_laplace, q_laplace_bilateral, q_laplace_class, q_laplace_fixed, q_laplace_unilateral, FunctionSpec,
    QuadratureConfig, TailPolicy, TransformValue,
};
use qlaplace::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ConfigError = 4,
    DomainError = 5,
    Unsupported = 6,
    NotConverged = 7,
    NumericalError = 8,
    Panic = 9,
}

/// Which transform [`ql_transform`] evaluates.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlVariant {
    Bilateral = 0,
    Unilateral = 1,
    /// The function's own index is set to `q` before transforming.
    Fixed = 2,
    Class = 3,
    /// Classical Laplace transform; `q` is ignored.
    Classical = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlTailPolicy {
    PowerLawExtrapolate = 0,
    Compactify = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QlComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QlQuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail_policy: QlTailPolicy,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QlTransformResult {
    pub value: QlComplex,
    pub abs_err: f64,
    /// Whether the quadrature met its tolerance; the value is still returned
    /// with status `Ok` when it did not.
    pub converged: bool,
}

/// Opaque handle to a parsed function description.
pub struct QlFunction {
    spec: FunctionSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QlStatus {
    match e {
        Error::InvalidParameter(_) => QlStatus::InvalidArgument,
        Error::Config(_) | Error::Io(_) => QlStatus::ConfigError,
        Error::Domain { .. } | Error::Pole { .. } | Error::DegenerateAxis { .. } => QlStatus::DomainError,
        Error::Unsupported { .. } => QlStatus::Unsupported,
        Error::NotConverged { .. } | Error::Oscillation { .. } => QlStatus::NotConverged,
        _ => QlStatus::NumericalError,
    }
}

/// Runs `body`, recording its error message and catching panics.
fn guard(body: impl FnOnce() -> Result<(), (QlStatus, String)>) -> QlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            QlStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            QlStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (QlStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QlStatus, String) {
    (QlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn quadrature(cfg: *const QlQuadratureConfig) -> QuadratureConfig {
    match cfg.as_ref() {
        None => QuadratureConfig::default(),
        Some(c) => QuadratureConfig {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            max_subdivisions: c.max_subdivisions,
            tail_policy: match c.tail_policy {
                QlTailPolicy::PowerLawExtrapolate => TailPolicy::PowerLawExtrapolate,
                QlTailPolicy::Compactify => TailPolicy::Compactify,
            },
        },
    }
}

fn to_c(z: Complex64) -> QlComplex {
    QlComplex { re: z.re, im: z.im }
}

fn to_result(v: TransformValue) -> QlTransformResult {
    QlTransformResult {
        value: to_c(v.value),
        abs_err: v.abs_err,
        converged: v.converged,
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ql_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a NUL-terminated string with static lifetime.
#[no_mangle]
pub extern "C" fn ql_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default quadrature settings.
#[no_mangle]
pub extern "C" fn ql_quadrature_default() -> QlQuadratureConfig {
    let d = QuadratureConfig::default();
    QlQuadratureConfig {
        rel_tol: d.rel_tol,
        abs_tol: d.abs_tol,
        max_subdivisions: d.max_subdivisions,
        tail_policy: match d.tail_policy {
            TailPolicy::PowerLawExtrapolate => QlTailPolicy::PowerLawExtrapolate,
            TailPolicy::Compactify => QlTailPolicy::Compactify,
        },
    }
}

/// Parses a JSON function description such as `{"kind": "heaviside_step"}`
/// into a new handle stored in `*out`. Release it with [`ql_function_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_function_from_json(json: *const c_char, out: *mut *mut QlFunction) -> QlStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = std::ptr::null_mut();
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (QlStatus::InvalidUtf8, e.to_string()))?;
        let spec: FunctionSpec = serde_json::from_str(text).map_err(|e| lib_err(e.into()))?;
        spec.validate().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(QlFunction { spec }));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `f` must come from [`ql_function_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ql_function_free(f: *mut QlFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Evaluates the transform of `f` at `(p, q)`. `cfg` may be null for the
/// default quadrature settings.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_transform(
    f: *const QlFunction,
    variant: QlVariant,
    p: QlComplex,
    q: f64,
    cfg: *const QlQuadratureConfig,
    out: *mut QlTransformResult,
) -> QlStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("function"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let cfg = quadrature(cfg);
        let p = Complex64::new(p.re, p.im);
        let v = match variant {
            QlVariant::Bilateral => q_laplace_bilateral(&f.spec, p, q, &cfg),
            QlVariant::Unilateral => q_laplace_unilateral(&f.spec, p, q, &cfg),
            QlVariant::Fixed => q_laplace_fixed(&f.spec, p, q, &cfg),
            QlVariant::Class => q_laplace_class(&f.spec, p, q, &cfg),
            QlVariant::Classical => classical_laplace(&f.spec, p, &cfg),
        }
        .map_err(lib_err)?;
        *out = to_result(v);
        Ok(())
    })
}

/// q-partition function of the density of states `f` at inverse temperature
/// `b`. With `pr` set, the density's own index follows `q`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_partition(
    f: *const QlFunction,
    b: QlComplex,
    q: f64,
    pr: bool,
    cfg: *const QlQuadratureConfig,
    out: *mut QlTransformResult,
) -> QlStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("function"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let cfg = quadrature(cfg);
        let q_dependent = matches!(f.spec, FunctionSpec::QExpDensity { .. });
        let dos = DensityOfStates::new(f.spec.clone(), q_dependent).map_err(lib_err)?;
        let b = Complex64::new(b.re, b.im);
        let v = if pr {
            q_partition_pr(&dos, b, q, &cfg)
        } else {
            q_partition(&dos, b, q, &cfg)
        }
        .map_err(lib_err)?;
        *out = to_result(v);
        Ok(())
    })
}

unsafe fn q_elementary(
    z: QlComplex,
    q: f64,
    out: *mut QlComplex,
    op: fn(Complex64, QIndex) -> qlaplace::Result<Complex64>,
) -> QlStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let q = QIndex::new(q).map_err(lib_err)?;
        *out = to_c(op(Complex64::new(z.re, z.im), q).map_err(lib_err)?);
        Ok(())
    })
}

/// q-exponential `e_q(u)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_q_exp(u: QlComplex, q: f64, out: *mut QlComplex) -> QlStatus {
    q_elementary(u, q, out, q_exp)
}

/// q-logarithm `ln_q(v)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ql_q_log(v: QlComplex, q: f64, out: *mut QlComplex) -> QlStatus {
    q_elementary(v, q, out, q_log)
}
