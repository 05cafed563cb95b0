//! C ABI over `fracinv`.
//!
//! Every fallible function returns a [`FracinvStatus`]; on failure the
//! message is kept per thread and can be read with
//! [`fracinv_last_error_message`]. Objects are opaque handles created by a
//! `*_new`/`*_from_*` function and released with the matching `*_free`.
//! Output arrays are caller-allocated and their length is checked.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fracinv::fbm::FbmSampler;
use fracinv::fdm::{simulate_ensemble, GridSpec};
use fracinv::io::{load_source, parse_config, parse_config_str, reconstruct, ExperimentConfig, Reconstruction};
use fracinv::kernel::{compute_r, compute_s, green_value, QuadratureSpec};
use fracinv::{Error, FractionalOrders, HurstIndex};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracinvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    LengthMismatch = 3,
    NumericalFailure = 4,
    Io = 5,
    Config = 6,
    Panic = 7,
}

/// Orders, Hurst index and quadrature settings for kernel queries and
/// ensemble simulation.
pub struct FracinvModel {
    orders: FractionalOrders,
    hurst: HurstIndex,
    quad: QuadratureSpec,
}

/// A parsed experiment configuration.
pub struct FracinvConfig(ExperimentConfig);

/// Output of a reconstruction run.
pub struct FracinvReconstruction(Reconstruction);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn status_of(e: &Error) -> FracinvStatus {
    match e {
        Error::InvalidOrders { .. }
        | Error::InvalidHurst(_)
        | Error::OutOfDomain { .. }
        | Error::InvalidParameter { .. }
        | Error::UnknownSource(_) => FracinvStatus::InvalidArgument,
        Error::LengthMismatch { .. } => FracinvStatus::LengthMismatch,
        Error::QuadratureNotConverged { .. }
        | Error::EmbeddingNotNonnegative { .. }
        | Error::ZeroPivot { .. }
        | Error::NonPositiveKernel { .. }
        | Error::NotPositiveSemidefinite { .. } => FracinvStatus::NumericalFailure,
        Error::Config { .. } => FracinvStatus::Config,
        Error::Io(_) => FracinvStatus::Io,
        Error::Path { source, .. } | Error::Stage { source, .. } => status_of(source),
    }
}

struct Failure(FracinvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut msg = e.to_string();
        let mut src = std::error::Error::source(&e);
        while let Some(inner) = src {
            msg.push_str(": ");
            msg.push_str(&inner.to_string());
            src = inner.source();
        }
        Failure(status_of(&e), msg)
    }
}

fn null(what: &str) -> Failure {
    Failure(FracinvStatus::NullPointer, format!("`{what}` is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> FracinvStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Failure(FracinvStatus::Panic, msg))
    });
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|m| m.borrow_mut().clear());
            FracinvStatus::Ok
        }
        Err(Failure(code, msg)) => {
            LAST_ERROR.with(|m| *m.borrow_mut() = msg);
            code
        }
    }
}

unsafe fn slice<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn slice_mut<'a>(data: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(data, len))
}

unsafe fn string<'a>(text: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|e| Failure(FracinvStatus::InvalidArgument, format!("`{what}`: {e}")))
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), Failure> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            what,
            expected,
            found,
        }
        .into())
    }
}

/// Length in bytes of the last error message on this thread, excluding the
/// terminating NUL; 0 after a successful call.
#[no_mangle]
pub extern "C" fn fracinv_last_error_length() -> usize {
    LAST_ERROR.with(|m| m.borrow().len())
}

/// Copy the last error message into `buf` (NUL-terminated, truncated to
/// `capacity - 1` bytes). Returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `capacity` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn fracinv_last_error_message(buf: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|m| {
        let msg = m.borrow();
        if !buf.is_null() && capacity > 0 {
            let n = msg.len().min(capacity - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fracinv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Create a model from `count` increasing orders and a Hurst index.
///
/// # Safety
/// `orders` must point to `count` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fracinv_model_new(
    orders: *const f64,
    count: usize,
    hurst: f64,
    out: *mut *mut FracinvModel,
) -> FracinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let orders = FractionalOrders::new(slice(orders, count, "orders")?.to_vec())?;
        let hurst = HurstIndex::new(hurst)?;
        let model = FracinvModel {
            orders,
            hurst,
            quad: QuadratureSpec::default(),
        };
        *out = Box::into_raw(Box::new(model));
        Ok(())
    })
}

/// # Safety
/// `model` must come from [`fracinv_model_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fracinv_model_free(model: *mut FracinvModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Variance kernel `R(omega)`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fracinv_model_variance_kernel(
    model: *const FracinvModel,
    omega: f64,
    out: *mut f64,
) -> FracinvStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = compute_r(&m.orders, omega, m.hurst, &m.quad)?;
        Ok(())
    })
}

/// Frequency symbol `s(omega)` as real and imaginary parts.
///
/// # Safety
/// `model` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fracinv_model_symbol(
    model: *const FracinvModel,
    omega: f64,
    re: *mut f64,
    im: *mut f64,
) -> FracinvStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let s = compute_s(&m.orders, omega).value;
        *re = s.re;
        *im = s.im;
        Ok(())
    })
}

/// Green function `G_omega(x, y)` for `x, y` in `[0, 1]`.
///
/// # Safety
/// `model` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fracinv_model_green(
    model: *const FracinvModel,
    omega: f64,
    x: f64,
    y: f64,
    re: *mut f64,
    im: *mut f64,
) -> FracinvStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let g = green_value(&m.orders, omega, x, y)?;
        *re = g.re;
        *im = g.im;
        Ok(())
    })
}

/// Boundary traces for `paths` fBm paths, row-major into `out`
/// (`paths * (steps + 1)` doubles). `source` holds `f(t_n)`, `n = 0..=steps`.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn fracinv_model_simulate(
    model: *const FracinvModel,
    t_final: f64,
    steps: usize,
    intervals: usize,
    source: *const f64,
    source_len: usize,
    paths: usize,
    seed: u64,
    out: *mut f64,
    out_len: usize,
) -> FracinvStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let grid = GridSpec::new(t_final, steps, intervals)?;
        let f = slice(source, source_len, "source")?;
        check_len("output buffer", paths * (steps + 1), out_len)?;
        let out = slice_mut(out, out_len, "out")?;
        let ens = simulate_ensemble(&m.orders, &grid, f, m.hurst, paths, seed)?;
        for (row, trace) in out.chunks_mut(steps + 1).zip(&ens.traces) {
            row.copy_from_slice(trace);
        }
        Ok(())
    })
}

/// Path `index` of the fBm ensemble keyed by `seed` on `intervals` cells;
/// writes `intervals + 1` values.
///
/// # Safety
/// `out` must point to `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fracinv_fbm_path(
    hurst: f64,
    intervals: usize,
    seed: u64,
    index: u64,
    out: *mut f64,
    out_len: usize,
) -> FracinvStatus {
    guard(|| {
        let sampler = FbmSampler::new(HurstIndex::new(hurst)?, intervals)?;
        check_len("output buffer", intervals + 1, out_len)?;
        let out = slice_mut(out, out_len, "out")?;
        out.copy_from_slice(&sampler.path(seed, index).values);
        Ok(())
    })
}

/// Parse a configuration from NUL-terminated text.
///
/// # Safety
/// `text` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fracinv_config_from_str(
    text: *const c_char,
    out: *mut *mut FracinvConfig,
) -> FracinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let config = parse_config_str(string(text, "text")?)?;
        *out = Box::into_raw(Box::new(FracinvConfig(config)));
        Ok(())
    })
}

/// Parse a configuration file.
///
/// # Safety
/// `path` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fracinv_config_from_file(
    path: *const c_char,
    out: *mut *mut FracinvConfig,
) -> FracinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let config = parse_config(Path::new(string(path, "path")?))?;
        *out = Box::into_raw(Box::new(FracinvConfig(config)));
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracinv_config_set_seed(config: *mut FracinvConfig, seed: u64) -> FracinvStatus {
    guard(|| {
        let c = config.as_mut().ok_or_else(|| null("config"))?;
        c.0.seed = seed;
        Ok(())
    })
}

/// Number of time nodes `N + 1`, or 0 for a null handle.
///
/// # Safety
/// `config` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracinv_config_signal_len(config: *const FracinvConfig) -> usize {
    config.as_ref().map(|c| c.0.steps + 1).unwrap_or(0)
}

/// # Safety
/// `config` must come from a `fracinv_config_from_*` call and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn fracinv_config_free(config: *mut FracinvConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Run the reconstruction pipeline. With `source == NULL` the configured
/// source is used; otherwise `source` holds `N + 1` samples.
///
/// # Safety
/// `config` must be a live handle, `source` null or valid for `source_len`
/// doubles, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fracinv_reconstruct(
    config: *const FracinvConfig,
    source: *const f64,
    source_len: usize,
    out: *mut *mut FracinvReconstruction,
) -> FracinvStatus {
    guard(|| {
        let c = &config.as_ref().ok_or_else(|| null("config"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = if source.is_null() {
            load_source(&c.source, &c.grid()?)?.into_values()
        } else {
            slice(source, source_len, "source")?.to_vec()
        };
        let rec = reconstruct(c, &f)?;
        *out = Box::into_raw(Box::new(FracinvReconstruction(rec)));
        Ok(())
    })
}

/// Length of the reconstructed signal, or 0 for a null handle.
///
/// # Safety
/// `rec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracinv_reconstruction_len(rec: *const FracinvReconstruction) -> usize {
    rec.as_ref().map(|r| r.0.recon.len()).unwrap_or(0)
}

/// Copy the reconstructed `|f(t_n)|` into `out`.
///
/// # Safety
/// `rec` must be a live handle and `out` valid for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fracinv_reconstruction_signal(
    rec: *const FracinvReconstruction,
    out: *mut f64,
    out_len: usize,
) -> FracinvStatus {
    guard(|| {
        let r = &rec.as_ref().ok_or_else(|| null("rec"))?.0;
        check_len("output buffer", r.recon.len(), out_len)?;
        slice_mut(out, out_len, "out")?.copy_from_slice(&r.recon);
        Ok(())
    })
}

/// Relative l2 error against the source used for the run, and whether the
/// solver met its tolerance.
///
/// # Safety
/// `rec` must be a live handle; `error` and `converged` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fracinv_reconstruction_summary(
    rec: *const FracinvReconstruction,
    error: *mut f64,
    converged: *mut bool,
) -> FracinvStatus {
    guard(|| {
        let r = &rec.as_ref().ok_or_else(|| null("rec"))?.0;
        if error.is_null() || converged.is_null() {
            return Err(null("error/converged"));
        }
        *error = r.error();
        *converged = r.report.converged;
        Ok(())
    })
}

/// # Safety
/// `rec` must come from [`fracinv_reconstruct`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fracinv_reconstruction_free(rec: *mut FracinvReconstruction) {
    if !rec.is_null() {
        drop(Box::from_raw(rec));
    }
}
