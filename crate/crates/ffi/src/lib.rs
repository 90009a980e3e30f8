//! C ABI over `threshold_lab`.
//!
//! Every entry point returns a [`TlStatus`]; on failure the message is available from
//! [`tl_last_error_message`] on the same thread. Handles are opaque and must be
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use threshold_lab::band::{solve_band_endpoint, ChainSolution};
use threshold_lab::highprec::{find_min_poly, refine_endpoint};
use threshold_lab::mourre::{solve_coefficients, validate_sigma, CoefficientSolution, SigmaPlan};
use threshold_lab::rate::rate_fit;
use threshold_lab::Error;

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TlStatus {
    TlOk = 0,
    TlNullPointer = 1,
    TlInvalidArgument = 2,
    TlOutOfBranch = 3,
    TlNoRoot = 4,
    TlNonConvergence = 5,
    TlNoRelation = 6,
    TlInsufficientPrecision = 7,
    TlAmbiguousNullspace = 8,
    TlDegenerateInput = 9,
    TlBufferTooSmall = 10,
    TlIo = 11,
    TlPanic = 12,
}

/// A band endpoint and its chain.
pub struct TlChain(ChainSolution);

/// An index set together with its solved coefficient vector.
pub struct TlSigma {
    plan: SigmaPlan,
    solution: Option<CoefficientSolution>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> TlStatus {
    match err {
        Error::OutOfBranch { .. } => TlStatus::TlOutOfBranch,
        Error::NoRoot { .. } => TlStatus::TlNoRoot,
        Error::NonConvergence { .. } => TlStatus::TlNonConvergence,
        Error::NoRelation { .. } => TlStatus::TlNoRelation,
        Error::InsufficientPrecision { .. } => TlStatus::TlInsufficientPrecision,
        Error::AmbiguousNullspace { .. } => TlStatus::TlAmbiguousNullspace,
        Error::DegenerateInput(_) => TlStatus::TlDegenerateInput,
        Error::InvalidArgument(_) | Error::UnknownSource(_) => TlStatus::TlInvalidArgument,
        Error::Io { .. } => TlStatus::TlIo,
    }
}

fn fail(status: TlStatus, msg: &str) -> TlStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), TlStatus>) -> TlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TlStatus::TlOk
        }
        Ok(Err(s)) => s,
        Err(_) => fail(TlStatus::TlPanic, "internal panic"),
    }
}

fn lib<T>(r: threshold_lab::Result<T>) -> Result<T, TlStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), TlStatus> {
    if p.is_null() {
        Err(fail(TlStatus::TlNullPointer, &format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// Copies `src` into the caller's buffer, or fails with `TlBufferTooSmall`.
///
/// # Safety
/// `dst` must be valid for `cap` writes.
unsafe fn copy_out<T: Copy>(src: &[T], dst: *mut T, cap: usize) -> Result<(), TlStatus> {
    if cap < src.len() {
        return Err(fail(
            TlStatus::TlBufferTooSmall,
            &format!("buffer holds {cap} values, need {}", src.len()),
        ));
    }
    if !src.is_empty() {
        non_null(dst, "output buffer")?;
        ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    }
    Ok(())
}

/// # Safety
/// `ptr` must be valid for `len` reads, or null with `len == 0`.
unsafe fn slice_in<'a, T>(ptr: *const T, len: usize) -> Result<&'a [T], TlStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(ptr, "input array")?;
    Ok(std::slice::from_raw_parts(ptr, len))
}

/// Message of the last failed call on this thread; empty after a success. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn tl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tl_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}

/// Band endpoint `E_n` for `κ`, bisected to `tol`.
///
/// # Safety
/// `out_energy` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn tl_band_endpoint(kappa: u32, n: u32, tol: f64, out_energy: *mut f64) -> TlStatus {
    guard(|| {
        non_null(out_energy, "out_energy")?;
        let c = lib(solve_band_endpoint(kappa, n, tol))?;
        *out_energy = c.energy;
        Ok(())
    })
}

/// Solves `E_n` and keeps its chain `X_0 … X_{n+1}`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn tl_chain_new(kappa: u32, n: u32, tol: f64, out: *mut *mut TlChain) -> TlStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let c = lib(solve_band_endpoint(kappa, n, tol))?;
        *out = Box::into_raw(Box::new(TlChain(c)));
        Ok(())
    })
}

/// # Safety
/// `chain` must be null or a handle from [`tl_chain_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tl_chain_free(chain: *mut TlChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// # Safety
/// `chain` must be a live handle and `out_energy` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_chain_energy(chain: *const TlChain, out_energy: *mut f64) -> TlStatus {
    guard(|| {
        non_null(chain, "chain")?;
        non_null(out_energy, "out_energy")?;
        *out_energy = (*chain).0.energy;
        Ok(())
    })
}

/// Number of chain points, `n + 2`; 0 for a null handle.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tl_chain_len(chain: *const TlChain) -> usize {
    if chain.is_null() {
        0
    } else {
        (*chain).0.points.len()
    }
}

/// Copies the chain points into `buf`.
///
/// # Safety
/// `chain` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn tl_chain_points(chain: *const TlChain, buf: *mut f64, cap: usize) -> TlStatus {
    guard(|| {
        non_null(chain, "chain")?;
        copy_out(&(*chain).0.points, buf, cap)
    })
}

/// Builds an index set; entries must be increasing positive multiples of `κ`.
///
/// # Safety
/// `indices` must be valid for `len` reads and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn tl_sigma_new(
    kappa: u32,
    band: u32,
    indices: *const u32,
    len: usize,
    out: *mut *mut TlSigma,
) -> TlStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let idx = slice_in(indices, len)?;
        let plan = lib(SigmaPlan::new(kappa, band, idx.to_vec()))?;
        *out = Box::into_raw(Box::new(TlSigma { plan, solution: None }));
        Ok(())
    })
}

/// # Safety
/// `sigma` must be null or a handle from [`tl_sigma_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tl_sigma_free(sigma: *mut TlSigma) {
    if !sigma.is_null() {
        drop(Box::from_raw(sigma));
    }
}

/// Solves `Mρ = 0` (cached on the handle) and copies `ρ`, one entry per index, into `rho`.
///
/// # Safety
/// `sigma` must be a live handle, not used concurrently, and `rho` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn tl_sigma_solve(sigma: *mut TlSigma, rho: *mut f64, cap: usize) -> TlStatus {
    guard(|| {
        non_null(sigma, "sigma")?;
        let s = &mut *sigma;
        if s.solution.is_none() {
            s.solution = Some(lib(solve_coefficients(&s.plan))?);
        }
        let sol = s.solution.as_ref().expect("just solved");
        copy_out(&sol.rho, rho, cap)
    })
}

/// Positivity scan on `e_grid × x_grid` interior samples. `out_valid` receives 1 or 0.
///
/// # Safety
/// `sigma` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tl_sigma_validate(
    sigma: *const TlSigma,
    e_grid: usize,
    x_grid: usize,
    margin: f64,
    out_valid: *mut i32,
    out_min_value: *mut f64,
) -> TlStatus {
    guard(|| {
        non_null(sigma, "sigma")?;
        non_null(out_valid, "out_valid")?;
        non_null(out_min_value, "out_min_value")?;
        let v = lib(validate_sigma(&(*sigma).plan, e_grid, x_grid, margin))?;
        *out_valid = i32::from(v.valid);
        *out_min_value = v.min_value;
        Ok(())
    })
}

/// Slope of `ln(E_{2n} − 2cos(π/κ))` against `ln n` over the given `n`.
///
/// # Safety
/// `ns` must be valid for `len` reads and `out_slope` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_rate_slope(kappa: u32, ns: *const u32, len: usize, out_slope: *mut f64) -> TlStatus {
    guard(|| {
        non_null(out_slope, "out_slope")?;
        let ns = slice_in(ns, len)?;
        *out_slope = lib(rate_fit(kappa, ns))?.slope;
        Ok(())
    })
}

/// Minimal integer polynomial of `E_n`, ascending coefficients. The endpoint is refined to
/// `precision` bits and the lattice uses `precision / 2`. `out_degree` receives the degree;
/// `coeffs` must hold `degree + 1` values.
///
/// # Safety
/// `coeffs` must be valid for `cap` writes and `out_degree` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_minpoly(
    kappa: u32,
    n: u32,
    precision: usize,
    max_degree: usize,
    coeffs: *mut i64,
    cap: usize,
    out_degree: *mut usize,
) -> TlStatus {
    guard(|| {
        non_null(out_degree, "out_degree")?;
        let value = lib(refine_endpoint(kappa, n, precision))?;
        let mp = lib(find_min_poly(&value, max_degree, precision / 2))?;
        *out_degree = mp.degree;
        copy_out(&mp.coefficients, coeffs, cap)
    })
}
