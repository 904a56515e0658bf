//! C ABI for the capacity-per-unit-cost library.
//!
//! Conventions:
//! - every fallible call returns a [`CpucStatus`]; on failure the thread's
//!   last error message is retrievable with [`cpuc_last_error_message`];
//! - states, channels, and ensembles are opaque handles created and freed
//!   through this API;
//! - complex matrices cross the boundary as row-major `double` arrays with
//!   interleaved real/imaginary parts (`2 * rows * cols` values);
//! - infinite results are reported through a `bool` out-parameter, never as
//!   a sentinel double;
//! - all information values are in nats.
//!
//! The generated header lives at `include/cpuc.h`.

use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;

use cpuc_core::capacity::{holevo_chi_entropy_form, Ensemble};
use cpuc_core::channel::KrausChannel;
use cpuc_core::density::{relative_entropy, von_neumann_entropy, DensityMatrix};
use cpuc_core::gaussian::{
    classify, cpuc_gaussian, pie_curve, relent_vs_vacuum_output, vacuum_output_params,
    ChannelClass, FiducialChannel, GaussianParams,
};
use cpuc_core::linalg::CMatrix;
use cpuc_core::{Error, ExtendedReal};

/// Status of a C-ABI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CpucStatus {
    Ok = 0,
    /// Invalid input: bad dimensions, failed state/channel validation,
    /// out-of-domain parameters.
    InvalidInput = 1,
    /// Numerical failure: truncation tails, non-convergence.
    Numerical = 2,
    /// A required pointer was null.
    NullPointer = 3,
    /// Internal panic captured at the boundary.
    Internal = 4,
}

/// Channel classification by the vacuum output.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CpucChannelClass {
    Lossy = 0,
    PhaseInsensitive = 1,
    Squeezing = 2,
}

/// Opaque quantum state handle.
pub struct CpucDensityMatrix {
    inner: DensityMatrix,
}

/// Opaque Kraus channel handle.
pub struct CpucKrausChannel {
    inner: KrausChannel,
}

/// Opaque ensemble handle (symbols accumulate; priors are validated when
/// an information quantity is computed).
pub struct CpucEnsemble {
    dim: usize,
    symbols: Vec<(f64, DensityMatrix, f64)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(message: &str) {
    LAST_ERROR.with(|slot| {
        let mut slot = slot.borrow_mut();
        slot.clear();
        slot.extend_from_slice(message.as_bytes());
    });
}

fn status_of(e: &Error) -> CpucStatus {
    match e {
        Error::Numerical(_) => CpucStatus::Numerical,
        _ => CpucStatus::InvalidInput,
    }
}

fn fail(e: Error) -> CpucStatus {
    let status = status_of(&e);
    set_error(&e.to_string());
    status
}

/// Run a body with panic containment; panics never cross the boundary.
fn guarded(body: impl FnOnce() -> CpucStatus) -> CpucStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            CpucStatus::Internal
        }
    }
}

/// Copy the thread's last error message into `buffer` (NUL-terminated,
/// truncating when needed) and return the full message length in bytes.
/// A zero `capacity` or null `buffer` only queries the length.
/// # Safety
/// `buffer` must be null or valid for `capacity` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_last_error_message(
    buffer: *mut c_char,
    capacity: usize,
) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        if !buffer.is_null() && capacity > 0 {
            let n = slot.len().min(capacity - 1);
            std::ptr::copy_nonoverlapping(slot.as_ptr(), buffer as *mut u8, n);
            *buffer.add(n) = 0;
        }
        slot.len()
    })
}

unsafe fn write_out<T>(out: *mut T, value: T) -> bool {
    if out.is_null() {
        set_error("null output pointer");
        return false;
    }
    *out = value;
    true
}

fn extended_to_parts(value: ExtendedReal) -> (f64, bool) {
    match value {
        ExtendedReal::Finite(v) => (v, false),
        ExtendedReal::Infinite => (0.0, true),
    }
}

// ---------------------------------------------------------------------------
// Gaussian closed forms
// ---------------------------------------------------------------------------

/// Capacity per unit cost of the fiducial Gaussian channel (η, Ñ, ω̃), in
/// nats per photon. `out_infinite` flags the unbounded (lossy) case, in
/// which `out_value` is not meaningful.
/// # Safety
/// `out_value` and `out_infinite` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_gaussian_cpuc(
    eta: f64,
    n_tilde: f64,
    omega_tilde: f64,
    out_value: *mut f64,
    out_infinite: *mut bool,
) -> CpucStatus {
    guarded(|| {
        let channel = match FiducialChannel::new(eta, n_tilde, omega_tilde) {
            Ok(ch) => ch,
            Err(e) => return fail(e),
        };
        let (value, infinite) = extended_to_parts(cpuc_gaussian(&channel));
        if !write_out(out_value, value) || !write_out(out_infinite, infinite) {
            return CpucStatus::NullPointer;
        }
        CpucStatus::Ok
    })
}

/// Classification of the fiducial channel by its vacuum output.
/// # Safety
/// `out_class` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_gaussian_classification(
    eta: f64,
    n_tilde: f64,
    omega_tilde: f64,
    out_class: *mut CpucChannelClass,
) -> CpucStatus {
    guarded(|| {
        let channel = match FiducialChannel::new(eta, n_tilde, omega_tilde) {
            Ok(ch) => ch,
            Err(e) => return fail(e),
        };
        let class = match classify(&channel) {
            ChannelClass::Lossy => CpucChannelClass::Lossy,
            ChannelClass::PhaseInsensitive => CpucChannelClass::PhaseInsensitive,
            ChannelClass::Squeezing => CpucChannelClass::Squeezing,
        };
        if !write_out(out_class, class) {
            return CpucStatus::NullPointer;
        }
        CpucStatus::Ok
    })
}

/// Thermal photons and quotient-form squeezing of the vacuum output.
/// # Safety
/// `out_n0` and `out_omega0` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_gaussian_vacuum_output(
    eta: f64,
    n_tilde: f64,
    omega_tilde: f64,
    out_n0: *mut f64,
    out_omega0: *mut f64,
) -> CpucStatus {
    guarded(|| {
        let channel = match FiducialChannel::new(eta, n_tilde, omega_tilde) {
            Ok(ch) => ch,
            Err(e) => return fail(e),
        };
        let vac = vacuum_output_params(&channel);
        if !write_out(out_n0, vac.n_out) || !write_out(out_omega0, vac.omega_out) {
            return CpucStatus::NullPointer;
        }
        CpucStatus::Ok
    })
}

/// Closed-form D(Λ[ρ]‖Λ[vacuum]) for an input Gaussian state
/// (N̄_in, ω_in, α = alpha_re + i·alpha_im).
/// # Safety
/// `out_value` and `out_infinite` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_gaussian_relent_vs_vacuum(
    eta: f64,
    n_tilde: f64,
    omega_tilde: f64,
    n_in: f64,
    omega_in: f64,
    alpha_re: f64,
    alpha_im: f64,
    out_value: *mut f64,
    out_infinite: *mut bool,
) -> CpucStatus {
    guarded(|| {
        let channel = match FiducialChannel::new(eta, n_tilde, omega_tilde) {
            Ok(ch) => ch,
            Err(e) => return fail(e),
        };
        let params = match GaussianParams::new(n_in, omega_in, Complex64::new(alpha_re, alpha_im))
        {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        let (value, infinite) = extended_to_parts(relent_vs_vacuum_output(&channel, &params));
        if !write_out(out_value, value) || !write_out(out_infinite, infinite) {
            return CpucStatus::NullPointer;
        }
        CpucStatus::Ok
    })
}

/// One point of the photon-information-efficiency curve of a
/// phase-insensitive channel.
/// # Safety
/// `out_pie` and `out_capacity` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_pie_point(
    eta: f64,
    n_tilde: f64,
    omega_tilde: f64,
    nbar: f64,
    out_pie: *mut f64,
    out_capacity: *mut f64,
) -> CpucStatus {
    guarded(|| {
        let channel = match FiducialChannel::new(eta, n_tilde, omega_tilde) {
            Ok(ch) => ch,
            Err(e) => return fail(e),
        };
        let point = match pie_curve(&channel, &[nbar]) {
            Ok(points) => points[0],
            Err(e) => return fail(e),
        };
        if !write_out(out_pie, point.pie) || !write_out(out_capacity, point.capacity) {
            return CpucStatus::NullPointer;
        }
        CpucStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

unsafe fn matrix_from_interleaved(rows: usize, cols: usize, data: *const f64) -> Option<CMatrix> {
    if data.is_null() {
        set_error("null matrix data");
        return None;
    }
    let slice = std::slice::from_raw_parts(data, 2 * rows * cols);
    Some(CMatrix::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        Complex64::new(slice[k], slice[k + 1])
    }))
}

/// Create a density matrix from `2*dim*dim` doubles (row-major,
/// interleaved re/im). Validates Hermiticity, positivity, and unit trace.
/// # Safety
/// `entries_re_im` must be valid for `2*dim*dim` reads; `out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_density_new(
    dim: usize,
    entries_re_im: *const f64,
    out: *mut *mut CpucDensityMatrix,
) -> CpucStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return CpucStatus::NullPointer;
        }
        if dim == 0 {
            set_error("zero dimension");
            return CpucStatus::InvalidInput;
        }
        let Some(matrix) = matrix_from_interleaved(dim, dim, entries_re_im) else {
            return CpucStatus::NullPointer;
        };
        match DensityMatrix::new(matrix) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CpucDensityMatrix { inner }));
                CpucStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a state handle. Null is a no-op.
/// # Safety
/// `state` must be null or a handle from this API, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cpuc_density_free(state: *mut CpucDensityMatrix) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Von Neumann entropy S(ρ) in nats.
/// # Safety
/// `state` must be a live handle; `out_value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_von_neumann_entropy(
    state: *const CpucDensityMatrix,
    out_value: *mut f64,
) -> CpucStatus {
    guarded(|| {
        let Some(state) = state.as_ref() else {
            set_error("null state");
            return CpucStatus::NullPointer;
        };
        let s = von_neumann_entropy(&state.inner);
        if !write_out(out_value, s) {
            return CpucStatus::NullPointer;
        }
        CpucStatus::Ok
    })
}

/// Quantum relative entropy D(ρ‖σ) in nats; `out_infinite` reports the
/// support-mismatch branch.
/// # Safety
/// `rho` and `sigma` must be live handles; the out-parameters must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_relative_entropy(
    rho: *const CpucDensityMatrix,
    sigma: *const CpucDensityMatrix,
    out_value: *mut f64,
    out_infinite: *mut bool,
) -> CpucStatus {
    guarded(|| {
        let (Some(rho), Some(sigma)) = (rho.as_ref(), sigma.as_ref()) else {
            set_error("null state");
            return CpucStatus::NullPointer;
        };
        match relative_entropy(&rho.inner, &sigma.inner) {
            Ok(d) => {
                let (value, infinite) = extended_to_parts(d);
                if !write_out(out_value, value) || !write_out(out_infinite, infinite) {
                    return CpucStatus::NullPointer;
                }
                CpucStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

/// Create a Kraus channel from `n_kraus` stacked operators, each
/// `2*dim_out*dim_in` doubles (row-major, interleaved re/im). Validates
/// CPTP completeness.
/// # Safety
/// `ops_re_im` must be valid for `2*dim_out*dim_in*n_kraus` reads; `out`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_channel_new(
    dim_in: usize,
    dim_out: usize,
    n_kraus: usize,
    ops_re_im: *const f64,
    out: *mut *mut CpucKrausChannel,
) -> CpucStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return CpucStatus::NullPointer;
        }
        if dim_in == 0 || dim_out == 0 || n_kraus == 0 {
            set_error("zero dimension or empty Kraus list");
            return CpucStatus::InvalidInput;
        }
        if ops_re_im.is_null() {
            set_error("null Kraus data");
            return CpucStatus::NullPointer;
        }
        let stride = 2 * dim_out * dim_in;
        let ops: Vec<CMatrix> = (0..n_kraus)
            .filter_map(|k| matrix_from_interleaved(dim_out, dim_in, ops_re_im.add(k * stride)))
            .collect();
        match KrausChannel::new(ops) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CpucKrausChannel { inner }));
                CpucStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a channel handle. Null is a no-op.
/// # Safety
/// `channel` must be null or a handle from this API, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cpuc_channel_free(channel: *mut CpucKrausChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Apply the channel: `*out` receives a new state handle Λ[ρ].
/// # Safety
/// `channel` and `state` must be live handles; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_channel_apply(
    channel: *const CpucKrausChannel,
    state: *const CpucDensityMatrix,
    out: *mut *mut CpucDensityMatrix,
) -> CpucStatus {
    guarded(|| {
        let (Some(channel), Some(state)) = (channel.as_ref(), state.as_ref()) else {
            set_error("null handle");
            return CpucStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return CpucStatus::NullPointer;
        }
        match channel.inner.apply(&state.inner) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CpucDensityMatrix { inner }));
                CpucStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

// ---------------------------------------------------------------------------
// Ensembles and Holevo information
// ---------------------------------------------------------------------------

/// Create an empty ensemble over `dim`-dimensional states.
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_ensemble_new(
    dim: usize,
    out: *mut *mut CpucEnsemble,
) -> CpucStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return CpucStatus::NullPointer;
        }
        if dim == 0 {
            set_error("zero dimension");
            return CpucStatus::InvalidInput;
        }
        *out = Box::into_raw(Box::new(CpucEnsemble {
            dim,
            symbols: Vec::new(),
        }));
        CpucStatus::Ok
    })
}

/// Release an ensemble handle. Null is a no-op.
/// # Safety
/// `ensemble` must be null or a handle from this API, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cpuc_ensemble_free(ensemble: *mut CpucEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

/// Append a (prior, cost, state) symbol. The state is copied; priors are
/// validated (sum to 1) when an information quantity is computed.
/// # Safety
/// `ensemble` and `state` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn cpuc_ensemble_push(
    ensemble: *mut CpucEnsemble,
    prior: f64,
    cost: f64,
    state: *const CpucDensityMatrix,
) -> CpucStatus {
    guarded(|| {
        let (Some(ensemble), Some(state)) = (ensemble.as_mut(), state.as_ref()) else {
            set_error("null handle");
            return CpucStatus::NullPointer;
        };
        if state.inner.dim() != ensemble.dim {
            return fail(Error::DimensionMismatch {
                expected: ensemble.dim,
                got: state.inner.dim(),
            });
        }
        ensemble.symbols.push((prior, state.inner.clone(), cost));
        CpucStatus::Ok
    })
}

/// Holevo information χ of the ensemble through `channel` (identity when
/// `channel` is null), in nats.
/// # Safety
/// `ensemble` must be a live handle; `channel` may be null; `out_value`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpuc_holevo_chi(
    ensemble: *const CpucEnsemble,
    channel: *const CpucKrausChannel,
    out_value: *mut f64,
) -> CpucStatus {
    guarded(|| {
        let Some(ensemble) = ensemble.as_ref() else {
            set_error("null ensemble");
            return CpucStatus::NullPointer;
        };
        let validated = match Ensemble::new(ensemble.symbols.clone()) {
            Ok(e) => e,
            Err(e) => return fail(e),
        };
        let identity;
        let kraus = match channel.as_ref() {
            Some(ch) => &ch.inner,
            None => {
                identity = KrausChannel::identity(ensemble.dim);
                &identity
            }
        };
        match holevo_chi_entropy_form(&validated, kraus) {
            Ok(chi) => {
                if !write_out(out_value, chi) {
                    return CpucStatus::NullPointer;
                }
                CpucStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
