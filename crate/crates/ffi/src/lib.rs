//! C ABI over `qtele-core`.
//!
//! Every fallible entry point returns a [`QtStatus`]; on failure a message is
//! available from [`qt_last_error_message`] on the same thread. Results are
//! written through caller-provided out-pointers. A [`QtTeleporter`] handle is
//! opaque, owned by the caller, and released with [`qt_teleporter_free`].
//! Handles are immutable after creation and may be shared across threads.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qtele::entanglement::{canonical_setting, chsh_expectation_pure};
use qtele::teleport::closed_form_fidelity;
use qtele::{BellOutcome, BlochQubit, CorrectionMap, EntangledChannel, Error, StateVector, Teleporter, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QtStatus {
    Ok = 0,
    NullPointer = 1,
    /// A parameter is outside its admissible range.
    Domain = 2,
    /// Input violates a numerical contract (normalization, hermiticity, ...).
    Contract = 3,
    DegenerateBranch = 4,
    /// Unknown enum code or malformed argument.
    InvalidArgument = 5,
    Internal = 6,
}

pub const QT_CORRECTION_STANDARD: u32 = 0;
pub const QT_CORRECTION_ZETA_LISTING: u32 = 1;

/// Opaque handle to an evaluated teleportation configuration.
pub struct QtTeleporter {
    inner: Teleporter,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: QtStatus, msg: impl Into<String>) -> QtStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> QtStatus {
    let status = match e {
        Error::Domain { .. } => QtStatus::Domain,
        Error::DegenerateBranch { .. } => QtStatus::DegenerateBranch,
        Error::Shape(_) | Error::Size { .. } => QtStatus::InvalidArgument,
        _ => QtStatus::Contract,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> QtStatus) -> QtStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(QtStatus::Internal, "panic inside qtele"))
}

fn correction_from_code(code: u32) -> Option<CorrectionMap> {
    match code {
        QT_CORRECTION_STANDARD => Some(CorrectionMap::Standard),
        QT_CORRECTION_ZETA_LISTING => Some(CorrectionMap::ZetaListing),
        _ => None,
    }
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// CHSH expectation of a two-qubit pure state under the canonical setting
/// `A = (σx+σz)/√2, A' = (σx−σz)/√2, B = σx, B' = σz`.
///
/// # Safety
/// `amplitudes` must point to 8 doubles: `re0, im0, re1, im1, ..., re3, im3`.
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qt_chsh_expectation(amplitudes: *const f64, flip_b: bool, out: *mut f64) -> QtStatus {
    guard(|| {
        if amplitudes.is_null() || out.is_null() {
            return fail(QtStatus::NullPointer, "null pointer argument");
        }
        let raw = std::slice::from_raw_parts(amplitudes, 8);
        let amps = raw.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect();
        let state = match StateVector::new(amps) {
            Ok(s) => s,
            Err(e) => return from_error(e),
        };
        let setting = if flip_b { canonical_setting().with_flipped_b() } else { canonical_setting() };
        match chsh_expectation_pure(&state, &setting) {
            Ok(v) => {
                *out = v;
                QtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// `cos⁴(θ/2) + sin⁴(θ/2) + αβ sin²θ`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qt_closed_form_fidelity(theta: f64, phi: f64, alpha: f64, out: *mut f64) -> QtStatus {
    guard(|| {
        if out.is_null() {
            return fail(QtStatus::NullPointer, "null out pointer");
        }
        let input = match BlochQubit::new(theta, phi) {
            Ok(q) => q,
            Err(e) => return from_error(e),
        };
        let channel = match EntangledChannel::new(alpha) {
            Ok(c) => c,
            Err(e) => return from_error(e),
        };
        *out = closed_form_fidelity(&input, &channel);
        QtStatus::Ok
    })
}

/// Evaluates all four protocol branches for one configuration.
/// `correction` is `QT_CORRECTION_STANDARD` or `QT_CORRECTION_ZETA_LISTING`.
///
/// # Safety
/// `out` must be valid for one write. On success `*out` owns a handle that
/// must be released with `qt_teleporter_free`.
#[no_mangle]
pub unsafe extern "C" fn qt_teleporter_new(
    theta: f64,
    phi: f64,
    alpha: f64,
    correction: u32,
    out: *mut *mut QtTeleporter,
) -> QtStatus {
    guard(|| {
        if out.is_null() {
            return fail(QtStatus::NullPointer, "null out pointer");
        }
        *out = ptr::null_mut();
        let Some(map) = correction_from_code(correction) else {
            return fail(QtStatus::InvalidArgument, format!("unknown correction code {correction}"));
        };
        let input = match BlochQubit::new(theta, phi) {
            Ok(q) => q,
            Err(e) => return from_error(e),
        };
        let channel = match EntangledChannel::new(alpha) {
            Ok(c) => c,
            Err(e) => return from_error(e),
        };
        let handle = Box::new(QtTeleporter { inner: Teleporter::new(input, channel, map) });
        *out = Box::into_raw(handle);
        QtStatus::Ok
    })
}

/// # Safety
/// `handle` must be NULL or a pointer from `qt_teleporter_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qt_teleporter_free(handle: *mut QtTeleporter) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

unsafe fn with_handle(handle: *const QtTeleporter, f: impl FnOnce(&Teleporter) -> QtStatus) -> QtStatus {
    guard(|| match handle.as_ref() {
        Some(h) => f(&h.inner),
        None => fail(QtStatus::NullPointer, "null teleporter handle"),
    })
}

/// # Safety
/// `handle` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qt_teleporter_average_fidelity(handle: *const QtTeleporter, out: *mut f64) -> QtStatus {
    with_handle(handle, |t| {
        if out.is_null() {
            return fail(QtStatus::NullPointer, "null out pointer");
        }
        *out = t.average_fidelity();
        QtStatus::Ok
    })
}

/// Born probabilities in φ⁺, φ⁻, ψ⁺, ψ⁻ order (message bits 00, 01, 10, 11).
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid for 4 writes.
#[no_mangle]
pub unsafe extern "C" fn qt_teleporter_branch_probabilities(handle: *const QtTeleporter, out: *mut f64) -> QtStatus {
    with_handle(handle, |t| {
        if out.is_null() {
            return fail(QtStatus::NullPointer, "null out pointer");
        }
        let p = t.probabilities();
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&p);
        QtStatus::Ok
    })
}

/// Receiver's corrected qubit for message `bits` (0..=3) as `re0, im0, re1, im1`.
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid for 4 writes.
#[no_mangle]
pub unsafe extern "C" fn qt_teleporter_corrected_state(
    handle: *const QtTeleporter,
    bits: u32,
    out: *mut f64,
) -> QtStatus {
    with_handle(handle, |t| {
        if out.is_null() {
            return fail(QtStatus::NullPointer, "null out pointer");
        }
        let Some(outcome) = u8::try_from(bits).ok().and_then(BellOutcome::from_bits) else {
            return fail(QtStatus::InvalidArgument, format!("message bits {bits} out of range 0..=3"));
        };
        let branch = t.branch(outcome);
        let Some(state) = &branch.receiver_state_corrected else {
            return fail(
                QtStatus::DegenerateBranch,
                format!("branch {outcome} has probability {:e}", branch.probability),
            );
        };
        let dst = std::slice::from_raw_parts_mut(out, 4);
        for (pair, a) in dst.chunks_exact_mut(2).zip(state.amplitudes()) {
            pair[0] = a.re;
            pair[1] = a.im;
        }
        QtStatus::Ok
    })
}

/// Seeded Monte Carlo estimate of the average fidelity. Deterministic in
/// `(seed, shots)`.
///
/// # Safety
/// `handle` must be a live handle; `out_mean` and `out_stderr` must be valid
/// for one write each.
#[no_mangle]
pub unsafe extern "C" fn qt_teleporter_monte_carlo(
    handle: *const QtTeleporter,
    shots: u64,
    seed: u64,
    out_mean: *mut f64,
    out_stderr: *mut f64,
) -> QtStatus {
    with_handle(handle, |t| {
        if out_mean.is_null() || out_stderr.is_null() {
            return fail(QtStatus::NullPointer, "null out pointer");
        }
        match t.monte_carlo(shots, seed, 0) {
            Ok(est) => {
                *out_mean = est.mean;
                *out_stderr = est.stderr;
                QtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Transcript JSON (the `qtele teleport` shape without the Monte Carlo
/// block). Returns NULL on failure; free the result with `qt_string_free`.
///
/// # Safety
/// `handle` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qt_teleporter_transcript_json(handle: *const QtTeleporter) -> *mut c_char {
    let mut result = ptr::null_mut();
    let status = with_handle(handle, |t| match serde_json::to_string(&t.transcript()) {
        Ok(s) => match CString::new(s) {
            Ok(c) => {
                result = c.into_raw();
                QtStatus::Ok
            }
            Err(e) => fail(QtStatus::Internal, e.to_string()),
        },
        Err(e) => fail(QtStatus::Internal, e.to_string()),
    });
    if status == QtStatus::Ok {
        result
    } else {
        ptr::null_mut()
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
