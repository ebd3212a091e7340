//! C ABI for the catalytic Otto engine simulator.
//!
//! Objects are opaque heap handles created by `cotto_*_new`/constructor
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`CottoStatus`]; on failure a message is available from
//! [`cotto_last_error`] on the same thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use catalytic_otto::{
    closed_form, d_otto_protocol, engine_regime, run_cycle, thermal_qubit, Error, FixedPointChoice, SwapProtocol,
    ThermalQubit,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CottoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The protocol admits no cycle at the requested catalyst state.
    Infeasible = 3,
    ParseError = 4,
    /// Output buffer too small.
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CottoFixedPoint {
    MaxWork = 0,
    MaxEfficiency = 1,
}

/// Hot and cold thermal qubits.
pub struct CottoEngine {
    hot: ThermalQubit,
    cold: ThermalQubit,
}

/// A validated swap protocol.
pub struct CottoProtocol(SwapProtocol);

/// Closed-form d-Otto quantities.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CottoClosedForm {
    pub eta_d: f64,
    pub work_d: f64,
    pub f_d: f64,
    pub delta_p: f64,
    pub in_engine_regime: bool,
}

/// One simulated cycle. `eta` and `delta_p` are meaningful only when the
/// matching `has_*` flag is set.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CottoCycle {
    pub q_h: f64,
    pub q_c: f64,
    pub work: f64,
    pub eta: f64,
    pub has_eta: bool,
    pub eta_carnot: f64,
    pub delta_p: f64,
    pub has_delta_p: bool,
    pub cyclicity_residual: f64,
    pub catalyst_dim: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> CottoStatus {
    match err {
        Error::Parse { .. } | Error::InvalidProtocol(_) => CottoStatus::ParseError,
        Error::CyclicityViolated { .. } | Error::NotStochastic(_) => CottoStatus::Infeasible,
        _ => CottoStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> CottoStatus {
    set_error(err.to_string());
    status_of(&err)
}

/// Runs `f`, turning panics into [`CottoStatus::Panic`].
fn guarded(f: impl FnOnce() -> CottoStatus) -> CottoStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            CottoStatus::Panic
        }
    }
}

fn null() -> CottoStatus {
    set_error("null pointer argument");
    CottoStatus::NullPointer
}

/// Message for the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cotto_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates an engine from the two baths. Frequencies and inverse temperatures
/// must be finite and non-negative.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn cotto_engine_new(
    beta_h: f64,
    omega_h: f64,
    beta_c: f64,
    omega_c: f64,
    out: *mut *mut CottoEngine,
) -> CottoStatus {
    guarded(|| {
        if out.is_null() {
            return null();
        }
        let engine = match (thermal_qubit(beta_h, omega_h), thermal_qubit(beta_c, omega_c)) {
            (Ok(hot), Ok(cold)) => CottoEngine { hot, cold },
            (Err(e), _) | (_, Err(e)) => return fail(e),
        };
        *out = Box::into_raw(Box::new(engine));
        CottoStatus::Ok
    })
}

/// # Safety
/// `engine` must be NULL or a handle from [`cotto_engine_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cotto_engine_free(engine: *mut CottoEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Closed-form efficiency, work and flow of the d-Otto protocol.
///
/// # Safety
/// `engine` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cotto_closed_form(
    engine: *const CottoEngine,
    d: usize,
    out: *mut CottoClosedForm,
) -> CottoStatus {
    guarded(|| {
        let (Some(e), false) = (engine.as_ref(), out.is_null()) else {
            return null();
        };
        match closed_form(d, &e.hot, &e.cold) {
            Ok(cf) => {
                *out = CottoClosedForm {
                    eta_d: cf.eta_d,
                    work_d: cf.work_d,
                    f_d: cf.f_d,
                    delta_p: cf.delta_p,
                    in_engine_regime: cf.in_engine_regime,
                };
                CottoStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

/// Whether dimension `d` runs the d-Otto protocol as an engine.
///
/// # Safety
/// `engine` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cotto_engine_regime(engine: *const CottoEngine, d: usize, out: *mut bool) -> CottoStatus {
    guarded(|| {
        let (Some(e), false) = (engine.as_ref(), out.is_null()) else {
            return null();
        };
        if d == 0 {
            set_error("catalyst dimension must be at least 1");
            return CottoStatus::InvalidArgument;
        }
        *out = engine_regime(d, &e.hot, &e.cold);
        CottoStatus::Ok
    })
}

fn emit_protocol(res: catalytic_otto::Result<SwapProtocol>, out: *mut *mut CottoProtocol) -> CottoStatus {
    match res {
        Ok(p) => {
            // SAFETY: callers check `out` for NULL first
            unsafe { *out = Box::into_raw(Box::new(CottoProtocol(p))) };
            CottoStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// The d-Otto protocol for a `d`-level catalyst.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cotto_protocol_d_otto(d: usize, out: *mut *mut CottoProtocol) -> CottoStatus {
    guarded(|| {
        if out.is_null() {
            return null();
        }
        emit_protocol(d_otto_protocol(d), out)
    })
}

/// Parses a protocol in text form: one `i j k i' j' k'` swap per line, or a
/// single `perm: ...` line.
///
/// # Safety
/// `text` must be a NUL-terminated UTF-8 string and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cotto_protocol_parse(
    text: *const c_char,
    d: usize,
    out: *mut *mut CottoProtocol,
) -> CottoStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return null();
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            set_error("protocol text is not UTF-8");
            return CottoStatus::ParseError;
        };
        emit_protocol(SwapProtocol::parse(text, d), out)
    })
}

/// Catalyst dimension of a protocol, or 0 for NULL.
///
/// # Safety
/// `proto` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cotto_protocol_dim(proto: *const CottoProtocol) -> usize {
    proto.as_ref().map_or(0, |p| p.0.dim())
}

/// # Safety
/// `proto` must be NULL or a protocol handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cotto_protocol_free(proto: *mut CottoProtocol) {
    if !proto.is_null() {
        drop(Box::from_raw(proto));
    }
}

/// Runs one cycle at the chosen fixed point of the catalyst. When `catalyst`
/// is non-NULL the catalyst distribution is copied into it; `catalyst_len`
/// must then be at least the protocol dimension.
///
/// # Safety
/// `engine` and `proto` must be live handles, `out` valid for one write and
/// `catalyst` NULL or valid for `catalyst_len` writes.
#[no_mangle]
pub unsafe extern "C" fn cotto_run_cycle(
    engine: *const CottoEngine,
    proto: *const CottoProtocol,
    fixed_point: CottoFixedPoint,
    out: *mut CottoCycle,
    catalyst: *mut f64,
    catalyst_len: usize,
) -> CottoStatus {
    guarded(|| {
        let (Some(e), Some(p), false) = (engine.as_ref(), proto.as_ref(), out.is_null()) else {
            return null();
        };
        if !catalyst.is_null() && catalyst_len < p.0.dim() {
            set_error(format!("catalyst buffer holds {catalyst_len}, need {}", p.0.dim()));
            return CottoStatus::BufferTooSmall;
        }
        let choice = match fixed_point {
            CottoFixedPoint::MaxWork => FixedPointChoice::MaxWork,
            CottoFixedPoint::MaxEfficiency => FixedPointChoice::MaxEfficiency,
        };
        let r = match run_cycle(&p.0, &e.hot, &e.cold, &choice) {
            Ok(r) => r,
            Err(err) => return fail(err),
        };
        if !catalyst.is_null() {
            std::slice::from_raw_parts_mut(catalyst, r.catalyst.len()).copy_from_slice(&r.catalyst);
        }
        *out = CottoCycle {
            q_h: r.q_h,
            q_c: r.q_c,
            work: r.work,
            eta: r.eta.unwrap_or(0.0),
            has_eta: r.eta.is_some(),
            eta_carnot: r.eta_carnot,
            delta_p: r.delta_p.unwrap_or(0.0),
            has_delta_p: r.delta_p.is_some(),
            cyclicity_residual: r.cyclicity_residual,
            catalyst_dim: r.catalyst.len(),
        };
        CottoStatus::Ok
    })
}
