//! C ABI over `whmc-core`.
//!
//! Objects cross the boundary as opaque heap handles created by `*_new`
//! and released by the matching `*_free`. Every fallible call returns a
//! [`WhmcStatus`] and writes its result through an out-pointer; on failure
//! a message is available from [`whmc_last_error`] on the same thread.
//! Panics are caught at the boundary and reported as `WHMC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use whmc_core::engine::GridSpec;
use whmc_core::estimators::{mc_estimate_with, Functional};
use whmc_core::levy::{eval_psi_shifted, BetaFamilyParams, LevyModel, WhFactorSampler};
use whmc_core::rng::{tagged_stream, StreamPlan};
use whmc_core::WhmcError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhmcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    Contract = 4,
    RootBracket = 5,
    NonFinite = 6,
    Config = 7,
    Io = 8,
    Panic = 9,
}

impl From<&WhmcError> for WhmcStatus {
    fn from(e: &WhmcError) -> Self {
        match e {
            WhmcError::Parameter(_) => WhmcStatus::InvalidParameter,
            WhmcError::Domain(_) => WhmcStatus::Domain,
            WhmcError::Contract(_) => WhmcStatus::Contract,
            WhmcError::RootBracket { .. } => WhmcStatus::RootBracket,
            WhmcError::NonFinite { .. } => WhmcStatus::NonFinite,
            WhmcError::Config { .. } => WhmcStatus::Config,
            WhmcError::Io(_) => WhmcStatus::Io,
        }
    }
}

/// β-family parameters; side 1 is positive jumps, side 2 negative jumps.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct WhmcBetaParams {
    pub c1: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub lambda1: f64,
    pub c2: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub lambda2: f64,
    pub sigma: f64,
    pub a: f64,
}

impl From<WhmcBetaParams> for BetaFamilyParams {
    fn from(p: WhmcBetaParams) -> Self {
        BetaFamilyParams {
            c1: p.c1,
            alpha1: p.alpha1,
            beta1: p.beta1,
            lambda1: p.lambda1,
            c2: p.c2,
            alpha2: p.alpha2,
            beta2: p.beta2,
            lambda2: p.lambda2,
            sigma: p.sigma,
            a: p.a,
        }
    }
}

/// Functional selector for [`whmc_mc_estimate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhmcFunctionalKind {
    /// `τ_u ∧ t`; parameters unused.
    FirstPassageTime = 0,
    /// `1{τ_u ≤ s}` with `s = param1`.
    IndicatorCdf = 1,
    /// `e^{-q τ_u} 1{overshoot ≤ y}` with `q = param1`, `y = param2`.
    DiscountedOvershootIndicator = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WhmcEstimate {
    pub value: f64,
    pub std_error: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub samples: u64,
    pub steps_consumed: u64,
}

/// Opaque Lévy model handle.
pub struct WhmcModel(LevyModel);

/// Opaque Wiener-Hopf factor sampler handle.
pub struct WhmcSampler(WhFactorSampler);

/// Opaque random stream handle.
pub struct WhmcRng(whmc_core::rng::WhmcRng);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), WhmcStatus>) -> WhmcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WhmcStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("panic inside whmc".into());
            WhmcStatus::Panic
        }
    }
}

fn fail(e: WhmcError) -> WhmcStatus {
    let status = WhmcStatus::from(&e);
    set_last_error(e.to_string());
    status
}

fn null(what: &str) -> WhmcStatus {
    set_last_error(format!("null pointer: {what}"));
    WhmcStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, WhmcStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), WhmcStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn whmc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a Brownian motion `drift·t + volatility·W_t`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn whmc_model_new_brownian(
    drift: f64,
    volatility: f64,
    out: *mut *mut WhmcModel,
) -> WhmcStatus {
    guard(|| {
        let m = LevyModel::brownian(drift, volatility).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(WhmcModel(m))))
    })
}

/// Creates a β-family model.
///
/// # Safety
/// `params` must point to a readable `WhmcBetaParams`; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn whmc_model_new_beta(
    params: *const WhmcBetaParams,
    out: *mut *mut WhmcModel,
) -> WhmcStatus {
    guard(|| {
        let p = *deref(params, "params")?;
        let m = LevyModel::beta_family(p.into()).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(WhmcModel(m))))
    })
}

/// # Safety
/// `model` must be NULL or a handle from `whmc_model_new_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn whmc_model_free(model: *mut WhmcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Evaluates `q + Ψ(iζ)`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn whmc_eval_psi_shifted(
    model: *const WhmcModel,
    q: f64,
    zeta: f64,
    out: *mut f64,
) -> WhmcStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let v = eval_psi_shifted(&m.0, q, zeta).map_err(fail)?;
        write_out(out, v)
    })
}

/// Builds samplers for `X̄_{e(q)}` and `X̲_{e(q)}`, keeping `truncation_n`
/// factors per side for the β-family (ignored for Brownian motion).
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn whmc_sampler_new(
    model: *const WhmcModel,
    q: f64,
    truncation_n: usize,
    out: *mut *mut WhmcSampler,
) -> WhmcStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let s = WhFactorSampler::new(&m.0, q, truncation_n).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(WhmcSampler(s))))
    })
}

/// # Safety
/// `sampler` must be NULL or a live handle from `whmc_sampler_new`.
#[no_mangle]
pub unsafe extern "C" fn whmc_sampler_free(sampler: *mut WhmcSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}

/// Upper bound on the mean-square error caused by truncating the factors.
///
/// # Safety
/// `sampler` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn whmc_sampler_truncation_bound(
    sampler: *const WhmcSampler,
    out: *mut f64,
) -> WhmcStatus {
    guard(|| {
        let s = deref(sampler, "sampler")?;
        write_out(out, s.0.truncation_error_bound())
    })
}

/// Random stream `stream` of master seed `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn whmc_rng_new(
    seed: u64,
    stream: u32,
    out: *mut *mut WhmcRng,
) -> WhmcStatus {
    guard(|| {
        write_out(
            out,
            Box::into_raw(Box::new(WhmcRng(tagged_stream(seed, 0, stream)))),
        )
    })
}

/// # Safety
/// `rng` must be NULL or a live handle from `whmc_rng_new`.
#[no_mangle]
pub unsafe extern "C" fn whmc_rng_free(rng: *mut WhmcRng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

/// Fills `out[0..len]` with draws of the supremum factor (`>= 0`).
///
/// # Safety
/// `sampler` and `rng` must be live handles; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn whmc_sample_sup(
    sampler: *const WhmcSampler,
    rng: *mut WhmcRng,
    out: *mut f64,
    len: usize,
) -> WhmcStatus {
    guard(|| {
        let s = deref(sampler, "sampler")?;
        let r = rng.as_mut().ok_or_else(|| null("rng"))?;
        if out.is_null() && len > 0 {
            return Err(null("out"));
        }
        for i in 0..len {
            out.add(i).write(s.0.sample_sup(&mut r.0));
        }
        Ok(())
    })
}

/// Fills `out[0..len]` with draws of the infimum factor (`<= 0`).
///
/// # Safety
/// As for [`whmc_sample_sup`].
#[no_mangle]
pub unsafe extern "C" fn whmc_sample_inf(
    sampler: *const WhmcSampler,
    rng: *mut WhmcRng,
    out: *mut f64,
    len: usize,
) -> WhmcStatus {
    guard(|| {
        let s = deref(sampler, "sampler")?;
        let r = rng.as_mut().ok_or_else(|| null("rng"))?;
        if out.is_null() && len > 0 {
            return Err(null("out"));
        }
        for i in 0..len {
            out.add(i).write(s.0.sample_inf(&mut r.0));
        }
        Ok(())
    })
}

/// WHMC estimate of `E[f]` with `n` steps over `[0, t]`, `m` trials and
/// `workers` random substreams of `seed`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn whmc_mc_estimate(
    model: *const WhmcModel,
    kind: WhmcFunctionalKind,
    param1: f64,
    param2: f64,
    u: f64,
    t: f64,
    n: usize,
    m: u64,
    truncation_n: usize,
    seed: u64,
    workers: usize,
    out: *mut WhmcEstimate,
) -> WhmcStatus {
    guard(|| {
        let model = deref(model, "model")?;
        let functional = match kind {
            WhmcFunctionalKind::FirstPassageTime => Functional::FirstPassageTime,
            WhmcFunctionalKind::IndicatorCdf => Functional::IndicatorCdf { s: param1 },
            WhmcFunctionalKind::DiscountedOvershootIndicator => {
                Functional::DiscountedOvershootIndicator {
                    q: param1,
                    y: param2,
                }
            }
        };
        let grid = GridSpec::new(n, t).map_err(fail)?;
        let sampler = WhFactorSampler::new(&model.0, grid.lambda(), truncation_n).map_err(fail)?;
        let plan = StreamPlan::new(seed, workers);
        let r = mc_estimate_with(&sampler, &functional, u, &grid, m, &plan, 0).map_err(fail)?;
        write_out(
            out,
            WhmcEstimate {
                value: r.value,
                std_error: r.std_error,
                ci95_low: r.ci95.0,
                ci95_high: r.ci95.1,
                samples: r.samples.iter().sum(),
                steps_consumed: r.steps_consumed,
            },
        )
    })
}
