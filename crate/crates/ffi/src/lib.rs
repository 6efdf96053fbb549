//! C ABI for the releff two-sample rank-effect library.
//!
//! The interface follows the usual opaque-handle pattern: build
//! [`ReleffSample`] handles from raw arrays, run effect or inference
//! functions into caller-provided out structs, and free the handles. Every
//! function returns a [`ReleffStatus`]; on failure a human-readable message
//! is retrievable with [`releff_last_error_message`]. Extended effect values
//! carry an explicit state instead of abusing IEEE specials, so `1/0` (plus
//! infinity) and `0/0` (undefined) survive the language boundary intact.
//!
//! The generated header lives at `include/releff.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use releff::effects::{
    binary_effects_f64, count_pairs_fast, effects_from_counts, EffectEstimates, Extended,
};
use releff::inference::{brunner_munzel, ci_lambda_so, ci_lambda_wr_bootstrap, ci_theta_logit};
use releff::sample::Sample;
use releff::value::{OrderedValue, Scale};
use releff::Error;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

/// Status code of every C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReleffStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument violated a precondition (range, size, config).
    InvalidArgument = 3,
    /// The two samples live on incompatible scales.
    ScaleMismatch = 4,
    /// An estimation routine received an empty sample.
    EmptySample = 5,
    /// Inference needs at least two observations per sample.
    SampleTooSmall = 6,
    /// The requested statistic is degenerate (zero variance, 0/0).
    Degenerate = 7,
}

fn status_of(e: &Error) -> ReleffStatus {
    match e {
        Error::ScaleMismatch { .. } => ReleffStatus::ScaleMismatch,
        Error::EmptySample(_) => ReleffStatus::EmptySample,
        Error::SampleTooSmall { .. } => ReleffStatus::SampleTooSmall,
        Error::Degenerate(_) => ReleffStatus::Degenerate,
        _ => ReleffStatus::InvalidArgument,
    }
}

fn fail(e: &Error) -> ReleffStatus {
    set_last_error(&e.to_string());
    status_of(e)
}

/// State of an extended (possibly infinite or undefined) effect value.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReleffExtendedState {
    Finite = 0,
    PlusInfinity = 1,
    Undefined = 2,
}

/// An extended effect value; `value` is meaningful only in the finite state.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ReleffExtended {
    pub state: ReleffExtendedState,
    pub value: f64,
}

impl ReleffExtended {
    fn from_extended(e: &Extended) -> Self {
        match e {
            Extended::Finite(_) => {
                ReleffExtended { state: ReleffExtendedState::Finite, value: e.to_f64() }
            }
            Extended::PlusInfinity => {
                ReleffExtended { state: ReleffExtendedState::PlusInfinity, value: f64::INFINITY }
            }
            Extended::Undefined => {
                ReleffExtended { state: ReleffExtendedState::Undefined, value: f64::NAN }
            }
        }
    }
}

/// Pair counts and the derived effect estimates.
///
/// For binary comparisons the counts are zero and `lambda_wr` equals the
/// classical odds ratio.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ReleffEffects {
    pub wins: u64,
    pub ties: u64,
    pub losses: u64,
    pub n_pairs: u64,
    pub p_plus: f64,
    pub p_zero: f64,
    pub p_minus: f64,
    pub theta: f64,
    pub lambda_so: ReleffExtended,
    pub lambda_wr: ReleffExtended,
}

fn effects_out(e: &EffectEstimates, counts: Option<(u64, u64, u64)>) -> ReleffEffects {
    let (wins, ties, losses) = counts.unwrap_or((0, 0, 0));
    ReleffEffects {
        wins,
        ties,
        losses,
        n_pairs: wins + ties + losses,
        p_plus: e.p_plus_f64(),
        p_zero: e.p_zero_f64(),
        p_minus: e.p_minus_f64(),
        theta: e.theta_f64(),
        lambda_so: ReleffExtended::from_extended(&e.lambda_so),
        lambda_wr: ReleffExtended::from_extended(&e.lambda_wr),
    }
}

/// Brunner-Munzel test result. When `degenerate` is non-zero the statistic,
/// degrees of freedom and p-value are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ReleffTestResult {
    pub theta_hat: f64,
    pub variance: f64,
    pub df: f64,
    pub statistic: f64,
    pub p_value: f64,
    pub degenerate: u8,
}

/// A two-sided confidence interval; `upper` may be positive infinity.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ReleffInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

/// An immutable sample of exactly ordered outcomes (opaque).
pub struct ReleffSample {
    inner: Sample,
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn releff_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent error on this thread, as a NUL-terminated
/// string. Valid until the next failing call on the same thread; do not
/// free.
#[no_mangle]
pub extern "C" fn releff_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn read_label(label: *const c_char) -> Result<String, ReleffStatus> {
    if label.is_null() {
        set_last_error("label pointer is null");
        return Err(ReleffStatus::NullPointer);
    }
    match CStr::from_ptr(label).to_str() {
        Ok(s) => Ok(s.to_string()),
        Err(_) => {
            set_last_error("label is not valid UTF-8");
            Err(ReleffStatus::InvalidUtf8)
        }
    }
}

/// Creates a numeric sample from fixed-point mantissas.
///
/// Each value is `mantissas[i] * 10^(-decimals)`; `decimals` must be at most
/// 9 and mantissas at most 10^15 in magnitude, so ties are exact.
///
/// # Safety
///
/// `label` must be a valid NUL-terminated string, `mantissas` must point to
/// `len` readable values, and `out` must be a valid destination pointer. On
/// success the caller owns the handle and must release it with
/// [`releff_sample_free`].
#[no_mangle]
pub unsafe extern "C" fn releff_sample_numeric(
    label: *const c_char,
    mantissas: *const i64,
    len: usize,
    decimals: u8,
    out: *mut *mut ReleffSample,
) -> ReleffStatus {
    if out.is_null() || (mantissas.is_null() && len > 0) {
        set_last_error("null pointer argument");
        return ReleffStatus::NullPointer;
    }
    let label = match read_label(label) {
        Ok(l) => l,
        Err(status) => return status,
    };
    let scale = match Scale::numeric(decimals) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let values = if len == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(mantissas, len).iter().map(|m| OrderedValue::new(*m)).collect()
    };
    match Sample::new(label, scale, values) {
        Ok(sample) => {
            *out = Box::into_raw(Box::new(ReleffSample { inner: sample }));
            ReleffStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Creates an ordinal sample from 0-based category indices.
///
/// `categories` lists the `n_categories` category names in rank order;
/// `indices[i]` selects the category of observation `i`.
///
/// # Safety
///
/// All pointers must be valid for their stated lengths and every category
/// name must be a NUL-terminated string. On success the caller owns the
/// handle and must release it with [`releff_sample_free`].
#[no_mangle]
pub unsafe extern "C" fn releff_sample_ordinal(
    label: *const c_char,
    categories: *const *const c_char,
    n_categories: usize,
    indices: *const u32,
    len: usize,
    out: *mut *mut ReleffSample,
) -> ReleffStatus {
    if out.is_null() || categories.is_null() || (indices.is_null() && len > 0) {
        set_last_error("null pointer argument");
        return ReleffStatus::NullPointer;
    }
    let label = match read_label(label) {
        Ok(l) => l,
        Err(status) => return status,
    };
    let mut names = Vec::with_capacity(n_categories);
    for i in 0..n_categories {
        let ptr = *categories.add(i);
        match read_label(ptr) {
            Ok(name) => names.push(name),
            Err(status) => return status,
        }
    }
    let scale = match Scale::ordinal(names) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let values = if len == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(indices, len).iter().map(|i| OrderedValue::new(*i as i64)).collect()
    };
    match Sample::new(label, scale, values) {
        Ok(sample) => {
            *out = Box::into_raw(Box::new(ReleffSample { inner: sample }));
            ReleffStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Number of observations in a sample; 0 for a null handle.
///
/// # Safety
///
/// `sample` must be null or a live handle from a `releff_sample_*`
/// constructor.
#[no_mangle]
pub unsafe extern "C" fn releff_sample_len(sample: *const ReleffSample) -> usize {
    if sample.is_null() {
        0
    } else {
        (*sample).inner.len()
    }
}

/// Releases a sample handle; null is a no-op.
///
/// # Safety
///
/// `sample` must be null or a live handle that is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn releff_sample_free(sample: *mut ReleffSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

unsafe fn two_samples<'a>(
    a: *const ReleffSample,
    b: *const ReleffSample,
) -> Result<(&'a Sample, &'a Sample), ReleffStatus> {
    if a.is_null() || b.is_null() {
        set_last_error("sample handle is null");
        return Err(ReleffStatus::NullPointer);
    }
    Ok((&(*a).inner, &(*b).inner))
}

/// Computes pair counts and all effect estimates of `a` versus `b`.
///
/// # Safety
///
/// `a` and `b` must be live sample handles and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn releff_effects(
    a: *const ReleffSample,
    b: *const ReleffSample,
    out: *mut ReleffEffects,
) -> ReleffStatus {
    if out.is_null() {
        set_last_error("out pointer is null");
        return ReleffStatus::NullPointer;
    }
    let (a, b) = match two_samples(a, b) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    let counts = match count_pairs_fast(a, b) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match effects_from_counts(&counts) {
        Ok(e) => {
            *out = effects_out(&e, Some((counts.wins, counts.ties, counts.losses)));
            ReleffStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Effects for dichotomous outcomes with success rates `q_a` and `q_b` in
/// `[0, 1]`. `lambda_wr` equals the classical odds ratio.
///
/// # Safety
///
/// `out` must be a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn releff_binary_effects(
    q_a: f64,
    q_b: f64,
    out: *mut ReleffEffects,
) -> ReleffStatus {
    if out.is_null() {
        set_last_error("out pointer is null");
        return ReleffStatus::NullPointer;
    }
    match binary_effects_f64(q_a, q_b) {
        Ok(e) => {
            *out = effects_out(&e, None);
            ReleffStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Brunner-Munzel test of even treatment effect (theta = 1/2).
///
/// Returns `Ok` with `degenerate = 1` (and NaN statistic fields) when the
/// variance estimate collapses; both samples need at least two
/// observations.
///
/// # Safety
///
/// `a` and `b` must be live sample handles and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn releff_brunner_munzel(
    a: *const ReleffSample,
    b: *const ReleffSample,
    out: *mut ReleffTestResult,
) -> ReleffStatus {
    if out.is_null() {
        set_last_error("out pointer is null");
        return ReleffStatus::NullPointer;
    }
    let (a, b) = match two_samples(a, b) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    match brunner_munzel(a, b) {
        Ok(t) => {
            *out = ReleffTestResult {
                theta_hat: t.theta_hat,
                variance: t.variance_hat,
                df: t.df.unwrap_or(f64::NAN),
                statistic: t.statistic.unwrap_or(f64::NAN),
                p_value: t.p_value.unwrap_or(f64::NAN),
                degenerate: u8::from(t.degenerate.is_some()),
            };
            ReleffStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

unsafe fn interval_call(
    out: *mut ReleffInterval,
    compute: impl FnOnce() -> releff::Result<releff::ConfidenceInterval>,
) -> ReleffStatus {
    if out.is_null() {
        set_last_error("out pointer is null");
        return ReleffStatus::NullPointer;
    }
    match compute() {
        Ok(ci) => {
            *out = ReleffInterval { lower: ci.lower, upper: ci.upper, level: ci.level };
            ReleffStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Range-preserving logit confidence interval for theta at `level` in
/// (0, 1); bounds are strictly inside (0, 1).
///
/// # Safety
///
/// `a` and `b` must be live sample handles and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn releff_ci_theta_logit(
    a: *const ReleffSample,
    b: *const ReleffSample,
    level: f64,
    out: *mut ReleffInterval,
) -> ReleffStatus {
    let (a, b) = match two_samples(a, b) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    interval_call(out, || ci_theta_logit(a, b, level))
}

/// Confidence interval for the success odds (exp of the logit-scale theta
/// bounds).
///
/// # Safety
///
/// `a` and `b` must be live sample handles and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn releff_ci_lambda_so(
    a: *const ReleffSample,
    b: *const ReleffSample,
    level: f64,
    out: *mut ReleffInterval,
) -> ReleffStatus {
    let (a, b) = match two_samples(a, b) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    interval_call(out, || ci_lambda_so(a, b, level))
}

/// Seeded percentile-bootstrap confidence interval for the win ratio;
/// `reps >= 100`. The same seed always yields the same interval; the upper
/// bound may be positive infinity.
///
/// # Safety
///
/// `a` and `b` must be live sample handles and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn releff_ci_lambda_wr_bootstrap(
    a: *const ReleffSample,
    b: *const ReleffSample,
    level: f64,
    reps: u32,
    seed: u64,
    out: *mut ReleffInterval,
) -> ReleffStatus {
    let (a, b) = match two_samples(a, b) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    interval_call(out, || ci_lambda_wr_bootstrap(a, b, level, reps, seed))
}
