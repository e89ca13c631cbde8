//! C interface to `bivbeta`.
//!
//! Every fallible function returns a [`BbStatus`]; on failure a message is
//! kept per thread and can be copied out with [`bb_last_error`]. Results
//! are written through out-pointers, which must be valid and non-null.
//! Handles are created by `*_new` and released by the matching `*_free`.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bivbeta::{
    appell_f1, correlation, fit_moments, hyp2f1, ln_gamma, mixed_moment, moment_vector, pdf,
    sample_bivariate, AlphaBivariate, Error, FitOptions, MomentVector, RandomStream,
};

/// Status codes. Values match the exit codes of the `bivbeta` tool where
/// they overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    InfeasibleMoments = 4,
    NonConvergence = 5,
    Panic = 6,
}

/// Opaque parameter set `(a11, a10, a01, a00)`.
pub struct BbDistribution {
    alpha: AlphaBivariate,
}

/// Opaque seeded random stream.
pub struct BbStream {
    inner: RandomStream,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> BbStatus {
    match e {
        Error::Domain(_) | Error::DegenerateData(_) => BbStatus::Domain,
        Error::InfeasibleMoments(_) => BbStatus::InfeasibleMoments,
        Error::Convergence { .. } => BbStatus::NonConvergence,
    }
}

fn guard(f: impl FnOnce() -> Result<(), BbStatus>) -> BbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BbStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            BbStatus::Panic
        }
    }
}

fn lib<T>(r: bivbeta::Result<T>) -> Result<T, BbStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_error(e.to_string());
        s
    })
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), BbStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        Err(BbStatus::NullPointer)
    } else {
        Ok(())
    }
}

/// Copies the last error message of this thread, NUL-terminated and
/// truncated to `len` bytes, into `buf`. Returns the full message length
/// (excluding the terminator).
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn bb_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bb_distribution_new(
    a11: f64,
    a10: f64,
    a01: f64,
    a00: f64,
    out: *mut *mut BbDistribution,
) -> BbStatus {
    guard(|| {
        non_null(out, "out")?;
        let alpha = lib(AlphaBivariate::new(a11, a10, a01, a00))?;
        *out = Box::into_raw(Box::new(BbDistribution { alpha }));
        Ok(())
    })
}

/// # Safety
/// `dist` must come from [`bb_distribution_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bb_distribution_free(dist: *mut BbDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Density at `(x, y)`. A divergent density is reported as `+inf`.
///
/// # Safety
/// `dist` must be a live handle; `value` valid; `error_estimate` null or valid.
#[no_mangle]
pub unsafe extern "C" fn bb_pdf(
    dist: *const BbDistribution,
    x: f64,
    y: f64,
    tol: f64,
    value: *mut f64,
    error_estimate: *mut f64,
) -> BbStatus {
    guard(|| {
        non_null(dist, "dist")?;
        non_null(value, "value")?;
        let d = lib(pdf(&(*dist).alpha, x, y, tol))?;
        *value = d.value;
        if !error_estimate.is_null() {
            *error_estimate = d.error_estimate;
        }
        Ok(())
    })
}

/// Writes `m10, m01, m20, m02, m11` to `out[0..5]`.
///
/// # Safety
/// `dist` must be a live handle and `out` point to 5 doubles.
#[no_mangle]
pub unsafe extern "C" fn bb_moments(dist: *const BbDistribution, out: *mut f64) -> BbStatus {
    guard(|| {
        non_null(dist, "dist")?;
        non_null(out, "out")?;
        let m = moment_vector(&(*dist).alpha).to_array();
        ptr::copy_nonoverlapping(m.as_ptr(), out, m.len());
        Ok(())
    })
}

/// # Safety
/// `dist` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bb_correlation(dist: *const BbDistribution, out: *mut f64) -> BbStatus {
    guard(|| {
        non_null(dist, "dist")?;
        non_null(out, "out")?;
        *out = correlation(&(*dist).alpha);
        Ok(())
    })
}

/// Raw moment `E[X^r Y^s]`.
///
/// # Safety
/// `dist` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bb_mixed_moment(
    dist: *const BbDistribution,
    r: u32,
    s: u32,
    out: *mut f64,
) -> BbStatus {
    guard(|| {
        non_null(dist, "dist")?;
        non_null(out, "out")?;
        *out = mixed_moment(&(*dist).alpha, r, s);
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn bb_stream_new(seed: u64) -> *mut BbStream {
    Box::into_raw(Box::new(BbStream {
        inner: RandomStream::new(seed),
    }))
}

/// # Safety
/// `stream` must come from [`bb_stream_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bb_stream_free(stream: *mut BbStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

/// Draws `n` pairs into `xs[0..n]` and `ys[0..n]`, advancing `stream`.
///
/// # Safety
/// Handles must be live; `xs` and `ys` must each hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn bb_sample(
    dist: *const BbDistribution,
    stream: *mut BbStream,
    n: usize,
    xs: *mut f64,
    ys: *mut f64,
) -> BbStatus {
    guard(|| {
        non_null(dist, "dist")?;
        non_null(stream, "stream")?;
        if n == 0 {
            return Ok(());
        }
        non_null(xs, "xs")?;
        non_null(ys, "ys")?;
        let draws = sample_bivariate(&(*dist).alpha, n, &mut (*stream).inner);
        for (i, d) in draws.iter().enumerate() {
            *xs.add(i) = d.x;
            *ys.add(i) = d.y;
        }
        Ok(())
    })
}

/// Moment-matching fit. `moments` holds `m10, m01, m20, m02, m11`; the
/// parameters go to `alpha[0..4]`. A run that stops on its budget still
/// fills the outputs and returns `NonConvergence`.
///
/// # Safety
/// `moments` must hold 5 doubles and `alpha` 4; `objective` null or valid.
#[no_mangle]
pub unsafe extern "C" fn bb_fit_moments(
    moments: *const f64,
    restarts: usize,
    seed: u64,
    alpha: *mut f64,
    objective: *mut f64,
) -> BbStatus {
    guard(|| {
        non_null(moments, "moments")?;
        non_null(alpha, "alpha")?;
        let mut m = [0.0; 5];
        ptr::copy_nonoverlapping(moments, m.as_mut_ptr(), 5);
        let target = lib(MomentVector::from_array(m))?;
        let opts = FitOptions {
            restarts,
            seed,
            ..FitOptions::default()
        };
        let fit = lib(fit_moments(&target, &opts))?;
        let a = fit.alpha_star.to_array();
        ptr::copy_nonoverlapping(a.as_ptr(), alpha, 4);
        if !objective.is_null() {
            *objective = fit.objective_value;
        }
        if fit.converged {
            Ok(())
        } else {
            set_error("fit stopped before reaching the objective tolerance".into());
            Err(BbStatus::NonConvergence)
        }
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_hyp2f1(a: f64, b: f64, c: f64, z: f64, out: *mut f64) -> BbStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(hyp2f1(a, b, c, z))?;
        Ok(())
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_appell_f1(
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    z1: f64,
    z2: f64,
    out: *mut f64,
) -> BbStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(appell_f1(a, b1, b2, c, z1, z2))?;
        Ok(())
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_ln_gamma(x: f64, out: *mut f64) -> BbStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(ln_gamma(x))?;
        Ok(())
    })
}
