//! C ABI over `locmom`.
//!
//! Every fallible call returns an [`LmStatus`]; on anything but
//! `LM_STATUS_OK` a message is available from [`lm_last_error`] on the
//! same thread. Handles are opaque and must be released with the matching
//! `_free` function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use locmom::moments::check_stieltjes;
use locmom::solvers::{self, RangeKind, RangeShape};
use locmom::{DiscreteMeasure, Error, LocalProblem, MomentSequence, ParameterRange, SolvabilityReport};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LmStatus {
    Ok = 0,
    /// Malformed input: bad sequence, non-positive Λ or tolerance, wrong lengths.
    InvalidArgument = 1,
    /// Well-formed but not solvable.
    Unsolvable = 2,
    /// Parameter outside the admissible range.
    OutOfRange = 3,
    /// Singular or boundary configuration (pole, degenerate system, atom on the gap edge).
    Degenerate = 4,
    /// Internal failure, including caught panics.
    Internal = 5,
    NullPointer = 6,
}

/// Opaque moment sequence.
pub struct LmMoments(MomentSequence);

/// Opaque discrete measure.
pub struct LmMeasure(DiscreteMeasure);

pub const LM_RANGE_TAU: i32 = 0;
pub const LM_RANGE_ALPHA: i32 = 1;
pub const LM_SHAPE_EMPTY: i32 = 0;
pub const LM_SHAPE_SEGMENT: i32 = 1;
/// Complement of `(hi, lo)`: the parameter set is `(−∞, lo] ∪ [hi, ∞)`.
pub const LM_SHAPE_EXTERIOR: i32 = 2;

/// Admissible parameter set. Infinite bounds are IEEE infinities.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LmRange {
    pub kind: i32,
    pub shape: i32,
    pub lo: f64,
    pub hi: f64,
    pub unique: bool,
}

impl From<&ParameterRange> for LmRange {
    fn from(r: &ParameterRange) -> Self {
        LmRange {
            kind: match r.kind {
                RangeKind::Tau => LM_RANGE_TAU,
                RangeKind::Alpha => LM_RANGE_ALPHA,
            },
            shape: match r.shape {
                RangeShape::Empty => LM_SHAPE_EMPTY,
                RangeShape::Segment => LM_SHAPE_SEGMENT,
                RangeShape::Exterior => LM_SHAPE_EXTERIOR,
            },
            lo: r.lo,
            hi: r.hi,
            unique: r.unique,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LmStatus {
    match e {
        Error::InvalidSequence(_)
        | Error::InvalidArgument(_)
        | Error::IndexOutOfRange { .. }
        | Error::NotSymmetric(_) => LmStatus::InvalidArgument,
        Error::Unsolvable { .. } => LmStatus::Unsolvable,
        Error::OutOfRange { .. } => LmStatus::OutOfRange,
        Error::Degenerate { .. } | Error::Singular(_) | Error::Pole { .. } | Error::Boundary(_) => LmStatus::Degenerate,
        Error::ConventionsMismatch { .. } => LmStatus::Internal,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (LmStatus, String)>) -> LmStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LmStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LmStatus::Internal
        }
    }
}

fn lib<T>(r: locmom::Result<T>) -> Result<T, (LmStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (LmStatus, String)> {
    p.as_ref().ok_or((LmStatus::NullPointer, "null pointer argument".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, (LmStatus, String)> {
    p.as_mut().ok_or((LmStatus::NullPointer, "null output pointer".into()))
}

/// Last error message on this thread; empty after a successful call.
/// The pointer stays valid until the next `lm_*` call on the same thread.
#[no_mangle]
pub extern "C" fn lm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies `len` values into a new moment sequence. `len` must be odd.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out_moments` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lm_moments_new(values: *const f64, len: usize, out_moments: *mut *mut LmMoments) -> LmStatus {
    guard(|| {
        let slot = out(out_moments)?;
        *slot = ptr::null_mut();
        if values.is_null() {
            return Err((LmStatus::NullPointer, "null values".into()));
        }
        let v = std::slice::from_raw_parts(values, len).to_vec();
        let seq = lib(MomentSequence::new(v))?;
        *slot = Box::into_raw(Box::new(LmMoments(seq)));
        Ok(())
    })
}

/// # Safety
/// `m` must come from [`lm_moments_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lm_moments_free(m: *mut LmMoments) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of stored moments, or 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lm_moments_len(m: *const LmMoments) -> usize {
    m.as_ref().map_or(0, |m| m.0.len())
}

/// Stieltjes solvability. An unsolvable sequence is not an error: the call
/// returns `Ok`, sets `*solvable = false` and leaves the failing condition
/// names in [`lm_last_error`].
///
/// # Safety
/// `m` must be a live handle and `solvable` writable.
#[no_mangle]
pub unsafe extern "C" fn lm_check_stieltjes(m: *const LmMoments, tol: f64, solvable: *mut bool) -> LmStatus {
    let mut report = None;
    let status = guard(|| {
        let (m, s) = (deref(m)?, out(solvable)?);
        check_tol(tol)?;
        *s = false;
        report = Some(check_stieltjes(&m.0, tol));
        Ok(())
    });
    finish_check(status, report, solvable)
}

/// Hausdorff solvability on `[0, lambda]`; see [`lm_check_stieltjes`].
///
/// # Safety
/// `m` must be a live handle and `solvable` writable.
#[no_mangle]
pub unsafe extern "C" fn lm_check_hausdorff(m: *const LmMoments, lambda: f64, tol: f64, solvable: *mut bool) -> LmStatus {
    let mut report = None;
    let status = guard(|| {
        let (m, s) = (deref(m)?, out(solvable)?);
        check_tol(tol)?;
        *s = false;
        report = Some(lib(solvers::hausdorff_solvability(&m.0, lambda, tol))?);
        Ok(())
    });
    finish_check(status, report, solvable)
}

/// Solvability with gap `(0, lambda)`; see [`lm_check_stieltjes`].
///
/// # Safety
/// `m` must be a live handle and `solvable` writable.
#[no_mangle]
pub unsafe extern "C" fn lm_check_gap(m: *const LmMoments, lambda: f64, tol: f64, solvable: *mut bool) -> LmStatus {
    let mut report = None;
    let status = guard(|| {
        let (m, s) = (deref(m)?, out(solvable)?);
        check_tol(tol)?;
        *s = false;
        report = Some(lib(solvers::gap_solvability(&m.0, lambda, tol))?);
        Ok(())
    });
    finish_check(status, report, solvable)
}

unsafe fn finish_check(status: LmStatus, report: Option<SolvabilityReport>, solvable: *mut bool) -> LmStatus {
    if let (LmStatus::Ok, Some(r)) = (status, report) {
        *solvable = r.verdict();
        if !r.verdict() {
            set_error(&format!("failing condition {}", r.failing().join(", ")));
        }
    }
    status
}

fn check_tol(tol: f64) -> Result<(), (LmStatus, String)> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err((LmStatus::InvalidArgument, format!("tolerance must be positive, got {tol}")))
    }
}

/// Admissible τ for the Hausdorff problem. An empty range is reported
/// through `shape`, not as an error.
///
/// # Safety
/// `m` must be a live handle and `range` writable.
#[no_mangle]
pub unsafe extern "C" fn lm_tau_range(m: *const LmMoments, lambda: f64, tol: f64, range: *mut LmRange) -> LmStatus {
    guard(|| {
        let (m, r) = (deref(m)?, out(range)?);
        check_tol(tol)?;
        *r = (&lib(solvers::tau_range_hausdorff(&m.0, lambda, tol))?).into();
        Ok(())
    })
}

/// Admissible α for the gap problem.
///
/// # Safety
/// `m` must be a live handle and `range` writable.
#[no_mangle]
pub unsafe extern "C" fn lm_alpha_range(m: *const LmMoments, lambda: f64, tol: f64, range: *mut LmRange) -> LmStatus {
    guard(|| {
        let (m, r) = (deref(m)?, out(range)?);
        check_tol(tol)?;
        *r = (&lib(solvers::alpha_range(&m.0, lambda, tol))?).into();
        Ok(())
    })
}

unsafe fn solve(
    out_measure: *mut *mut LmMeasure,
    tol: f64,
    f: impl FnOnce() -> Result<DiscreteMeasure, (LmStatus, String)>,
) -> LmStatus {
    guard(|| {
        let slot = out(out_measure)?;
        *slot = ptr::null_mut();
        check_tol(tol)?;
        *slot = Box::into_raw(Box::new(LmMeasure(f()?)));
        Ok(())
    })
}

/// Canonical Stieltjes solution at `tau ≥ 0`.
///
/// # Safety
/// `m` must be a live handle and `out_measure` writable.
#[no_mangle]
pub unsafe extern "C" fn lm_solve_stieltjes(
    m: *const LmMoments,
    tau: f64,
    tol: f64,
    out_measure: *mut *mut LmMeasure,
) -> LmStatus {
    solve(out_measure, tol, || lib(solvers::solve_stieltjes(&deref(m)?.0, tau, tol)))
}

/// Canonical Hausdorff solution on `[0, lambda]` at `tau`.
///
/// # Safety
/// `m` must be a live handle and `out_measure` writable.
#[no_mangle]
pub unsafe extern "C" fn lm_solve_hausdorff(
    m: *const LmMoments,
    lambda: f64,
    tau: f64,
    tol: f64,
    out_measure: *mut *mut LmMeasure,
) -> LmStatus {
    solve(out_measure, tol, || lib(solvers::solve_hausdorff(&deref(m)?.0, lambda, tau, tol)))
}

/// Canonical gap solution at `alpha`.
///
/// # Safety
/// `m` must be a live handle and `out_measure` writable.
#[no_mangle]
pub unsafe extern "C" fn lm_solve_gap(
    m: *const LmMoments,
    lambda: f64,
    alpha: f64,
    tol: f64,
    out_measure: *mut *mut LmMeasure,
) -> LmStatus {
    solve(out_measure, tol, || lib(solvers::solve_gap(&deref(m)?.0, lambda, alpha, tol)))
}

/// Local problem: global moments `a` on ℝ, window moments `b` on `[0, lambda]`.
///
/// # Safety
/// `a`, `b` must be live handles and `out_measure` writable.
#[no_mangle]
pub unsafe extern "C" fn lm_solve_local(
    a: *const LmMoments,
    b: *const LmMoments,
    lambda: f64,
    tau: f64,
    alpha: f64,
    tol: f64,
    out_measure: *mut *mut LmMeasure,
) -> LmStatus {
    solve(out_measure, tol, || {
        let p = lib(LocalProblem::new(deref(a)?.0.clone(), deref(b)?.0.clone(), lambda))?;
        lib(solvers::solve_local(&p, tau, alpha, tol))
    })
}

/// Number of atoms, or 0 for null.
///
/// # Safety
/// `mu` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lm_measure_len(mu: *const LmMeasure) -> usize {
    mu.as_ref().map_or(0, |m| m.0.len())
}

/// Copies atoms and masses (ascending atoms) into caller buffers of
/// capacity `cap`. Fails with `InvalidArgument` if `cap` is too small.
/// Either buffer may be null to skip it.
///
/// # Safety
/// Non-null buffers must hold `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lm_measure_copy(mu: *const LmMeasure, atoms: *mut f64, masses: *mut f64, cap: usize) -> LmStatus {
    guard(|| {
        let mu = &deref(mu)?.0;
        if cap < mu.len() {
            return Err((
                LmStatus::InvalidArgument,
                format!("buffer holds {cap} values, measure has {}", mu.len()),
            ));
        }
        if !atoms.is_null() {
            std::slice::from_raw_parts_mut(atoms, mu.len()).copy_from_slice(mu.atoms());
        }
        if !masses.is_null() {
            std::slice::from_raw_parts_mut(masses, mu.len()).copy_from_slice(mu.masses());
        }
        Ok(())
    })
}

/// # Safety
/// `mu` must come from an `lm_solve_*` call and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lm_measure_free(mu: *mut LmMeasure) {
    if !mu.is_null() {
        drop(Box::from_raw(mu));
    }
}
