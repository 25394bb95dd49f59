//! C ABI over `kummer-core`.
//!
//! Every fallible function returns a [`KummerStatus`]; on anything other than
//! `KUMMER_STATUS_OK` a message is available from
//! [`kummer_last_error_message`] on the same thread. Exact parameters cross
//! the boundary as NUL-terminated strings (`"1/3"`, `"-0.25"`) so no
//! precision is lost. Handles are opaque and must be released with their
//! matching `_free` function. Strings returned as `char *` are owned by the
//! caller and released with [`kummer_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use kummer_core::rational::to_fraction_string;
use kummer_core::{
    certify_family, connection_constants, eval_0f1, eval_1f1, indicial_roots, parse_rational, pochhammer,
    reduce_kummer, solve_frobenius, verify_identity, ClosedFormFamily, Error, EvalMode, EvalResult, FamilyId,
    FrobeniusSolution, IdentityId, IdentityReport, Offset, Rational, Scalar,
};
use num_traits::One;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KummerStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    PoleParameter = 3,
    NoConvergence = 4,
    DomainError = 5,
    InvalidTolerance = 6,
    ResonantDenominator = 7,
    ExcludedParameter = 8,
    ResonantParameter = 9,
    NotIndicialRoot = 10,
    ConnectionMismatch = 11,
    UnsupportedSpec = 12,
    ParseError = 13,
    OutOfRange = 14,
    Panic = 15,
}

impl From<&Error> for KummerStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::PoleParameter { .. } => KummerStatus::PoleParameter,
            Error::NoConvergence { .. } => KummerStatus::NoConvergence,
            Error::DomainError(_) => KummerStatus::DomainError,
            Error::InvalidTolerance(_) => KummerStatus::InvalidTolerance,
            Error::ResonantDenominator { .. } => KummerStatus::ResonantDenominator,
            Error::ExcludedParameter { .. } => KummerStatus::ExcludedParameter,
            Error::ResonantParameter { .. } => KummerStatus::ResonantParameter,
            Error::NotIndicialRoot { .. } => KummerStatus::NotIndicialRoot,
            Error::ConnectionMismatch { .. } => KummerStatus::ConnectionMismatch,
            Error::InvalidArgument(_) => KummerStatus::InvalidArgument,
            Error::UnsupportedSpec(_) => KummerStatus::UnsupportedSpec,
            Error::Parse(_) => KummerStatus::ParseError,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(KummerStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(KummerStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(KummerStatus::NullPointer, format!("{what} is null"))
}

/// Run `f`, translating errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), Failure> + UnwindSafe>(f: F) -> KummerStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            KummerStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            KummerStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(KummerStatus::ParseError, format!("{what} is not valid UTF-8")))
}

unsafe fn read_rational(p: *const c_char, what: &str) -> Result<Rational, Failure> {
    Ok(parse_rational(read_str(p, what)?)?)
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn kummer_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn kummer_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn kummer_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Rising factorial `(x)_n` in double precision.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kummer_pochhammer(x: f64, n: u32, out: *mut f64) -> KummerStatus {
    guard(|| write(out, pochhammer(&x, n), "out"))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerEvalResult {
    pub value: f64,
    pub terms_used: usize,
    pub last_term_magnitude: f64,
    /// True when the sum was carried out in exact arithmetic and rounded.
    pub exact: bool,
}

impl From<EvalResult> for KummerEvalResult {
    fn from(r: EvalResult) -> Self {
        KummerEvalResult {
            value: r.value,
            terms_used: r.terms_used,
            last_term_magnitude: r.last_term_magnitude,
            exact: r.mode == EvalMode::ExactThenRound,
        }
    }
}

/// `₀F₁(; b; x)` summed to relative tolerance `tol`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kummer_eval_0f1(b: f64, x: f64, tol: f64, out: *mut KummerEvalResult) -> KummerStatus {
    guard(|| write(out, eval_0f1(b, x, tol)?.into(), "out"))
}

/// `₁F₁(a; b; x)` summed to relative tolerance `tol`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kummer_eval_1f1(
    a: f64,
    b: f64,
    x: f64,
    tol: f64,
    out: *mut KummerEvalResult,
) -> KummerStatus {
    guard(|| write(out, eval_1f1(a, b, x, tol)?.into(), "out"))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KummerCertification {
    pub certified: bool,
    pub mismatches: usize,
    /// Index of the first differing coefficient, or -1.
    pub first_mismatch: i64,
}

/// Compare a closed-form family against its Frobenius series through
/// order `order`, exactly. `family` is a name such as `"P1-λ0"` or
/// `"p1-l0"`; `a` is an exact rational string.
///
/// # Safety
/// `family` and `a` must be NUL-terminated strings; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kummer_certify_family(
    family: *const c_char,
    a: *const c_char,
    order: usize,
    out: *mut KummerCertification,
) -> KummerStatus {
    guard(|| {
        let id: FamilyId = read_str(family, "family")?.parse()?;
        let fam = ClosedFormFamily::new(id, read_rational(a, "a")?)?;
        let cert = certify_family(&fam, order)?;
        let result = KummerCertification {
            certified: cert.certified,
            mismatches: cert.mismatches,
            first_mismatch: cert.first_mismatch.map_or(-1, |n| n as i64),
        };
        write(out, result, "out")
    })
}

/// Exact Frobenius solution of a reduced equation.
pub struct KummerFrobenius {
    inner: FrobeniusSolution<Rational>,
}

/// Solve the reduced equation for offset `offset` (-1, 0 or 1) at exact `a`
/// through order `order`, with `c0 = 1`. `lambda` may be NULL to select the
/// upper indicial root.
///
/// # Safety
/// `a` (and `lambda` if non-NULL) must be NUL-terminated strings; `out`
/// valid for writes. The handle is released with [`kummer_frobenius_free`].
#[no_mangle]
pub unsafe extern "C" fn kummer_frobenius_solve(
    offset: i32,
    a: *const c_char,
    lambda: *const c_char,
    order: usize,
    out: *mut *mut KummerFrobenius,
) -> KummerStatus {
    guard(|| {
        let offset = match offset {
            -1 => Offset::Minus,
            0 => Offset::Zero,
            1 => Offset::Plus,
            k => return Err(Failure(KummerStatus::InvalidArgument, format!("offset must be -1, 0 or 1, got {k}"))),
        };
        let ode = reduce_kummer(&read_rational(a, "a")?, offset);
        let lambda = if lambda.is_null() {
            indicial_roots(&ode).upper().clone()
        } else {
            read_rational(lambda, "lambda")?
        };
        let inner = solve_frobenius(&ode, &lambda, order, &Rational::one())?;
        write(out, Box::into_raw(Box::new(KummerFrobenius { inner })), "out")
    })
}

/// Number of stored coefficients (`order + 1`, or fewer in the log case).
/// Returns 0 for NULL.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kummer_frobenius_len(h: *const KummerFrobenius) -> usize {
    h.as_ref().map_or(0, |h| h.inner.coeffs.len())
}

/// Whether the recurrence hit a resonant denominator. False for NULL.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kummer_frobenius_log_case(h: *const KummerFrobenius) -> bool {
    h.as_ref().is_some_and(|h| h.inner.log_case)
}

/// The exponent `λ` as a caller-owned fraction string, or NULL for NULL.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kummer_frobenius_lambda(h: *const KummerFrobenius) -> *mut c_char {
    h.as_ref().map_or(ptr::null_mut(), |h| owned_string(to_fraction_string(&h.inner.lambda)))
}

unsafe fn coeff<'a>(h: *const KummerFrobenius, n: usize) -> Result<&'a Rational, Failure> {
    let h = h.as_ref().ok_or_else(|| null("handle"))?;
    h.inner.coeffs.get(n).ok_or_else(|| {
        Failure(KummerStatus::OutOfRange, format!("coefficient {n} out of range 0..{}", h.inner.coeffs.len()))
    })
}

/// Coefficient `c_n` rounded to double precision.
///
/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kummer_frobenius_coeff_f64(h: *const KummerFrobenius, n: usize, out: *mut f64) -> KummerStatus {
    guard(|| write(out, coeff(h, n)?.to_f64(), "out"))
}

/// Coefficient `c_n` as a caller-owned exact fraction string.
///
/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kummer_frobenius_coeff_string(
    h: *const KummerFrobenius,
    n: usize,
    out: *mut *mut c_char,
) -> KummerStatus {
    guard(|| write(out, owned_string(to_fraction_string(coeff(h, n)?)), "out"))
}

/// # Safety
/// `h` must be NULL or a handle from [`kummer_frobenius_solve`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn kummer_frobenius_free(h: *mut KummerFrobenius) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Result of a numerical identity check over a grid.
pub struct KummerIdentityReport {
    inner: IdentityReport,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerPoint {
    pub a: f64,
    pub z: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub terms_used: usize,
    pub pass: bool,
}

unsafe fn read_slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

/// Check identity `identity` (`"kummer2"`, `"contig-plus"`, `"contig-minus"`)
/// on the grid `a[0..na] × z[0..nz]`, a-major.
///
/// # Safety
/// `identity` must be a NUL-terminated string, `a` and `z` valid for `na`
/// and `nz` reads, `out` valid for writes. The handle is released with
/// [`kummer_identity_report_free`].
#[no_mangle]
pub unsafe extern "C" fn kummer_verify_identity(
    identity: *const c_char,
    a: *const f64,
    na: usize,
    z: *const f64,
    nz: usize,
    tol: f64,
    out: *mut *mut KummerIdentityReport,
) -> KummerStatus {
    guard(|| {
        let id: IdentityId = read_str(identity, "identity")?.parse()?;
        let inner = verify_identity(id, read_slice(a, na, "a")?, read_slice(z, nz, "z")?, tol)?;
        write(out, Box::into_raw(Box::new(KummerIdentityReport { inner })), "out")
    })
}

/// Number of grid points. 0 for NULL.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kummer_identity_report_len(h: *const KummerIdentityReport) -> usize {
    h.as_ref().map_or(0, |h| h.inner.points.len())
}

/// Whether every point passed. False for NULL.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kummer_identity_report_passed(h: *const KummerIdentityReport) -> bool {
    h.as_ref().is_some_and(|h| h.inner.pass)
}

/// Largest relative residual over the grid. NaN for NULL.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kummer_identity_report_max_rel_residual(h: *const KummerIdentityReport) -> f64 {
    h.as_ref().map_or(f64::NAN, |h| h.inner.max_rel_residual())
}

/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kummer_identity_report_point(
    h: *const KummerIdentityReport,
    i: usize,
    out: *mut KummerPoint,
) -> KummerStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let p = h.inner.points.get(i).ok_or_else(|| {
            Failure(KummerStatus::OutOfRange, format!("point {i} out of range 0..{}", h.inner.points.len()))
        })?;
        let point = KummerPoint {
            a: p.a,
            z: p.z,
            lhs: p.lhs,
            rhs: p.rhs,
            abs_residual: p.abs_residual,
            rel_residual: p.rel_residual,
            terms_used: p.terms_used,
            pass: p.pass,
        };
        write(out, point, "out")
    })
}

/// # Safety
/// `h` must be NULL or a handle from [`kummer_verify_identity`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn kummer_identity_report_free(h: *mut KummerIdentityReport) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Exact connection constants `A`, `B` by series matching through order
/// `order`, returned as caller-owned fraction strings.
///
/// # Safety
/// `identity` and `a` must be NUL-terminated strings; `out_a` and `out_b`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kummer_connection_constants(
    identity: *const c_char,
    a: *const c_char,
    order: usize,
    out_a: *mut *mut c_char,
    out_b: *mut *mut c_char,
) -> KummerStatus {
    guard(|| {
        if out_a.is_null() || out_b.is_null() {
            return Err(null("output pointer"));
        }
        let id: IdentityId = read_str(identity, "identity")?.parse()?;
        let c = connection_constants(id, &read_rational(a, "a")?, order)?;
        write(out_a, owned_string(to_fraction_string(&c.a)), "out_a")?;
        write(out_b, owned_string(to_fraction_string(&c.b)), "out_b")
    })
}
