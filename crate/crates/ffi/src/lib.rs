//! C ABI over `birelab`.
//!
//! Objects are opaque heap handles released with their `_free` function.
//! Every fallible call returns a [`BirelabStatus`]; on failure the message is
//! available from [`birelab_last_error`] on the same thread. Strings returned
//! through `char**` out-parameters are owned by the caller and released with
//! [`birelab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use birelab::factor::{factor_quartic, BirefringenceResult, BirefringenceTag};
use birelab::fresnel::{tamm_rubilar, QuarticForm};
use birelab::medium::MediumTensor;
use birelab::metaclass::{construct_metaclass, MetaclassParams};
use birelab::report::analyze;
use birelab::segre::{metaclass_of, SegreOptions};
use birelab::Error;
use nalgebra::{Matrix6, Vector4};

/// Opaque medium tensor.
pub struct BirelabMedium(MediumTensor);

/// Opaque Fresnel quartic.
pub struct BirelabQuartic(QuarticForm);

/// Opaque outcome of a quartic factorization.
pub struct BirelabFactorization(BirefringenceResult);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BirelabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    IllConditioned = 3,
    NotSkewonFree = 4,
    SingularMedium = 5,
    NumericalFailure = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BirelabTag {
    DoubleLightCone = 0,
    SingleCone = 1,
    ReducibleNonLorentz = 2,
    NoQuadricFactorization = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> BirelabStatus {
    match e {
        Error::IllConditioned(_) => BirelabStatus::IllConditioned,
        Error::NotSkewonFree => BirelabStatus::NotSkewonFree,
        Error::SingularMedium => BirelabStatus::SingularMedium,
        Error::ConsistencyCheck(_) | Error::ZeroForm => BirelabStatus::NumericalFailure,
        _ => BirelabStatus::InvalidInput,
    }
}

struct Fail(BirelabStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(BirelabStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> BirelabStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BirelabStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BirelabStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail(BirelabStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Fail(BirelabStatus::NumericalFailure, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn birelab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn birelab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Medium from a row-major 6×6 matrix in the standard two-form basis.
///
/// # Safety
/// `matrix` must point to 36 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_medium_from_matrix(matrix: *const f64, out: *mut *mut BirelabMedium) -> BirelabStatus {
    guard(|| {
        if matrix.is_null() {
            return Err(null("matrix"));
        }
        let m = Matrix6::from_row_slice(std::slice::from_raw_parts(matrix, 36));
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Fail(BirelabStatus::InvalidInput, "matrix has non-finite entries".into()));
        }
        write_out(out, BirelabMedium(MediumTensor::from_matrix(m)))
    })
}

/// Medium from medium JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_medium_from_json(json: *const c_char, out: *mut *mut BirelabMedium) -> BirelabStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        write_out(out, BirelabMedium(MediumTensor::from_json_str(text)?))
    })
}

/// Normal-form medium from parameter JSON `{"class":"I","alpha":[..],"beta":[..]}`.
///
/// # Safety
/// `params_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_medium_construct(params_json: *const c_char, out: *mut *mut BirelabMedium) -> BirelabStatus {
    guard(|| {
        let text = read_str(params_json, "params_json")?;
        let params = MetaclassParams::from_json_str(text)?;
        write_out(out, BirelabMedium(construct_metaclass(&params)?))
    })
}

/// # Safety
/// `medium` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn birelab_medium_free(medium: *mut BirelabMedium) {
    if !medium.is_null() {
        drop(Box::from_raw(medium));
    }
}

/// Copies the row-major 6×6 matrix into `out`.
///
/// # Safety
/// `medium` must be a live handle; `out` must hold 36 doubles.
#[no_mangle]
pub unsafe extern "C" fn birelab_medium_matrix(medium: *const BirelabMedium, out: *mut f64) -> BirelabStatus {
    guard(|| {
        let m = handle(medium, "medium")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let rows = m.0.rows();
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                *out.add(6 * i + j) = *v;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `medium` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_medium_is_skewon_free(medium: *const BirelabMedium, tol: f64, out: *mut bool) -> BirelabStatus {
    guard(|| {
        let m = handle(medium, "medium")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = m.0.is_skewon_free(tol);
        Ok(())
    })
}

/// Metaclass name ("I" … "VII" or "VIII-XXIII").
///
/// # Safety
/// `medium` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_medium_metaclass(medium: *const BirelabMedium, out: *mut *mut c_char) -> BirelabStatus {
    guard(|| {
        let m = handle(medium, "medium")?;
        let class = metaclass_of(&m.0)?;
        write_string(out, class.as_str().to_string())
    })
}

/// Full analysis report as JSON, with default tolerances.
///
/// # Safety
/// `medium` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_medium_analyze(medium: *const BirelabMedium, out: *mut *mut c_char) -> BirelabStatus {
    guard(|| {
        let m = handle(medium, "medium")?;
        write_string(out, analyze(&m.0, &SegreOptions::default())?.to_json_string())
    })
}

/// Fresnel quartic of a medium.
///
/// # Safety
/// `medium` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_medium_quartic(medium: *const BirelabMedium, out: *mut *mut BirelabQuartic) -> BirelabStatus {
    guard(|| {
        let m = handle(medium, "medium")?;
        write_out(out, BirelabQuartic(tamm_rubilar(&m.0)))
    })
}

/// # Safety
/// `quartic` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn birelab_quartic_free(quartic: *mut BirelabQuartic) {
    if !quartic.is_null() {
        drop(Box::from_raw(quartic));
    }
}

/// The 35 symmetric coefficients, multi-indices in lexicographic order
/// (0000, 0001, …, 3333).
///
/// # Safety
/// `quartic` must be a live handle; `out` must hold 35 doubles.
#[no_mangle]
pub unsafe extern "C" fn birelab_quartic_coefficients(quartic: *const BirelabQuartic, out: *mut f64) -> BirelabStatus {
    guard(|| {
        let q = handle(quartic, "quartic")?;
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(q.0.coefficients().as_ptr(), out, 35);
        Ok(())
    })
}

/// # Safety
/// `quartic` must be a live handle; `xi` must hold 4 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_quartic_evaluate(quartic: *const BirelabQuartic, xi: *const f64, out: *mut f64) -> BirelabStatus {
    guard(|| {
        let q = handle(quartic, "quartic")?;
        if xi.is_null() || out.is_null() {
            return Err(null("xi or out"));
        }
        *out = q.0.evaluate(&Vector4::from_column_slice(std::slice::from_raw_parts(xi, 4)));
        Ok(())
    })
}

/// Factors a quartic into quadrics and classifies the result.
///
/// # Safety
/// `quartic` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_quartic_factor(quartic: *const BirelabQuartic, out: *mut *mut BirelabFactorization) -> BirelabStatus {
    guard(|| {
        let q = handle(quartic, "quartic")?;
        write_out(out, BirelabFactorization(factor_quartic(&q.0)?))
    })
}

/// # Safety
/// `factorization` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn birelab_factorization_free(factorization: *mut BirelabFactorization) {
    if !factorization.is_null() {
        drop(Box::from_raw(factorization));
    }
}

/// # Safety
/// `factorization` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_factorization_tag(factorization: *const BirelabFactorization, out: *mut BirelabTag) -> BirelabStatus {
    guard(|| {
        let f = handle(factorization, "factorization")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match f.0.tag() {
            BirefringenceTag::DoubleLightCone => BirelabTag::DoubleLightCone,
            BirefringenceTag::SingleCone => BirelabTag::SingleCone,
            BirefringenceTag::ReducibleNonLorentz => BirelabTag::ReducibleNonLorentz,
            BirefringenceTag::NoQuadricFactorization => BirelabTag::NoQuadricFactorization,
        };
        Ok(())
    })
}

/// Row-major 4×4 factors and constant with `f = c·(ξᵀaξ)(ξᵀbξ)`, in canonical
/// gauge. A single cone fills both `a` and `b` with the same quadric. Fails
/// with `NumericalFailure` when no factorization was found.
///
/// # Safety
/// `factorization` must be a live handle; `a` and `b` must hold 16 doubles;
/// `c` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_factorization_quadrics(
    factorization: *const BirelabFactorization,
    a: *mut f64,
    b: *mut f64,
    c: *mut f64,
) -> BirelabStatus {
    guard(|| {
        let f = handle(factorization, "factorization")?;
        if a.is_null() || b.is_null() || c.is_null() {
            return Err(null("a, b or c"));
        }
        let (qa, qb, constant) = match &f.0 {
            BirefringenceResult::DoubleLightCone { g_plus, g_minus, c, .. } => (g_plus, g_minus, *c),
            BirefringenceResult::SingleCone { g, c, .. } => (g, g, *c),
            BirefringenceResult::ReducibleNonLorentz { first, second, c, .. } => (first, second, *c),
            BirefringenceResult::NoQuadricFactorization { .. } => {
                return Err(Fail(BirelabStatus::NumericalFailure, "quartic has no quadric factorization".into()));
            }
        };
        for (dst, q) in [(a, qa), (b, qb)] {
            for (i, row) in q.rows().iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    *dst.add(4 * i + j) = *v;
                }
            }
        }
        *c = constant;
        Ok(())
    })
}

/// Grid residual of the factorization (best residual when none was found).
///
/// # Safety
/// `factorization` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_factorization_residual(factorization: *const BirelabFactorization, out: *mut f64) -> BirelabStatus {
    guard(|| {
        let f = handle(factorization, "factorization")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = f.0.residual();
        Ok(())
    })
}

/// # Safety
/// `factorization` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn birelab_factorization_to_json(factorization: *const BirelabFactorization, out: *mut *mut c_char) -> BirelabStatus {
    guard(|| {
        let f = handle(factorization, "factorization")?;
        write_string(out, f.0.to_json().to_string())
    })
}
