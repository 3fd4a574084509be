//! C ABI over `siegel-jacobi`.
//!
//! Every function returns an [`SjStatus`] and writes its result through an
//! out-pointer. Model parameters and representative-coordinate frames live
//! behind opaque handles created by `sj_model_new`/`sj_frame_new` and
//! released by the matching `_free`. On failure the message of the last error
//! on the calling thread is available from `sj_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use siegel_jacobi::geometry::{balanced_metric, inverse_metric, kahler_potential, scalar_curvature, volume_density};
use siegel_jacobi::group::{jacobi_act, JacobiElement, SU11Element};
use siegel_jacobi::kernels::{berezin_kernel, cayley_angle, diastasis, normalized_kernel, sj_kernel};
use siegel_jacobi::repcoords::{rc_forward, rc_inverse, rc_jacobian_det, xy_chart, RCFrame, RCPoint};
use siegel_jacobi::{Error, HermitianMatrix2, ModelParams, SJPoint};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SjComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for SjComplex {
    fn from(c: Complex64) -> Self {
        SjComplex { re: c.re, im: c.im }
    }
}

impl From<SjComplex> for Complex64 {
    fn from(c: SjComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

/// Point `(z, w)` of the Siegel-Jacobi disk, `|w| < 1`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SjPoint {
    pub z: SjComplex,
    pub w: SjComplex,
}

/// Hermitian 2×2 matrix `[[zz, zw], [conj(zw), ww]]`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SjHermitian2 {
    pub zz: f64,
    pub zw: SjComplex,
    pub ww: f64,
}

impl From<HermitianMatrix2> for SjHermitian2 {
    fn from(h: HermitianMatrix2) -> Self {
        SjHermitian2 {
            zz: h.zz,
            zw: h.zw.into(),
            ww: h.ww,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SjStatus {
    Ok = 0,
    NullPointer = 1,
    /// Input outside the domain (`|w| ≥ 1`, `k ≤ 3/4`, non-unimodular element, ...).
    Domain = 2,
    Step = 3,
    Config = 4,
    Usage = 5,
    Internal = 6,
}

/// Opaque model parameters `(k, μ)`.
pub struct SjModel {
    params: ModelParams,
}

/// Opaque representative-coordinate frame anchored at a base point.
pub struct SjFrame {
    frame: RCFrame,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SjStatus {
    match e {
        Error::Domain(_) => SjStatus::Domain,
        Error::Step(_) => SjStatus::Step,
        Error::Config(_) => SjStatus::Config,
        Error::Usage(_) => SjStatus::Usage,
        Error::Io(_) | Error::Json(_) => SjStatus::Internal,
    }
}

type FfiResult = Result<(), SjStatus>;

fn fail(e: Error) -> SjStatus {
    set_last_error(&e.to_string());
    status_of(&e)
}

/// Run `f`, translating panics and errors into a status code.
fn guard(f: impl FnOnce() -> FfiResult) -> SjStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SjStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("internal panic");
            SjStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, SjStatus> {
    p.as_ref().ok_or_else(|| {
        set_last_error("null pointer argument");
        SjStatus::NullPointer
    })
}

unsafe fn write<T>(out: *mut T, v: T) -> FfiResult {
    if out.is_null() {
        set_last_error("null output pointer");
        return Err(SjStatus::NullPointer);
    }
    out.write(v);
    Ok(())
}

fn point(p: SjPoint) -> Result<SJPoint, SjStatus> {
    SJPoint::new(p.z.into(), p.w.into()).map_err(fail)
}

fn to_ffi(p: &SJPoint) -> SjPoint {
    SjPoint {
        z: p.z.into(),
        w: p.w().into(),
    }
}

/// Human-readable message of the last failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sj_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sj_status_message(status: SjStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        SjStatus::Ok => b"ok\0",
        SjStatus::NullPointer => b"null pointer\0",
        SjStatus::Domain => b"domain error\0",
        SjStatus::Step => b"invalid finite-difference step\0",
        SjStatus::Config => b"invalid configuration\0",
        SjStatus::Usage => b"usage error\0",
        SjStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// Create a model with `k > 3/4`, `μ > 0`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_model_new(k: f64, mu: f64, out: *mut *mut SjModel) -> SjStatus {
    guard(|| {
        let params = ModelParams::new(k, mu).map_err(fail)?;
        write(out, Box::into_raw(Box::new(SjModel { params })))
    })
}

/// # Safety
/// `model` must come from `sj_model_new` and not be used afterwards; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn sj_model_free(model: *mut SjModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Create a representative-coordinate frame at `base`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_frame_new(model: *const SjModel, base: SjPoint, out: *mut *mut SjFrame) -> SjStatus {
    guard(|| {
        let m = deref(model)?;
        let frame = RCFrame::new(point(base)?, m.params);
        write(out, Box::into_raw(Box::new(SjFrame { frame })))
    })
}

/// # Safety
/// `frame` must come from `sj_frame_new` and not be used afterwards; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn sj_frame_free(frame: *mut SjFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

unsafe fn eval_two<T>(model: *const SjModel, p: SjPoint, q: SjPoint, out: *mut T, f: impl FnOnce(&SJPoint, &SJPoint, ModelParams) -> T) -> SjStatus {
    guard(|| unsafe {
        let m = deref(model)?;
        let (p, q) = (point(p)?, point(q)?);
        write(out, f(&p, &q, m.params))
    })
}

unsafe fn eval_one<T>(model: *const SjModel, p: SjPoint, out: *mut T, f: impl FnOnce(&SJPoint, ModelParams) -> T) -> SjStatus {
    guard(|| unsafe {
        let m = deref(model)?;
        write(out, f(&point(p)?, m.params))
    })
}

/// Reproducing kernel `K(p, q̄)`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_kernel_eval(model: *const SjModel, p: SjPoint, q: SjPoint, out: *mut SjComplex) -> SjStatus {
    eval_two(model, p, q, out, |p, q, m| sj_kernel(p, q, m).into())
}

/// Normalized kernel `κ(p, q̄)`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_kappa(model: *const SjModel, p: SjPoint, q: SjPoint, out: *mut SjComplex) -> SjStatus {
    eval_two(model, p, q, out, |p, q, m| normalized_kernel(p, q, m).into())
}

/// Berezin kernel `|κ(p, q̄)|²`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_berezin(model: *const SjModel, p: SjPoint, q: SjPoint, out: *mut f64) -> SjStatus {
    eval_two(model, p, q, out, berezin_kernel)
}

/// Calabi diastasis `D(p, q)`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_diastasis(model: *const SjModel, p: SjPoint, q: SjPoint, out: *mut f64) -> SjStatus {
    eval_two(model, p, q, out, diastasis)
}

/// Cayley angle `arccos|κ(p, q̄)|`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_cayley(model: *const SjModel, p: SjPoint, q: SjPoint, out: *mut f64) -> SjStatus {
    eval_two(model, p, q, out, cayley_angle)
}

/// Kähler potential `ln K(p, p̄)`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_potential(model: *const SjModel, p: SjPoint, out: *mut f64) -> SjStatus {
    eval_one(model, p, out, kahler_potential)
}

/// Balanced metric at `p`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_metric(model: *const SjModel, p: SjPoint, out: *mut SjHermitian2) -> SjStatus {
    eval_one(model, p, out, |p, m| balanced_metric(p, m).into())
}

/// Inverse of the balanced metric at `p`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_inverse_metric(model: *const SjModel, p: SjPoint, out: *mut SjHermitian2) -> SjStatus {
    eval_one(model, p, out, |p, m| inverse_metric(p, m).into())
}

/// Volume density `G = det h` at `p`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_density(model: *const SjModel, p: SjPoint, out: *mut f64) -> SjStatus {
    eval_one(model, p, out, volume_density)
}

/// Scalar curvature, constant on the disk.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_scalar_curvature(model: *const SjModel, out: *mut f64) -> SjStatus {
    guard(|| write(out, scalar_curvature(deref(model)?.params)))
}

/// Representative coordinates `(w₁, w₂)` of `p`.
///
/// # Safety
/// `frame` must be a live handle; `out_w1`, `out_w2` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_rc_forward(
    frame: *const SjFrame,
    p: SjPoint,
    out_w1: *mut SjComplex,
    out_w2: *mut SjComplex,
) -> SjStatus {
    guard(|| {
        let f = deref(frame)?;
        let r = rc_forward(&f.frame, &point(p)?);
        write(out_w1, r.w1.into())?;
        write(out_w2, r.w2.into())
    })
}

/// Point with representative coordinates `(w₁, w₂)`; `Domain` if the pair is
/// outside the image.
///
/// # Safety
/// `frame` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_rc_inverse(frame: *const SjFrame, w1: SjComplex, w2: SjComplex, out: *mut SjPoint) -> SjStatus {
    guard(|| {
        let f = deref(frame)?;
        let p = rc_inverse(&f.frame, &RCPoint { w1: w1.into(), w2: w2.into() }).map_err(fail)?;
        write(out, to_ffi(&p))
    })
}

/// `det ∂(w₁, w₂)/∂(z, w)` at `p`.
///
/// # Safety
/// `frame` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_det_j(frame: *const SjFrame, p: SjPoint, out: *mut SjComplex) -> SjStatus {
    guard(|| {
        let f = deref(frame)?;
        write(out, rc_jacobian_det(&f.frame, &point(p)?).into())
    })
}

/// Chart coordinates `(x, y)` of `p`, `|y| < 1`.
///
/// # Safety
/// `frame` must be a live handle; `out_x`, `out_y` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_xy_chart(frame: *const SjFrame, p: SjPoint, out_x: *mut SjComplex, out_y: *mut SjComplex) -> SjStatus {
    guard(|| {
        let f = deref(frame)?;
        let xy = xy_chart(&f.frame, &point(p)?);
        write(out_x, xy.x.into())?;
        write(out_y, xy.y.value().into())
    })
}

/// Action of the Jacobi group element `(g, α)`, `g = [[a, b], [b̄, ā]]` with
/// `|a|² − |b|² = 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_jacobi_act(a: SjComplex, b: SjComplex, alpha: SjComplex, p: SjPoint, out: *mut SjPoint) -> SjStatus {
    guard(|| {
        let g = SU11Element::new(a.into(), b.into()).map_err(fail)?;
        let e = JacobiElement::new(g, alpha.into());
        let q = jacobi_act(&e, &point(p)?).map_err(fail)?;
        write(out, to_ffi(&q))
    })
}
