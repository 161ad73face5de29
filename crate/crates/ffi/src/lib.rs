//! C ABI for `bergman-qc`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` and
//! released by the matching `*_free`. Every fallible function returns a
//! [`BqcStatus`]; on failure a message is stored per thread and can be
//! copied out with [`bqc_last_error_message`]. Panics are caught and
//! reported as [`BqcStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bergman_qc::bergman::{BasisSpec, BergmanEngine, PolarQuadrature};
use bergman_qc::capacity::arc_log_capacity;
use bergman_qc::domain::ParamRT;
use bergman_qc::qc::{apply, qc_constant, transport_params, QCParams};
use bergman_qc::wiener::{classify_domain, gamma_at_origin, DomainClass, Verdict};
use bergman_qc::{DomainSpec, Error, Scalar};
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BqcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Parse = 3,
    OutsideDomain = 4,
    IllConditioned = 5,
    Unsupported = 6,
    Numerical = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BqcClass {
    ExhaustiveHenceComplete = 0,
    NotComplete = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BqcVerdict {
    Divergent = 0,
    Finite = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BqcKernelDomain {
    Disc = 0,
    PuncturedDisc = 1,
    Annulus = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BqcClassification {
    pub class_id: i32,
    pub ratio_n0: f64,
    pub ratio_n1: f64,
    /// Nonzero when a comparison was decided inside the float guard band.
    pub near_boundary: i32,
    pub ratio_one_boundary: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BqcGamma {
    pub verdict: i32,
    pub ratio: f64,
    /// May be `+inf` for divergent series.
    pub lower_sum: f64,
    pub upper_sum: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BqcKernelValue {
    pub kernel: f64,
    pub metric: f64,
    pub derivative_functional: f64,
    pub error_proxy: f64,
}

/// Opaque D^{r,t} parameter pair.
pub struct BqcParams(ParamRT);

/// Opaque factorized Bergman Gram matrix.
pub struct BqcKernelEngine(BergmanEngine);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BqcStatus {
    match e {
        Error::InvalidParameter { .. } | Error::InvalidDomain(_) | Error::EmptyShell { .. } => {
            BqcStatus::InvalidParameter
        }
        Error::Parse { .. } => BqcStatus::Parse,
        Error::OutsideDomain { .. } => BqcStatus::OutsideDomain,
        Error::IllConditioned { .. } => BqcStatus::IllConditioned,
        Error::UnsupportedSet(_) | Error::ShellDecomposition(_) => BqcStatus::Unsupported,
        _ => BqcStatus::Numerical,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> BqcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BqcStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            BqcStatus::Panic
        }
    }
}

fn null_error(what: &str) -> BqcStatus {
    set_error(format!("null pointer passed for `{what}`"));
    BqcStatus::NullPointer
}

unsafe fn read_scalar(p: *const c_char) -> Result<Scalar, Error> {
    let s = CStr::from_ptr(p).to_str().map_err(|_| Error::Parse {
        input: String::from_utf8_lossy(CStr::from_ptr(p).to_bytes()).into_owned(),
        reason: "not valid UTF-8".into(),
    })?;
    s.parse()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bqc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf`.
///
/// Returns the message length without the terminator, 0 when there is no
/// error, or -1 when `buf` is too small (nothing is written then).
///
/// # Safety
/// `buf` must be valid for `len` bytes or null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn bqc_last_error_message(buf: *mut c_char, len: usize) -> isize {
    LAST_ERROR.with(|e| match &*e.borrow() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if buf.is_null() || len < bytes.len() {
                return -1;
            }
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, bytes.len());
            (bytes.len() - 1) as isize
        }
    })
}

/// Parses `r` and `t` (`"1/8"`, `"0.125"`) and checks `0 < r < 1`, `0 < t < 1/2`.
///
/// # Safety
/// `r` and `t` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bqc_params_new(r: *const c_char, t: *const c_char, out: *mut *mut BqcParams) -> BqcStatus {
    if r.is_null() || t.is_null() {
        return null_error("r/t");
    }
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let p = ParamRT::new(read_scalar(r)?, read_scalar(t)?)?;
        *out = Box::into_raw(Box::new(BqcParams(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`bqc_params_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bqc_params_free(p: *mut BqcParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bqc_classify(p: *const BqcParams, out: *mut BqcClassification) -> BqcStatus {
    if p.is_null() || out.is_null() {
        return null_error("params/out");
    }
    guard(|| {
        let c = classify_domain(&(*p).0);
        *out = BqcClassification {
            class_id: match c.class {
                DomainClass::ExhaustiveHenceComplete => BqcClass::ExhaustiveHenceComplete,
                DomainClass::NotComplete => BqcClass::NotComplete,
                DomainClass::Unknown => BqcClass::Unknown,
            } as i32,
            ratio_n0: c.ratio_n0,
            ratio_n1: c.ratio_n1,
            near_boundary: c.near_boundary as i32,
            ratio_one_boundary: c.ratio_one_boundary as i32,
        };
        Ok(())
    })
}

/// Shell-series γ^{(n)}(0).
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bqc_gamma_origin(p: *const BqcParams, n: u32, out: *mut BqcGamma) -> BqcStatus {
    if p.is_null() || out.is_null() {
        return null_error("params/out");
    }
    guard(|| {
        let g = gamma_at_origin(&(*p).0, n);
        *out = BqcGamma {
            verdict: match g.verdict {
                Verdict::Divergent => BqcVerdict::Divergent,
                Verdict::Finite => BqcVerdict::Finite,
                Verdict::Inconclusive => BqcVerdict::Inconclusive,
            } as i32,
            ratio: g.ratio.unwrap_or(f64::NAN),
            lower_sum: g.lower_sum,
            upper_sum: g.upper_sum,
        };
        Ok(())
    })
}

/// Transports `p` along φ_α; `alpha` is parsed like the parameters.
///
/// # Safety
/// `p` must be a live handle, `alpha` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bqc_transport(
    p: *const BqcParams,
    alpha: *const c_char,
    out: *mut *mut BqcParams,
) -> BqcStatus {
    if p.is_null() || alpha.is_null() || out.is_null() {
        return null_error("params/alpha/out");
    }
    guard(|| {
        let a = QCParams::new(read_scalar(alpha)?)?;
        let t = transport_params(&(*p).0, &a)?;
        *out = Box::into_raw(Box::new(BqcParams(t.image)));
        Ok(())
    })
}

/// Radius parameter as a double.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bqc_params_r(p: *const BqcParams) -> f64 {
    if p.is_null() {
        return f64::NAN;
    }
    (*p).0.r()
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bqc_params_t(p: *const BqcParams) -> f64 {
    if p.is_null() {
        return f64::NAN;
    }
    (*p).0.t()
}

/// Dilatation constant `L` of φ_α.
///
/// # Safety
/// `alpha` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bqc_qc_constant(alpha: *const c_char, out: *mut f64) -> BqcStatus {
    if alpha.is_null() || out.is_null() {
        return null_error("alpha/out");
    }
    guard(|| {
        *out = qc_constant(&QCParams::new(read_scalar(alpha)?)?).l.value();
        Ok(())
    })
}

/// `φ_α(re + i im)`.
///
/// # Safety
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bqc_qc_apply(alpha: f64, re: f64, im: f64, out_re: *mut f64, out_im: *mut f64) -> BqcStatus {
    if out_re.is_null() || out_im.is_null() {
        return null_error("out_re/out_im");
    }
    guard(|| {
        let w = apply(&QCParams::from_f64(alpha)?, Complex64::new(re, im));
        *out_re = w.re;
        *out_im = w.im;
        Ok(())
    })
}

/// `ln cap` of a circular arc.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bqc_arc_log_capacity(radius: f64, half_width: f64, out: *mut f64) -> BqcStatus {
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        *out = arc_log_capacity(radius, half_width)?.log_value();
        Ok(())
    })
}

/// Builds and factorizes the monomial Gram matrix of degree `max_degree`.
/// `inner` is used for the annulus only.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bqc_kernel_engine_new(
    domain: BqcKernelDomain,
    inner: f64,
    max_degree: u32,
    out: *mut *mut BqcKernelEngine,
) -> BqcStatus {
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let d = match domain {
            BqcKernelDomain::Disc => DomainSpec::unit_disc(),
            BqcKernelDomain::PuncturedDisc => DomainSpec::punctured_disc(),
            BqcKernelDomain::Annulus => DomainSpec::annulus(inner)?,
        };
        let basis = BasisSpec::monomials(d, max_degree);
        let quad = PolarQuadrature::for_degree(max_degree);
        *out = Box::into_raw(Box::new(BqcKernelEngine(BergmanEngine::new(&basis, &quad)?)));
        Ok(())
    })
}

/// # Safety
/// `e` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bqc_kernel_eval(
    e: *const BqcKernelEngine,
    re: f64,
    im: f64,
    out: *mut BqcKernelValue,
) -> BqcStatus {
    if e.is_null() || out.is_null() {
        return null_error("engine/out");
    }
    guard(|| {
        let k = (*e).0.evaluate(Complex64::new(re, im))?;
        *out = BqcKernelValue {
            kernel: k.kernel,
            metric: k.metric,
            derivative_functional: k.derivative_functional,
            error_proxy: k.error_proxy,
        };
        Ok(())
    })
}

/// # Safety
/// `e` must come from [`bqc_kernel_engine_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bqc_kernel_engine_free(e: *mut BqcKernelEngine) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}
