//! C interface to `sd2-core`.
//!
//! Every fallible function returns an [`Sd2Status`]; on failure the message
//! is kept per thread and can be read with [`sd2_last_error_message`].
//! Handles are opaque and must be released with the matching `_free`.
//! Matrices are exchanged row-major as separate real and imaginary arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sd2_core::j2rep::{build_j3_j2basis, GaugeSeq};
use sd2_core::numerics::{dense_eigen, DenseMatrix, Tolerances};
use sd2_core::qdiag::{assemble_q_eigvecs, j2_eigvecs, EigvecTable};
use sd2_core::repmat::{build, spectrum_closed_form, BasisOrdering, GeneratorSet, Sign, SpectrumOp};
use sd2_core::verify::run_suite;
use sd2_core::{OscParams, Sd2Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sd2Status {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    Singular = 3,
    NoConvergence = 4,
    OutOfRange = 5,
    Isotropic = 6,
    ZeroGauge = 7,
    Dimension = 8,
    Format = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sd2Basis {
    Cartesian = 0,
    CircularB1 = 1,
    CircularB2 = 2,
    J2Eigen = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sd2Generator {
    J1 = 0,
    J2 = 1,
    J3 = 2,
    Rx = 3,
    Ry = 4,
    H = 5,
    Casimir = 6,
    Q = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sd2Operator {
    J2 = 0,
    J3 = 1,
    Q = 2,
    H = 3,
}

/// Generator matrices of one representation in one basis.
pub struct Sd2Generators {
    inner: GeneratorSet,
}

/// Eigenvectors of `Q` or `J2` in the `B2` basis.
pub struct Sd2Eigvecs {
    inner: EigvecTable,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Sd2Error) -> Sd2Status {
    match e {
        Sd2Error::DimensionMismatch { .. } | Sd2Error::NotSquare { .. } => Sd2Status::Dimension,
        Sd2Error::NonFinite(_) | Sd2Error::InvalidParams(_) | Sd2Error::WrongBasis { .. } => Sd2Status::InvalidParams,
        Sd2Error::EigenNoConvergence(_) => Sd2Status::NoConvergence,
        Sd2Error::SingularParameter { .. } => Sd2Status::Singular,
        Sd2Error::OutOfRange(_) => Sd2Status::OutOfRange,
        Sd2Error::IsotropicDegenerate { .. } => Sd2Status::Isotropic,
        Sd2Error::ZeroGauge { .. } => Sd2Status::ZeroGauge,
        Sd2Error::Format(_) => Sd2Status::Format,
    }
}

enum Failure {
    Core(Sd2Error),
    Status(Sd2Status, String),
}

impl From<Sd2Error> for Failure {
    fn from(e: Sd2Error) -> Self {
        Failure::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> Sd2Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            Sd2Status::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            Sd2Status::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(Sd2Status::NullPointer, format!("{what} is null"))
}

fn bad_enum(what: &str, v: i32) -> Failure {
    Failure::Status(Sd2Status::InvalidParams, format!("unknown {what} value {v}"))
}

fn basis(b: i32) -> Result<BasisOrdering, Failure> {
    Ok(match b {
        x if x == Sd2Basis::Cartesian as i32 => BasisOrdering::CartesianV,
        x if x == Sd2Basis::CircularB1 as i32 => BasisOrdering::CircularB1,
        x if x == Sd2Basis::CircularB2 as i32 => BasisOrdering::CircularB2,
        x if x == Sd2Basis::J2Eigen as i32 => BasisOrdering::J2Eigen,
        x => return Err(bad_enum("basis", x)),
    })
}

fn operator(o: i32) -> Result<SpectrumOp, Failure> {
    Ok(match o {
        x if x == Sd2Operator::J2 as i32 => SpectrumOp::J2,
        x if x == Sd2Operator::J3 as i32 => SpectrumOp::J3,
        x if x == Sd2Operator::Q as i32 => SpectrumOp::Q,
        x if x == Sd2Operator::H as i32 => SpectrumOp::H,
        x => return Err(bad_enum("operator", x)),
    })
}

fn generator(g: &GeneratorSet, which: i32) -> Result<DenseMatrix, Failure> {
    Ok(match which {
        x if x == Sd2Generator::J1 as i32 => g.j1.clone(),
        x if x == Sd2Generator::J2 as i32 => g.j2.clone(),
        x if x == Sd2Generator::J3 as i32 => g.j3.clone(),
        x if x == Sd2Generator::Rx as i32 => g.rx.clone(),
        x if x == Sd2Generator::Ry as i32 => g.ry.clone(),
        x if x == Sd2Generator::H as i32 => g.h.clone(),
        x if x == Sd2Generator::Casimir as i32 => g.casimir.clone(),
        x if x == Sd2Generator::Q as i32 => g.q_operator(),
        x => return Err(bad_enum("generator", x)),
    })
}

fn check_len(have: usize, need: usize) -> Result<(), Failure> {
    if have < need {
        return Err(Failure::Status(
            Sd2Status::BufferTooSmall,
            format!("buffer holds {have} values, {need} needed"),
        ));
    }
    Ok(())
}

/// # Safety
/// `out` must be valid for `len` writes.
unsafe fn write_real(out: *mut f64, len: usize, values: &[f64]) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    check_len(len, values.len())?;
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// Builds the generators of the `(n + 1)`-dimensional module in the basis
/// `basis_id` (an [`Sd2Basis`] value).
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle to free
/// with [`sd2_generators_free`].
#[no_mangle]
pub unsafe extern "C" fn sd2_generators_build(
    n: usize,
    mu_x: f64,
    mu_y: f64,
    basis_id: i32,
    out: *mut *mut Sd2Generators,
) -> Sd2Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = OscParams::new(n, mu_x, mu_y)?;
        let g = build(&p, basis(basis_id)?)?;
        *out = Box::into_raw(Box::new(Sd2Generators { inner: g }));
        Ok(())
    })
}

/// Generators in the `J2` eigenbasis with `gauge_len = floor(n/2)` (even `n`)
/// or `(n-1)/2` (odd `n`) nonzero gauge values.
///
/// # Safety
/// `gauge` must be valid for `gauge_len` reads (may be null when zero);
/// `out` as in [`sd2_generators_build`].
#[no_mangle]
pub unsafe extern "C" fn sd2_generators_build_gauged(
    n: usize,
    mu_x: f64,
    mu_y: f64,
    gauge: *const f64,
    gauge_len: usize,
    out: *mut *mut Sd2Generators,
) -> Sd2Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let values = if gauge_len == 0 {
            Vec::new()
        } else if gauge.is_null() {
            return Err(null("gauge"));
        } else {
            std::slice::from_raw_parts(gauge, gauge_len).to_vec()
        };
        let p = OscParams::new(n, mu_x, mu_y)?;
        let g = build_j3_j2basis(&p, &GaugeSeq::new(values)?, Tolerances::default().degeneracy_tol)?;
        *out = Box::into_raw(Box::new(Sd2Generators { inner: g }));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from a build function and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sd2_generators_free(handle: *mut Sd2Generators) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Matrix dimension `n + 1`; zero for a null handle.
///
/// # Safety
/// `handle` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sd2_generators_dim(handle: *const Sd2Generators) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.params.dim())
}

/// Copies one matrix (`which` is an [`Sd2Generator`] value), row-major, into `re` and `im` (each `len >= dim*dim`).
///
/// # Safety
/// `handle` valid; `re`, `im` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sd2_generators_matrix(
    handle: *const Sd2Generators,
    which: i32,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> Sd2Status {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let m = generator(&h.inner, which)?;
        let (r, i): (Vec<f64>, Vec<f64>) = m.as_slice().iter().map(|z| (z.re, z.im)).unzip();
        write_real(re, len, &r)?;
        write_real(im, len, &i)
    })
}

/// Numerical eigenvalues of one matrix sorted by real part.
///
/// # Safety
/// As for [`sd2_generators_matrix`], with `len >= dim`.
#[no_mangle]
pub unsafe extern "C" fn sd2_generators_eigenvalues(
    handle: *const Sd2Generators,
    which: i32,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> Sd2Status {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let mut vals = dense_eigen(&generator(&h.inner, which)?)?.values;
        vals.sort_by(|a, b| a.re.total_cmp(&b.re));
        let (r, i): (Vec<f64>, Vec<f64>) = vals.iter().map(|z| (z.re, z.im)).unzip();
        write_real(re, len, &r)?;
        write_real(im, len, &i)
    })
}

/// Closed-form spectrum of the [`Sd2Operator`] `op` (ascending, `n + 1` values).
///
/// # Safety
/// `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sd2_spectrum_closed_form(
    n: usize,
    mu_x: f64,
    mu_y: f64,
    op: i32,
    out: *mut f64,
    len: usize,
) -> Sd2Status {
    guard(|| {
        let p = OscParams::new(n, mu_x, mu_y)?;
        write_real(out, len, &spectrum_closed_form(&p, operator(op)?))
    })
}

/// Eigenvectors of `J2` (`q_operator == 0`) or `Q` (`q_operator != 0`).
///
/// # Safety
/// `out` valid; free the result with [`sd2_eigvecs_free`].
#[no_mangle]
pub unsafe extern "C" fn sd2_eigvecs_build(
    n: usize,
    mu_x: f64,
    mu_y: f64,
    q_operator: i32,
    out: *mut *mut Sd2Eigvecs,
) -> Sd2Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = OscParams::new(n, mu_x, mu_y)?;
        let t = if q_operator != 0 { assemble_q_eigvecs(&p)? } else { j2_eigvecs(&p)? };
        *out = Box::into_raw(Box::new(Sd2Eigvecs { inner: t }));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from [`sd2_eigvecs_build`].
#[no_mangle]
pub unsafe extern "C" fn sd2_eigvecs_free(handle: *mut Sd2Eigvecs) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of vectors in the table; zero for a null handle.
///
/// # Safety
/// `handle` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sd2_eigvecs_count(handle: *const Sd2Eigvecs) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.vectors.len())
}

/// Vector `index`: sector `k`, sign (+1 or -1), eigenvalue and `B2`
/// components (`len >= n + 1`).
///
/// # Safety
/// All pointers valid.
#[no_mangle]
pub unsafe extern "C" fn sd2_eigvecs_get(
    handle: *const Sd2Eigvecs,
    index: usize,
    k: *mut usize,
    sign: *mut i32,
    eigenvalue: *mut f64,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> Sd2Status {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let v = h
            .inner
            .vectors
            .get(index)
            .ok_or_else(|| Sd2Error::OutOfRange(format!("vector {index}")))?;
        if k.is_null() || sign.is_null() || eigenvalue.is_null() {
            return Err(null("scalar output"));
        }
        *k = v.k;
        *sign = if v.sign == Sign::Plus { 1 } else { -1 };
        *eigenvalue = v.eigenvalue;
        let (r, i): (Vec<f64>, Vec<f64>) = v.components.iter().map(|z| (z.re, z.im)).unzip();
        write_real(re, len, &r)?;
        write_real(im, len, &i)
    })
}

/// Real transition matrix between `B1` and the Cartesian basis, row-major.
///
/// # Safety
/// `out` valid for `len >= (n+1)^2` writes.
#[no_mangle]
pub unsafe extern "C" fn sd2_transition_matrix(n: usize, out: *mut f64, len: usize) -> Sd2Status {
    guard(|| {
        let t = sd2_core::interbasis::build_transition(&OscParams::new(n, 0.0, 0.0)?)?;
        let vals: Vec<f64> = t.t.as_slice().iter().map(|z| z.re).collect();
        write_real(out, len, &vals)
    })
}

/// Runs the check suite for `N <= n_max` on the `(mu_x[i], mu_y[i])` grid.
///
/// # Safety
/// `mu_x`, `mu_y` valid for `grid_len` reads; outputs valid.
#[no_mangle]
pub unsafe extern "C" fn sd2_verify(
    n_max: usize,
    mu_x: *const f64,
    mu_y: *const f64,
    grid_len: usize,
    passed: *mut i32,
    n_checks: *mut usize,
    n_failed: *mut usize,
) -> Sd2Status {
    guard(|| {
        if mu_x.is_null() || mu_y.is_null() || passed.is_null() || n_checks.is_null() || n_failed.is_null() {
            return Err(null("argument"));
        }
        let xs = std::slice::from_raw_parts(mu_x, grid_len);
        let ys = std::slice::from_raw_parts(mu_y, grid_len);
        let grid: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        let r = run_suite(n_max, &grid, Tolerances::default())?;
        *passed = i32::from(r.passed);
        *n_checks = r.records.len();
        *n_failed = r.failures().count();
        Ok(())
    })
}

/// Copies the last error message of this thread (NUL-terminated, truncated
/// to `len - 1` bytes) and returns its full length in bytes.
///
/// # Safety
/// `buf` must be null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sd2_last_error_message(buf: *mut c_char, len: usize) -> usize {
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

static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
    Ok(s) => s,
    Err(_) => panic!("version string"),
};

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sd2_version() -> *const c_char {
    VERSION.as_ptr()
}
