//! C ABI over `dgegen`.
//!
//! Every function returns a [`DgegenStatus`] and writes results through out
//! pointers. On failure the out pointers are left untouched and a message is
//! kept per thread; [`dgegen_last_error`] returns it. Panics are caught at the
//! boundary and reported as `DGEGEN_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dgegen::expansion::{self, BVariant, CoeffTable, ExpansionParams};
use dgegen::{orthopoly, specfun, verify, Error};

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgegenStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Pole = 3,
    Divergent = 4,
    NoConvergence = 5,
    Hypothesis = 6,
    Panic = 7,
}

/// `B` with the `(s - x t)_+` kernel.
pub const DGEGEN_VARIANT_PLUS: u32 = 0;
/// `B` with the `(s - x t)_-` kernel.
pub const DGEGEN_VARIANT_MINUS: u32 = 1;
pub const DGEGEN_VARIANT_ABS: u32 = 2;
pub const DGEGEN_VARIANT_ABSSGN: u32 = 3;

/// Opaque coefficient table.
pub struct DgegenCoeffTable(CoeffTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DgegenStatus {
    match e {
        Error::Pole(_) => DgegenStatus::Pole,
        Error::Divergent(_) => DgegenStatus::Divergent,
        Error::Hypothesis { .. } => DgegenStatus::Hypothesis,
        Error::SeriesCap(_)
        | Error::UnboundedOrder { .. }
        | Error::EigenConvergence(_)
        | Error::NonConvergence { .. } => DgegenStatus::NoConvergence,
        Error::Domain(_) | Error::Integrability(_) => DgegenStatus::Domain,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DgegenStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DgegenStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            DgegenStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            DgegenStatus::Panic
        }
    }
}

fn write<T>(out: *mut T, what: &'static str, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    // SAFETY: non-null, and the caller guarantees it points to writable memory
    unsafe { out.write(value) };
    Ok(())
}

fn variant(v: u32) -> Result<BVariant, Fail> {
    Ok(match v {
        DGEGEN_VARIANT_PLUS => BVariant::PlusPart,
        DGEGEN_VARIANT_MINUS => BVariant::MinusPart,
        DGEGEN_VARIANT_ABS => BVariant::Abs,
        DGEGEN_VARIANT_ABSSGN => BVariant::AbsSgn,
        _ => return Err(Fail::Lib(Error::Domain(format!("unknown variant {v}")))),
    })
}

fn params(lambda: f64, mu: f64, nu: f64, eps: u32) -> Result<ExpansionParams, Fail> {
    let eps = u8::try_from(eps).map_err(|_| Error::Domain(format!("eps must be 0 or 1 (got {eps})")))?;
    Ok(ExpansionParams::new(lambda, mu, nu, eps)?)
}

/// Message for the last failed call on this thread, or NULL after a
/// successful one. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn dgegen_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `log |Gamma(x)|`.
#[no_mangle]
pub extern "C" fn dgegen_log_gamma(x: f64, out: *mut f64) -> DgegenStatus {
    guard(|| write(out, "out", specfun::log_gamma(x)?))
}

/// `1 / Gamma(x)`, zero at the poles.
#[no_mangle]
pub extern "C" fn dgegen_rgamma(x: f64, out: *mut f64) -> DgegenStatus {
    guard(|| write(out, "out", specfun::rgamma(x)))
}

/// Gauss hypergeometric `2F1(a, b; c; z)` for real `z <= 1`.
#[no_mangle]
pub extern "C" fn dgegen_hyp2f1(a: f64, b: f64, c: f64, z: f64, out: *mut f64) -> DgegenStatus {
    guard(|| write(out, "out", specfun::hyp2f1_value(a, b, c, z)?))
}

/// Gegenbauer polynomial `C_n^lambda(x)`.
#[no_mangle]
pub extern "C" fn dgegen_gegenbauer(lambda: f64, n: usize, x: f64, out: *mut f64) -> DgegenStatus {
    guard(|| write(out, "out", orthopoly::gegenbauer(lambda, n, x)))
}

/// Single expansion coefficient `b_{l,m}`, zero for the wrong parity.
#[no_mangle]
pub extern "C" fn dgegen_coeff_b(
    lambda: f64,
    mu: f64,
    nu: f64,
    eps: u32,
    ell: usize,
    m: usize,
    out: *mut f64,
) -> DgegenStatus {
    guard(|| {
        let p = params(lambda, mu, nu, eps)?;
        let v = if (ell + m) % 2 == eps as usize { expansion::coeff_b(&p, ell, m)? } else { 0.0 };
        write(out, "out", v)
    })
}

/// Builds the table `b_{l,m}`, `0 <= l <= l_max`, `0 <= m <= m_max`. Release
/// it with [`dgegen_coeff_table_free`].
#[no_mangle]
pub extern "C" fn dgegen_coeff_table_new(
    lambda: f64,
    mu: f64,
    nu: f64,
    eps: u32,
    l_max: usize,
    m_max: usize,
    out: *mut *mut DgegenCoeffTable,
) -> DgegenStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let table = expansion::coeff_table(&params(lambda, mu, nu, eps)?, l_max, m_max)?;
        write(out, "out", Box::into_raw(Box::new(DgegenCoeffTable(table))))
    })
}

/// Entry `(ell, m)` of a table; domain error outside its range.
///
/// # Safety
/// `table` must be NULL or a live pointer from [`dgegen_coeff_table_new`].
#[no_mangle]
pub unsafe extern "C" fn dgegen_coeff_table_get(
    table: *const DgegenCoeffTable,
    ell: usize,
    m: usize,
    out: *mut f64,
) -> DgegenStatus {
    guard(|| {
        // SAFETY: per the contract above
        let t = &unsafe { table.as_ref() }.ok_or(Fail::Null("table"))?.0;
        if ell > t.l_max || m > t.m_max {
            return Err(Error::Domain(format!("({ell}, {m}) outside the {}x{} table", t.l_max, t.m_max)).into());
        }
        write(out, "out", t.get(ell, m))
    })
}

/// Truncation orders the table was built with.
///
/// # Safety
/// `table` must be NULL or a live pointer from [`dgegen_coeff_table_new`].
#[no_mangle]
pub unsafe extern "C" fn dgegen_coeff_table_dims(
    table: *const DgegenCoeffTable,
    l_max: *mut usize,
    m_max: *mut usize,
) -> DgegenStatus {
    guard(|| {
        // SAFETY: per the contract above
        let t = &unsafe { table.as_ref() }.ok_or(Fail::Null("table"))?.0;
        if m_max.is_null() {
            return Err(Fail::Null("m_max"));
        }
        write(l_max, "l_max", t.l_max)?;
        write(m_max, "m_max", t.m_max)
    })
}

/// Releases a table. NULL is accepted.
///
/// # Safety
/// `table` must be NULL or a pointer from [`dgegen_coeff_table_new`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn dgegen_coeff_table_free(table: *mut DgegenCoeffTable) {
    if !table.is_null() {
        // SAFETY: per the contract above; dropping cannot panic
        drop(unsafe { Box::from_raw(table) });
    }
}

/// Truncated series at `(s, t)` with its tail bound. With `force` set the
/// convergence hypothesis is not enforced and the bound is infinite.
#[no_mangle]
pub extern "C" fn dgegen_series_eval(
    lambda: f64,
    mu: f64,
    nu: f64,
    eps: u32,
    s: f64,
    t: f64,
    l_max: usize,
    m_max: usize,
    force: bool,
    value: *mut f64,
    tail_bound: *mut f64,
) -> DgegenStatus {
    guard(|| {
        if tail_bound.is_null() {
            return Err(Fail::Null("tail_bound"));
        }
        let r = expansion::series_eval(&params(lambda, mu, nu, eps)?, s, t, l_max, m_max, force)?;
        write(value, "value", r.value)?;
        write(tail_bound, "tail_bound", r.tail_bound)
    })
}

/// Closed form of the sheared integral `B_{l,m}(x)` for a kernel variant.
#[no_mangle]
pub extern "C" fn dgegen_integral_b(
    variant_code: u32,
    lambda: f64,
    mu: f64,
    nu: f64,
    ell: usize,
    m: usize,
    x: f64,
    out: *mut f64,
) -> DgegenStatus {
    guard(|| write(out, "out", expansion::integral_b_variant(variant(variant_code)?, lambda, mu, nu, ell, m, x)?))
}

/// Quadrature value of the same integral, refined to `tol`.
#[no_mangle]
pub extern "C" fn dgegen_oracle_integral_b(
    variant_code: u32,
    lambda: f64,
    mu: f64,
    nu: f64,
    ell: usize,
    m: usize,
    x: f64,
    tol: f64,
    out: *mut f64,
) -> DgegenStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let v = verify::check_b(variant(variant_code)?, lambda, mu, nu, ell, m, x, tol).oracle?;
        write(out, "out", v)
    })
}
