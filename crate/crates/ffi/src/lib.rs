//! C ABI for `weilmix`.
//!
//! Every function returns a [`WmStatus`]. Results come back through out-pointers
//! as opaque handles that the caller releases with the matching `*_free`
//! function. On failure, [`wm_last_error`] describes the most recent error on the
//! calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use weilmix::clgroups::{Family, GroupSpec};
use weilmix::exact::{render, to_f64, Rat};
use weilmix::fixdist::fixed_space_distribution;
use weilmix::mcengine::{self, derive_seed, mc_fixed_dim, mc_transv_product, Histogram, Level, TransvectionPool};
use weilmix::mixbounds::profile;
use weilmix::transprod::{codim_dist_gl, codim_dist_gu, codim_dist_sp, sp_odd_class_dist_mode, PairMode};
use weilmix::weilchar::WeilVariant;
use weilmix::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    LimitExceeded = 3,
    Unsupported = 4,
    IndexOutOfRange = 5,
    VerifyFailed = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WmFamily {
    Gl = 0,
    Gu = 1,
    SpOdd = 2,
    SpEven = 3,
}

/// Which transvections are multiplied (the two classes only differ for odd-q symplectic groups).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WmPairMode {
    CPairs = 0,
    CStarPairs = 1,
    All = 2,
}

/// Weil character choice; `Default` picks the natural one for the family.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WmVariant {
    Default = 0,
    Linear = 1,
    Unitary = 2,
}

/// One row of a bound profile. Missing bounds are NaN.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WmBoundRow {
    pub r: u64,
    pub upper_tv: f64,
    pub lower_tv: f64,
    pub upper_closed: f64,
    pub lower_closed: f64,
    pub chebyshev: f64,
}

/// An exact distribution: rows of (label, "p/q", approximate value).
pub struct WmTable {
    rows: Vec<(CString, CString, f64)>,
}

pub struct WmBounds {
    rows: Vec<WmBoundRow>,
}

/// A seeded Monte-Carlo source for one group. Call `k` on a sampler uses the
/// stream `derive_seed(seed, k)`, so a sequence of calls is reproducible.
pub struct WmSampler {
    spec: GroupSpec,
    seed: u64,
    calls: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> WmStatus {
    match e {
        Error::LimitExceeded { .. } | Error::FieldTooLarge { .. } => WmStatus::LimitExceeded,
        Error::Unsupported(_) => WmStatus::Unsupported,
        Error::IdentityViolated(_) | Error::SamplerCap(_) | Error::ScalarMismatch(_) => WmStatus::Internal,
        _ => WmStatus::InvalidArgument,
    }
}

/// Run `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (WmStatus, String)>) -> WmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            WmStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            WmStatus::Panic
        }
    }
}

fn lib<T>(r: weilmix::Result<T>) -> Result<T, (WmStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (WmStatus, String) {
    (WmStatus::NullPointer, "null pointer argument".into())
}

fn spec_of(family: WmFamily, n: u32, q: u64) -> Result<GroupSpec, (WmStatus, String)> {
    let family = match family {
        WmFamily::Gl => Family::GL,
        WmFamily::Gu => Family::GU,
        WmFamily::SpOdd => Family::SpOdd,
        WmFamily::SpEven => Family::SpEven,
    };
    lib(GroupSpec::new(family, n as usize, q))
}

fn mode_of(m: WmPairMode) -> PairMode {
    match m {
        WmPairMode::CPairs => PairMode::PairsFromC,
        WmPairMode::CStarPairs => PairMode::PairsFromCStar,
        WmPairMode::All => PairMode::AllTransvections,
    }
}

fn table(rows: impl IntoIterator<Item = (String, Rat)>) -> Box<WmTable> {
    let rows = rows
        .into_iter()
        .map(|(label, p)| {
            let approx = to_f64(&p);
            (CString::new(label).unwrap_or_default(), CString::new(render(&p)).unwrap_or_default(), approx)
        })
        .collect();
    Box::new(WmTable { rows })
}

fn emit<T>(out: *mut *mut T, value: Box<T>) -> Result<(), (WmStatus, String)> {
    // SAFETY: checked non-null by the caller of `emit`; the pointee is writable per the API contract.
    unsafe { *out = Box::into_raw(value) };
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wm_version() -> *const c_char {
    static V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr().cast()
}

/// Message for the last failed call on this thread (empty after a success).
/// Valid until the next `wm_*` call on the same thread.
#[no_mangle]
pub extern "C" fn wm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Codimension distribution of a product of two uniform transvections, keyed
/// "0", "1", "2". `mode` matters for sp-odd only.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn wm_pair_codim(family: WmFamily, n: u32, q: u64, mode: WmPairMode, out: *mut *mut WmTable) -> WmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec = spec_of(family, n, q)?;
        let (n, q) = (spec.n, spec.q);
        let probs = match (spec.family, mode) {
            (Family::GL, _) => lib(codim_dist_gl(n, q))?.probs,
            (Family::GU, _) => lib(codim_dist_gu(n, q))?.probs,
            (Family::SpOdd, WmPairMode::CPairs | WmPairMode::CStarPairs) => {
                lib(sp_odd_class_dist_mode(n, q, mode_of(mode)))?.codim_marginal()
            }
            _ => lib(codim_dist_sp(n, q))?.probs,
        };
        emit(out, table(probs.into_iter().enumerate().map(|(e, p)| (e.to_string(), p))))
    })
}

/// Fixed-space dimension distribution of a uniform element (unitary and symplectic groups).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn wm_fixed_space(family: WmFamily, n: u32, q: u64, out: *mut *mut WmTable) -> WmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec = spec_of(family, n, q)?;
        let d = lib(fixed_space_distribution(&spec))?;
        emit(out, table(d.probs.into_iter().enumerate().map(|(k, p)| (k.to_string(), p))))
    })
}

/// Conjugacy class distribution of a product of two transvections of `Sp_2n(q)`, odd `q`, `n ≥ 2`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn wm_sp_classes(n: u32, q: u64, mode: WmPairMode, out: *mut *mut WmTable) -> WmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let d = lib(sp_odd_class_dist_mode(n as usize, q, mode_of(mode)))?;
        emit(out, table(d.probs.into_iter().map(|(k, p)| (k.to_string(), p))))
    })
}

/// # Safety
/// `t` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn wm_table_len(t: *const WmTable) -> usize {
    // SAFETY: per the contract `t` is null or live.
    unsafe { t.as_ref() }.map_or(0, |t| t.rows.len())
}

/// Row `i`: label and exact value as NUL-terminated strings owned by the table,
/// and the value as a double. Any out-pointer may be null.
///
/// # Safety
/// `t` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn wm_table_row(
    t: *const WmTable,
    i: usize,
    label: *mut *const c_char,
    exact: *mut *const c_char,
    approx: *mut f64,
) -> WmStatus {
    guard(|| {
        // SAFETY: per the contract `t` is null or live.
        let t = unsafe { t.as_ref() }.ok_or_else(null)?;
        let (l, e, a) = t.rows.get(i).ok_or((WmStatus::IndexOutOfRange, format!("row {i} of {}", t.rows.len())))?;
        // SAFETY: non-null out-pointers are writable per the contract.
        unsafe {
            if !label.is_null() {
                *label = l.as_ptr();
            }
            if !exact.is_null() {
                *exact = e.as_ptr();
            }
            if !approx.is_null() {
                *approx = *a;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn wm_table_free(t: *mut WmTable) {
    if !t.is_null() {
        // SAFETY: `t` came from `Box::into_raw` and is released once.
        drop(unsafe { Box::from_raw(t) });
    }
}

/// Upper and lower total variation bounds for `r_min ≤ r ≤ r_max`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn wm_bounds(
    family: WmFamily,
    n: u32,
    q: u64,
    variant: WmVariant,
    r_min: u64,
    r_max: u64,
    out: *mut *mut WmBounds,
) -> WmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec = spec_of(family, n, q)?;
        let variant = match (variant, spec.family) {
            (WmVariant::Default, f) | (WmVariant::Linear, f @ Family::SpEven) => WeilVariant::default_for(f),
            (WmVariant::Unitary, Family::SpEven) => WeilVariant::SpEvenUnitary,
            _ => return Err((WmStatus::InvalidArgument, "variant only applies to sp-even".into())),
        };
        if r_min > r_max {
            return Err((WmStatus::InvalidArgument, format!("r_min {r_min} exceeds r_max {r_max}")));
        }
        let p = lib(profile(&spec, variant, r_min..=r_max))?;
        let nan = |x: Option<f64>| x.unwrap_or(f64::NAN);
        let rows = p
            .rows
            .iter()
            .map(|r| WmBoundRow {
                r: r.r,
                upper_tv: nan(r.upper_tv),
                lower_tv: nan(r.lower_tv),
                upper_closed: nan(r.upper_closed),
                lower_closed: nan(r.lower_closed),
                chebyshev: nan(r.chebyshev),
            })
            .collect();
        emit(out, Box::new(WmBounds { rows }))
    })
}

/// # Safety
/// `b` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wm_bounds_len(b: *const WmBounds) -> usize {
    // SAFETY: per the contract `b` is null or live.
    unsafe { b.as_ref() }.map_or(0, |b| b.rows.len())
}

/// # Safety
/// `b` must be a live handle and `row` writable.
#[no_mangle]
pub unsafe extern "C" fn wm_bounds_row(b: *const WmBounds, i: usize, row: *mut WmBoundRow) -> WmStatus {
    guard(|| {
        // SAFETY: per the contract.
        let b = unsafe { b.as_ref() }.ok_or_else(null)?;
        if row.is_null() {
            return Err(null());
        }
        let r = b.rows.get(i).ok_or((WmStatus::IndexOutOfRange, format!("row {i} of {}", b.rows.len())))?;
        // SAFETY: `row` is non-null and writable per the contract.
        unsafe { *row = *r };
        Ok(())
    })
}

/// # Safety
/// `b` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn wm_bounds_free(b: *mut WmBounds) {
    if !b.is_null() {
        // SAFETY: `b` came from `Box::into_raw` and is released once.
        drop(unsafe { Box::from_raw(b) });
    }
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn wm_sampler_new(family: WmFamily, n: u32, q: u64, seed: u64, out: *mut *mut WmSampler) -> WmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec = spec_of(family, n, q)?;
        emit(out, Box::new(WmSampler { spec, seed, calls: 0 }))
    })
}

fn fill(h: &Histogram<usize>, counts: *mut u64, len: usize) -> Result<(), (WmStatus, String)> {
    if counts.is_null() {
        return Err(null());
    }
    if let Some((&k, _)) = h.counts.last_key_value() {
        if k >= len {
            return Err((WmStatus::IndexOutOfRange, format!("counts buffer of length {len} cannot hold key {k}")));
        }
    }
    // SAFETY: `counts` is non-null and points to `len` writable u64 per the contract.
    let buf = unsafe { std::slice::from_raw_parts_mut(counts, len) };
    buf.fill(0);
    for (&k, &c) in &h.counts {
        buf[k] = c;
    }
    Ok(())
}

/// Histogram of fixed-space dimensions of `samples` uniform elements, written
/// to `counts[0..len]` (index = dimension).
///
/// # Safety
/// `s` must be a live sampler and `counts` must point to `len` writable integers.
#[no_mangle]
pub unsafe extern "C" fn wm_sampler_fixed_dim(s: *mut WmSampler, samples: u64, counts: *mut u64, len: usize) -> WmStatus {
    guard(|| {
        // SAFETY: per the contract.
        let s = unsafe { s.as_mut() }.ok_or_else(null)?;
        let h = lib(mc_fixed_dim(&s.spec, samples, derive_seed(s.seed, s.calls)))?;
        s.calls += 1;
        fill(&h, counts, len)
    })
}

/// Histogram of fixed-space codimensions of products of `steps` uniform
/// transvections, written to `counts[0..len]` (index = codimension).
/// `WM_PAIR_MODE_ALL` draws from every transvection; otherwise from the class of `T(1, v)`.
///
/// # Safety
/// `s` must be a live sampler and `counts` must point to `len` writable integers.
#[no_mangle]
pub unsafe extern "C" fn wm_sampler_transv_product(
    s: *mut WmSampler,
    steps: u32,
    samples: u64,
    mode: WmPairMode,
    counts: *mut u64,
    len: usize,
) -> WmStatus {
    guard(|| {
        // SAFETY: per the contract.
        let s = unsafe { s.as_mut() }.ok_or_else(null)?;
        let pool = match mode {
            WmPairMode::All => TransvectionPool::All,
            WmPairMode::CPairs => TransvectionPool::Designated,
            WmPairMode::CStarPairs => return Err((WmStatus::Unsupported, "sampling from the second class alone".into())),
        };
        let h = lib(mc_transv_product(&s.spec, steps as usize, samples, derive_seed(s.seed, s.calls), pool))?;
        s.calls += 1;
        fill(&h, counts, len)
    })
}

/// # Safety
/// `s` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn wm_sampler_free(s: *mut WmSampler) {
    if !s.is_null() {
        // SAFETY: `s` came from `Box::into_raw` and is released once.
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Run the verification suite (`full != 0` for the complete grids). Returns
/// `WM_STATUS_VERIFY_FAILED` if any check fails; the number of failing checks
/// goes to `failures` when it is non-null.
///
/// # Safety
/// `failures` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn wm_verify(full: i32, failures: *mut u32) -> WmStatus {
    guard(|| {
        let level = if full != 0 { Level::Full } else { Level::Quick };
        let report = mcengine::verify(level, None);
        let failed: Vec<_> = report.failures().collect();
        if !failures.is_null() {
            // SAFETY: non-null and writable per the contract.
            unsafe { *failures = failed.len() as u32 };
        }
        match failed.first() {
            None => Ok(()),
            Some(c) => Err((WmStatus::VerifyFailed, format!("{}: {}", c.name, c.details))),
        }
    })
}

/// [`wm_last_error`] as an owned string, for Rust callers.
pub fn last_error_string() -> String {
    // SAFETY: the pointer refers to the thread-local string, alive for this call.
    unsafe { CStr::from_ptr(wm_last_error()) }.to_string_lossy().into_owned()
}
