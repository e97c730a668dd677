use std::ffi::{c_char, CStr};
use std::ptr;

use weilmix_ffi::*;

fn s(p: *const c_char) -> String {
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn rows(t: *const WmTable) -> Vec<(String, String, f64)> {
    (0..unsafe { wm_table_len(t) })
        .map(|i| {
            let (mut l, mut e, mut a) = (ptr::null(), ptr::null(), 0.0);
            assert_eq!(unsafe { wm_table_row(t, i, &mut l, &mut e, &mut a) }, WmStatus::Ok);
            (s(l), s(e), a)
        })
        .collect()
}

#[test]
fn version_string() {
    assert_eq!(s(wm_version()), env!("CARGO_PKG_VERSION"));
}

#[test]
fn pair_codim_table() {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { wm_pair_codim(WmFamily::Gl, 2, 2, WmPairMode::All, &mut t) }, WmStatus::Ok);
    let r = rows(t);
    let exact: Vec<_> = r.iter().map(|x| x.1.as_str()).collect();
    assert_eq!(exact, ["1/3", "0", "2/3"]);
    assert!((r[2].2 - 2.0 / 3.0).abs() < 1e-15);
    let mut out = (ptr::null(), ptr::null(), 0.0);
    assert_eq!(unsafe { wm_table_row(t, 3, &mut out.0, &mut out.1, &mut out.2) }, WmStatus::IndexOutOfRange);
    unsafe { wm_table_free(t) };
}

#[test]
fn class_table_and_fixed_space() {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { wm_sp_classes(2, 3, WmPairMode::CPairs, &mut t) }, WmStatus::Ok);
    let r = rows(t);
    let got: Vec<_> = r.iter().map(|x| (x.0.as_str(), x.1.as_str())).collect();
    assert_eq!(got, [("A22", "1/40"), ("A32", "3/10"), ("D22", "27/40")]);
    unsafe { wm_table_free(t) };
    assert_eq!(unsafe { wm_fixed_space(WmFamily::Gu, 2, 2, &mut t) }, WmStatus::Ok);
    let exact: Vec<_> = rows(t).into_iter().map(|x| x.1).collect();
    assert_eq!(exact, ["5/9", "7/18", "1/18"]);
    unsafe { wm_table_free(t) };
}

#[test]
fn errors_are_reported() {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { wm_pair_codim(WmFamily::SpOdd, 2, 4, WmPairMode::All, &mut t) }, WmStatus::InvalidArgument);
    assert!(t.is_null());
    assert!(last_error_string().contains("odd q"));
    assert_eq!(unsafe { wm_fixed_space(WmFamily::Gl, 2, 3, &mut t) }, WmStatus::Unsupported);
    assert_eq!(unsafe { wm_pair_codim(WmFamily::Gl, 2, 6, WmPairMode::All, &mut t) }, WmStatus::InvalidArgument);
    assert_eq!(unsafe { wm_pair_codim(WmFamily::Gl, 2, 3, WmPairMode::All, ptr::null_mut()) }, WmStatus::NullPointer);
    assert_eq!(unsafe { wm_table_len(ptr::null()) }, 0);
    unsafe { wm_table_free(ptr::null_mut()) };
    assert_eq!(unsafe { wm_pair_codim(WmFamily::Gl, 2, 3, WmPairMode::All, &mut t) }, WmStatus::Ok);
    assert_eq!(last_error_string(), "");
    unsafe { wm_table_free(t) };
}

#[test]
fn bounds_rows() {
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { wm_bounds(WmFamily::Gu, 50, 9, WmVariant::Default, 44, 54, &mut b) }, WmStatus::Ok);
    assert_eq!(unsafe { wm_bounds_len(b) }, 11);
    let mut row = WmBoundRow { r: 0, upper_tv: 0.0, lower_tv: 0.0, upper_closed: 0.0, lower_closed: 0.0, chebyshev: 0.0 };
    assert_eq!(unsafe { wm_bounds_row(b, 8, &mut row) }, WmStatus::Ok);
    assert_eq!(row.r, 52);
    assert!(row.upper_closed <= 0.0087);
    assert!(row.lower_closed.is_nan());
    assert_eq!(unsafe { wm_bounds_row(b, 2, &mut row) }, WmStatus::Ok);
    assert!(row.lower_closed >= 0.97);
    unsafe { wm_bounds_free(b) };
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { wm_bounds(WmFamily::Gu, 5, 3, WmVariant::Unitary, 1, 2, &mut b) }, WmStatus::InvalidArgument);
    assert_eq!(unsafe { wm_bounds(WmFamily::SpEven, 5, 2, WmVariant::Unitary, 3, 2, &mut b) }, WmStatus::InvalidArgument);
}

#[test]
fn sampler_streams_are_reproducible() {
    let run = || {
        let mut sm = ptr::null_mut();
        assert_eq!(unsafe { wm_sampler_new(WmFamily::SpOdd, 2, 3, 99, &mut sm) }, WmStatus::Ok);
        let mut a = [0u64; 5];
        let mut b = [0u64; 3];
        assert_eq!(unsafe { wm_sampler_fixed_dim(sm, 2000, a.as_mut_ptr(), a.len()) }, WmStatus::Ok);
        assert_eq!(unsafe { wm_sampler_transv_product(sm, 1, 500, WmPairMode::All, b.as_mut_ptr(), b.len()) }, WmStatus::Ok);
        unsafe { wm_sampler_free(sm) };
        (a, b)
    };
    let (a, b) = run();
    assert_eq!((a, b), run());
    assert_eq!(a.iter().sum::<u64>(), 2000);
    assert_eq!(b, [0, 500, 0]);
    let mut sm = ptr::null_mut();
    unsafe { wm_sampler_new(WmFamily::Gl, 3, 2, 1, &mut sm) };
    let mut small = [0u64; 1];
    assert_eq!(unsafe { wm_sampler_fixed_dim(sm, 100, small.as_mut_ptr(), 1) }, WmStatus::IndexOutOfRange);
    assert_eq!(unsafe { wm_sampler_transv_product(sm, 0, 10, WmPairMode::CPairs, small.as_mut_ptr(), 1) }, WmStatus::InvalidArgument);
    unsafe { wm_sampler_free(sm) };
}

#[test]
fn quick_verification_passes() {
    let mut failures = 7;
    assert_eq!(unsafe { wm_verify(0, &mut failures) }, WmStatus::Ok);
    assert_eq!(failures, 0);
}
