use std::ffi::{CStr, CString};
use std::ptr;

use birelab_ffi::*;

fn last_error() -> String {
    let p = birelab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn example_matrix() -> [f64; 36] {
    let mut m = [0.0; 36];
    for (i, d) in [-1.0, 1.0, 0.0, -1.0, 1.0, 0.0].iter().enumerate() {
        m[7 * i] = *d;
    }
    m
}

#[test]
fn example_medium_through_the_abi() {
    unsafe {
        let mut medium = ptr::null_mut();
        assert_eq!(birelab_medium_from_matrix(example_matrix().as_ptr(), &mut medium), BirelabStatus::Ok);
        assert!(birelab_last_error().is_null());

        let mut back = [0.0; 36];
        assert_eq!(birelab_medium_matrix(medium, back.as_mut_ptr()), BirelabStatus::Ok);
        assert_eq!(back, example_matrix());

        let mut skewon_free = false;
        assert_eq!(birelab_medium_is_skewon_free(medium, 1e-9, &mut skewon_free), BirelabStatus::Ok);
        assert!(skewon_free);

        let mut quartic = ptr::null_mut();
        assert_eq!(birelab_medium_quartic(medium, &mut quartic), BirelabStatus::Ok);
        let mut coeffs = [0.0; 35];
        assert_eq!(birelab_quartic_coefficients(quartic, coeffs.as_mut_ptr()), BirelabStatus::Ok);
        assert_eq!(coeffs.iter().filter(|c| **c != 0.0).count(), 1);
        let mut value = 0.0;
        assert_eq!(birelab_quartic_evaluate(quartic, [1.0, 1.0, 1.0, 1.0].as_ptr(), &mut value), BirelabStatus::Ok);
        assert!((value - 4.0).abs() < 1e-12);

        let mut fac = ptr::null_mut();
        assert_eq!(birelab_quartic_factor(quartic, &mut fac), BirelabStatus::Ok);
        let mut tag = BirelabTag::DoubleLightCone;
        assert_eq!(birelab_factorization_tag(fac, &mut tag), BirelabStatus::Ok);
        assert_eq!(tag, BirelabTag::ReducibleNonLorentz);

        // singular medium: no metaclass
        let mut name = ptr::null_mut();
        assert_eq!(birelab_medium_metaclass(medium, &mut name), BirelabStatus::SingularMedium);
        assert!(name.is_null());
        assert!(last_error().contains("not invertible"));

        let mut json = ptr::null_mut();
        assert_eq!(birelab_medium_analyze(medium, &mut json), BirelabStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        assert!(text.contains("\"metaclass\": \"not classified (singular)\""));
        birelab_string_free(json);

        birelab_factorization_free(fac);
        birelab_quartic_free(quartic);
        birelab_medium_free(medium);
    }
}

#[test]
fn birefringent_normal_form() {
    let params = CString::new(r#"{"class":"II","alpha":[0.3,0.3],"beta":[2,2]}"#).unwrap();
    unsafe {
        let mut medium = ptr::null_mut();
        assert_eq!(birelab_medium_construct(params.as_ptr(), &mut medium), BirelabStatus::Ok);
        let mut name = ptr::null_mut();
        assert_eq!(birelab_medium_metaclass(medium, &mut name), BirelabStatus::Ok);
        assert_eq!(CStr::from_ptr(name).to_str().unwrap(), "II");
        birelab_string_free(name);

        let mut quartic = ptr::null_mut();
        assert_eq!(birelab_medium_quartic(medium, &mut quartic), BirelabStatus::Ok);
        let mut fac = ptr::null_mut();
        assert_eq!(birelab_quartic_factor(quartic, &mut fac), BirelabStatus::Ok);
        let mut tag = BirelabTag::NoQuadricFactorization;
        birelab_factorization_tag(fac, &mut tag);
        assert_eq!(tag, BirelabTag::DoubleLightCone);

        let (mut a, mut b, mut c) = ([0.0; 16], [0.0; 16], 0.0);
        assert_eq!(birelab_factorization_quadrics(fac, a.as_mut_ptr(), b.as_mut_ptr(), &mut c), BirelabStatus::Ok);
        // canonical gauge of the closed-form cones: pivot beta at (0,3)
        assert!((a[3] - 1.0).abs() < 1e-7 && (b[3] - 1.0).abs() < 1e-7);
        assert!((a[0] + 0.5).abs() < 1e-7 && (b[0] - 0.5).abs() < 1e-7);
        assert!((c - 2.0 * 4.0).abs() < 1e-6);
        let mut residual = 1.0;
        birelab_factorization_residual(fac, &mut residual);
        assert!(residual < 1e-8);

        let mut json = ptr::null_mut();
        assert_eq!(birelab_factorization_to_json(fac, &mut json), BirelabStatus::Ok);
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("DoubleLightCone"));
        birelab_string_free(json);

        birelab_factorization_free(fac);
        birelab_quartic_free(quartic);
        birelab_medium_free(medium);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut medium = ptr::null_mut();
        assert_eq!(birelab_medium_from_matrix(ptr::null(), &mut medium), BirelabStatus::NullPointer);
        assert!(last_error().contains("null"));
        assert!(medium.is_null());

        let bad = CString::new(r#"{"class":"I","alpha":[0],"beta":[1,1,1]}"#).unwrap();
        assert_eq!(birelab_medium_construct(bad.as_ptr(), &mut medium), BirelabStatus::InvalidInput);
        assert!(!last_error().is_empty());

        let junk = CString::new("{").unwrap();
        assert_eq!(birelab_medium_from_json(junk.as_ptr(), &mut medium), BirelabStatus::InvalidInput);

        let mut nan = example_matrix();
        nan[5] = f64::NAN;
        assert_eq!(birelab_medium_from_matrix(nan.as_ptr(), &mut medium), BirelabStatus::InvalidInput);

        let mut ill = [0.0; 36];
        for (i, d) in [1.0, 1.0 + 3e-7, 2.0, 1.0, 1.0 + 3e-7, 2.0].iter().enumerate() {
            ill[7 * i] = *d;
        }
        assert_eq!(birelab_medium_from_matrix(ill.as_ptr(), &mut medium), BirelabStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(birelab_medium_analyze(medium, &mut json), BirelabStatus::IllConditioned);
        birelab_medium_free(medium);

        let mut value = 0.0;
        assert_eq!(birelab_quartic_evaluate(ptr::null(), [0.0; 4].as_ptr(), &mut value), BirelabStatus::NullPointer);
        birelab_medium_free(ptr::null_mut());
        birelab_string_free(ptr::null_mut());
    }
}

#[test]
fn zero_quartic_is_a_numerical_failure() {
    unsafe {
        let mut medium = ptr::null_mut();
        birelab_medium_from_matrix([0.0; 36].as_ptr(), &mut medium);
        let mut quartic = ptr::null_mut();
        assert_eq!(birelab_medium_quartic(medium, &mut quartic), BirelabStatus::Ok);
        let mut fac = ptr::null_mut();
        assert_eq!(birelab_quartic_factor(quartic, &mut fac), BirelabStatus::NumericalFailure);
        assert!(last_error().contains("zero"));
        birelab_quartic_free(quartic);
        birelab_medium_free(medium);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/birelab.h");
    for name in [
        "birelab_last_error",
        "birelab_string_free",
        "birelab_medium_from_matrix",
        "birelab_medium_from_json",
        "birelab_medium_construct",
        "birelab_medium_free",
        "birelab_medium_matrix",
        "birelab_medium_is_skewon_free",
        "birelab_medium_metaclass",
        "birelab_medium_analyze",
        "birelab_medium_quartic",
        "birelab_quartic_free",
        "birelab_quartic_coefficients",
        "birelab_quartic_evaluate",
        "birelab_quartic_factor",
        "birelab_factorization_free",
        "birelab_factorization_tag",
        "birelab_factorization_quadrics",
        "birelab_factorization_residual",
        "birelab_factorization_to_json",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("BIRELAB_STATUS_ILL_CONDITIONED = 3"));
}
