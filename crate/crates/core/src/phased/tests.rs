use super::*;

const TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[test]
fn canonical_form_is_phase_invariant() {
    let f = Mat::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, 2.0), c(1.0, 1.0), c(3.0, 0.0)]).unwrap();
    let g = f.scale(&c(0.6, -0.8));
    let (x, y) = (canonicalize(&f, TOL), canonicalize(&g, TOL));
    assert!(x.representative.distance_fro(&y.representative) < 1e-12);
    assert!((x.representative.get(0, 1).re - 2.0).abs() < 1e-12);
}

#[test]
fn zero_is_canonical() {
    let z: Mat<C> = Mat::zeros(2, 3);
    assert_eq!(canonicalize(&z, TOL).representative, z);
}

#[test]
fn quotient_json_roundtrip() {
    let q = canonicalize(&Mat::identity(2), TOL);
    let back = QuotMorphism::from_json(&q.to_json()).unwrap();
    assert_eq!(back, q);
    assert!(QuotMorphism::from_json(&json!({"representative": q.representative.to_json(), "phase_group": "nope"})).is_err());
}

#[test]
fn phase_between_detects_non_phases() {
    let f: Mat<C> = Mat::identity(2);
    assert!(phase_between(&f.scale(&c(0.0, 1.0)), &f, TOL).is_some());
    assert!(phase_between(&f.scale(&c(2.0, 0.0)), &f, TOL).is_none());
    assert!(phase_between(&phase_on(1, 1, c(-1.0, 0.0)), &f, TOL).is_none());
}

#[test]
fn quotient_soundness_passes() {
    assert!(check_quotient_soundness(4, 200, 42, TOL).passed());
}

#[test]
fn phased_coproduct_passes() {
    let r = check_phased_coproduct(4, 200, 42, 1e-8);
    assert!(r.passed(), "{:?}", r.failures);
}

#[test]
fn uniqueness_phase_rejects_mismatch() {
    let h = QuotMorphism::new(Mat::identity(2));
    let h2 = QuotMorphism::new(Mat::diag(&[c(1.0, 0.0), c(2.0, 0.0)]));
    assert!(matches!(uniqueness_phase(&h, &h2, 1, TOL), Err(Error::Precondition(_))));
}

#[test]
fn dagger_biproduct_passes() {
    assert!(check_dagger_biproduct(4, TOL).passed());
}

#[test]
fn circle_phases_generate() {
    let r = check_phase_generator(&GroupPhases(PhaseGroup::Circle), 4, 200, 42, 1e-8);
    assert!(r.passed(), "{:?}", r.failures);
    assert!(check_phase_generator(&GroupPhases(PhaseGroup::Trivial), 4, 50, 42, 1e-8).passed());
}

#[test]
fn non_central_phases_fail_generation() {
    let r = check_phase_generator(&NonCentralPhases, 4, 200, 42, 1e-8);
    assert!(!r.passed());
}

#[test]
fn positive_freeness_holds_on_circle_and_gauss_units() {
    assert!(circle_positive_freeness(200, 42, TOL).passed());
    assert!(gauss_units_positive_freeness(200, 42).passed());
}

#[test]
fn trivial_involution_breaks_positive_freeness() {
    let r = trivial_involution_positive_freeness(200, 42);
    assert!(!r.passed());
    let witness = Mat::diag(&[GaussRatTrivial::from_ints(1, 0), GaussRatTrivial::from_ints(-1, 0)]).to_json();
    assert!(r.failures.iter().any(|f| f.inputs.contains(&witness)));
}

#[test]
fn gauss_units_have_norm_one() {
    let mut rng = sample_rng(1, 0, 0);
    for _ in 0..50 {
        let u = gauss_unit(&mut rng);
        assert!(u.conj().mul(&u).approx_eq(&GaussRat::one(), 0.0));
    }
}

#[test]
fn gp_roundtrip_passes() {
    let r = gp_roundtrip_check(4, 200, 42, 1e-8);
    assert!(r.passed(), "{:?}", r.failures);
}

#[test]
fn gp_scalars_are_units() {
    let u = c(0.28, 0.96);
    let q = canonicalize(&gp_embed(&Mat::scalar(u)), TOL);
    let s = gp_extract(&q).unwrap();
    assert!((s.get(0, 0) - u).norm() < 1e-12);
    assert!(is_gp_morphism(&q, TOL));
}

#[test]
fn gp_rejects_missing_block() {
    let q = QuotMorphism::new(Mat::from_vec(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap());
    assert!(gp_extract(&q).is_err());
    assert!(!is_gp_morphism(&q, TOL));
}
