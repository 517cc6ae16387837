use super::*;

fn config(backend: &str, dims: &[usize], mutant: Option<&str>) -> AuditConfig {
    let mut cfg = AuditConfig::new(backend);
    cfg.dims = dims.to_vec();
    cfg.mutant = mutant.map(str::to_string);
    cfg
}

fn audit(backend: &str, dims: &[usize], mutant: Option<&str>, samples: usize) -> AuditReport {
    let mut cfg = config(backend, dims, mutant);
    cfg.samples = samples;
    run_audit(&cfg).unwrap()
}

fn failing(r: &AuditReport) -> Vec<&str> {
    r.entries.iter().filter(|e| !e.pass).map(|e| e.check.as_str()).collect()
}

#[test]
fn quant_complex_passes_everything() {
    let r = audit("cpmC", &[2, 3], None, 200);
    assert!(r.passed(), "{:?}", failing(&r));
    assert_eq!(r.entries.len(), Principle::ALL.len() - 1);
    let names: Vec<&str> = r.entries.iter().map(|e| e.check.as_str()).collect();
    let declared: Vec<&str> = Principle::ALL.iter().filter(|p| p.has_own_entry()).map(|p| p.name()).collect();
    assert_eq!(names, declared);
}

#[test]
fn quant_real_passes_everything() {
    let r = audit("cpmR", &[2, 3], None, 200);
    assert!(r.passed(), "{:?}", failing(&r));
}

#[test]
fn local_tomography_separates_real_from_complex() {
    let c = audit("cpmC", &[2], None, 10);
    let r = audit("cpmR", &[2], None, 10);
    let note = |rep: &AuditReport| rep.entry("local_tomography").unwrap().notes[0].clone();
    assert!(note(&c).ends_with(": locally tomographic"));
    assert!(note(&r).contains("not locally tomographic"));
}

#[test]
fn non_isometric_kernels_are_caught() {
    let r = audit("cpmC", &[2, 3], Some("non_isometric_kernels"), 50);
    let bad = failing(&r);
    for check in ["kernels_causally_complemented", "pure_exclusion", "perfect_distinguishability", "boundedness_dims"] {
        assert!(bad.contains(&check), "{check} not caught: {bad:?}");
    }
    let e = r.entry("kernels_causally_complemented").unwrap();
    assert!(!e.witnesses.is_empty() && !e.witnesses[0].inputs.is_empty());
}

#[test]
fn non_central_phases_are_caught() {
    let r = audit("cpmC", &[2, 3], Some("non_central_phases"), 50);
    assert_eq!(failing(&r), vec!["phased_ring_scalars"]);
    assert!(!r.entry("phased_ring_scalars").unwrap().witnesses.is_empty());
}

#[test]
fn transpose_composed_is_not_cp() {
    let r = audit("cpmC", &[2, 3], Some("transpose_composed"), 50);
    let e = r.entry("strong_purification").unwrap();
    assert!(!e.pass);
    assert!(e.witnesses[0].message.contains("not pure and CP"));
    assert_eq!(e.witnesses[0].inputs.len(), 2);
}

#[test]
fn missing_dagger_gives_structured_failures() {
    let r = audit("cpmR", &[2], Some("no_dagger"), 20);
    let e = r.entry("strong_purification").unwrap();
    assert!(!e.pass);
    assert!(e.witnesses[0].message.contains("dagger"));
}

#[test]
fn mspek_supports_purification_exclusion_and_cp() {
    let r = audit("mspek", &[1], None, 50);
    assert!(r.passed(), "{:?}", failing(&r));
    let names: Vec<&str> = r.entries.iter().map(|e| e.check.as_str()).collect();
    assert_eq!(names, vec!["strong_purification", "pure_exclusion", "cp_axiom"]);
}

#[test]
fn mspek_rejects_unavailable_checks() {
    let mut cfg = config("mspek", &[1], None);
    cfg.checks = vec!["homogeneity".into()];
    assert!(matches!(run_audit(&cfg), Err(Error::Invalid(_))));
}

#[test]
fn unsaturated_closures_abort() {
    let err = SpekTheory::generate(1, 500).unwrap_err();
    assert!(matches!(&err, Error::Precondition(m) if m.contains("did not saturate")));
}

#[test]
fn unknown_names_are_config_errors() {
    let mut cfg = config("cpmC", &[2], None);
    cfg.checks = vec!["no_such".into()];
    assert!(matches!(run_audit(&cfg), Err(Error::Invalid(m)) if m.contains("no_such")));
    assert!(run_audit(&config("nope", &[2], None)).is_err());
    assert!(run_audit(&config("cpmC", &[2], Some("nope"))).is_err());
    assert!(run_audit(&config("cpmC", &[0], None)).is_err());
    assert!(run_audit(&config("mspek", &[1], Some("no_dagger"))).is_err());
}

#[test]
fn config_json_defaults_and_strictness() {
    let cfg = AuditConfig::from_json(&serde_json::json!({"backend": "cpmC"})).unwrap();
    assert_eq!((cfg.samples, cfg.seed, cfg.tol), (200, 42, 1e-9));
    assert_eq!(cfg.checks, vec!["all".to_string()]);
    let v = cfg.validate().unwrap();
    assert_eq!(v.dims, vec![2, 3]);
    assert!(AuditConfig::from_json(&serde_json::json!({"backend": "cpmC", "extra": 1})).is_err());
}

#[test]
fn ideal_compression_maps_to_its_combined_entry() {
    let mut cfg = config("cpmC", &[2], None);
    cfg.checks = vec!["ideal_compression".into(), "perfect_distinguishability".into()];
    assert_eq!(cfg.validate().unwrap().checks, vec![Principle::PerfectDistinguishability]);
}

#[test]
fn reports_are_deterministic() {
    let mut cfg = config("cpmC", &[2, 3], None);
    cfg.samples = 30;
    let a = serde_json::to_string(&run_audit(&cfg).unwrap().to_json()).unwrap();
    let b = serde_json::to_string(&run_audit(&cfg).unwrap().to_json()).unwrap();
    assert_eq!(a, b);
    cfg.seed = 7;
    let c = serde_json::to_string(&run_audit(&cfg).unwrap().to_json()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn report_roundtrips_through_json() {
    let r = audit("cpmC", &[2], Some("non_central_phases"), 10);
    let back: AuditReport = serde_json::from_value(r.to_json()).unwrap();
    assert_eq!(back, r);
    assert!(r.summary().contains("[FAIL] phased_ring_scalars"));
}

#[test]
fn homogeneity_handles_zero_and_equal() {
    let t = QuantumTheory::<Complex64>::new(1e-9, None);
    let z: crate::Mat<Complex64> = crate::Mat::zeros(3, 2);
    let u = homogeneity_unitary(&t, &z, &z).unwrap();
    assert!(crate::linalg::isometry_defect(&u) < 1e-9);
    let f: crate::Mat<Complex64> = crate::Mat::identity(2);
    let u = homogeneity_unitary(&t, &f, &f).unwrap();
    assert!(u.deviation(&f) < 1e-9);
}

#[test]
fn half_depolarizing_has_environment_four() {
    let f = half_depolarizing::<Complex64>();
    assert!(crate::cpm::is_cpm_causal(&f, 1e-12));
    assert_eq!(crate::cpm::purify(&f, 1e-9).unwrap().1, 4);
}

#[test]
fn splitting_recovers_dimension() {
    let t = QuantumTheory::<f64>::new(1e-9, None);
    for n in 0..=4 {
        let mut rng = crate::catcore::sample_rng(1, 2, n as u64);
        assert_eq!(split_dimension(&t, &mut rng, n).len(), n);
    }
}
