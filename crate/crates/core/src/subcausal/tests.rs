use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use super::*;
use crate::cpm::{dbl, Quant, QuantReal};
use crate::scalars::Complex64;

fn q(n: u64, d: u64) -> RatNonneg {
    RatNonneg::frac(n, d)
}

#[test]
fn column_sums_below_one_are_sub_causal() {
    let t = MatCat::<f64>::new();
    let m = Mat::from_vec(2, 2, vec![0.1, 0.4, 0.2, 0.5]).unwrap();
    assert!(t.is_sub_causal(&m));
    let over = Mat::from_vec(2, 1, vec![0.6, 0.5]).unwrap();
    assert!(!t.is_sub_causal(&over));
    let e = MatCat::<RatNonneg>::new();
    assert!(e.is_sub_causal(&Mat::from_vec(1, 2, vec![q(3, 10), q(9, 10)]).unwrap()));
    assert!(!e.is_sub_causal(&Mat::from_vec(2, 1, vec![q(1, 2), q(2, 3)]).unwrap()));
}

#[test]
fn doubled_scaled_identity_is_not_sub_causal() {
    let two = Mat::<Complex64>::identity(2).scale(&Complex64::new(2.0, 0.0));
    assert!(!Quant::new().is_sub_causal(&dbl(&two)));
    let half = Mat::<Complex64>::identity(2).scale(&Complex64::new(0.5, 0.0));
    assert!(Quant::new().is_sub_causal(&dbl(&half)));
    assert!(Quant::new().is_sub_causal(&dbl(&Mat::identity(3))));
}

#[test]
fn every_relation_is_sub_causal() {
    let mut rng = SampleRng::seed_from_u64(1);
    for _ in 0..50 {
        let r = RelSubCausalSampler.arbitrary(&RelCat::new(), &mut rng, 3, 4);
        assert!(RelCat::new().is_sub_causal(&r));
    }
}

#[test]
fn ovee_is_partial() {
    let t = MatCat::<RatNonneg>::new();
    let pa = PartialAdd::new(&t);
    let f = Mat::row(vec![q(1, 2)]);
    assert_eq!(pa.ovee(&f, &f).unwrap(), Some(Mat::row(vec![q(1, 1)])));
    let g = Mat::row(vec![q(2, 3)]);
    assert_eq!(pa.ovee(&f, &g).unwrap(), None);
    assert!(pa.ovee(&f, &Mat::zeros(1, 2)).is_err());
}

#[test]
fn pcm_laws_hold_on_matrices_cpm_and_rel() {
    let rat = MatCat::<RatNonneg>::new();
    for r in [
        check_pcm_laws(&rat, &SubStochasticSampler, 4, 200, 1),
        check_downset(&rat, &SubStochasticSampler, 4, 200, 1),
        check_sub_causal_closure(&rat, &SubStochasticSampler, 4, 200, 1),
    ] {
        assert!(r.passed(), "{}", r.summary_line());
    }
    let real = MatCat::<f64>::new();
    assert!(check_pcm_laws(&real, &SubStochasticSampler, 3, 100, 2).passed());
    for r in [
        check_pcm_laws(&Quant::new(), &SubCausalCpmSampler, 3, 100, 3),
        check_downset(&Quant::new(), &SubCausalCpmSampler, 3, 100, 3),
        check_sub_causal_closure(&Quant::new(), &SubCausalCpmSampler, 3, 100, 3),
        check_pcm_laws(&QuantReal::new(), &SubCausalCpmSampler, 3, 100, 3),
        check_pcm_laws(&RelCat::new(), &RelSubCausalSampler, 4, 100, 3),
    ] {
        assert!(r.passed(), "{}", r.summary_line());
    }
}

#[test]
fn downset_samples_include_defined_sums() {
    let r = check_downset(&MatCat::<RatNonneg>::new(), &SubStochasticSampler, 2, 200, 9);
    assert!(r.samples > 0);
}

#[test]
fn scaled_snake_holds_with_dimension_as_scale() {
    let r = check_scaled_snake(4);
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.samples, 4);
}

#[test]
fn two_outcome_stochastic_test_merges_to_stochastic_map() {
    let t = MatCat::<RatNonneg>::new();
    let f1 = Mat::from_vec(2, 2, vec![q(1, 4), q(0, 1), q(1, 4), q(1, 2)]).unwrap();
    let f2 = Mat::from_vec(2, 2, vec![q(1, 2), q(1, 4), q(0, 1), q(1, 4)]).unwrap();
    let test = test_from_events(&t, vec![f1.clone(), f2.clone()]).unwrap();
    assert!(test.causal);
    let merged = coarse_grain(&t, &test, &[0, 1]).unwrap();
    assert_eq!(merged, f1.add(&f2).unwrap());
    assert!(crate::backends::columns_sum_to_one(&merged, 0.0));
    assert_eq!(coarse_grain(&t, &test, &[1]).unwrap(), f2);
    assert_eq!(events(&t, &test).unwrap(), vec![f1, f2]);
}

#[test]
fn merging_heterogeneous_targets_is_an_error() {
    let t = MatCat::<RatNonneg>::new();
    let test = test_from_events(&t, vec![Mat::row(vec![q(1, 2)]), Mat::column(vec![q(1, 4), q(1, 4)])]).unwrap();
    assert!(test.causal);
    assert!(matches!(coarse_grain(&t, &test, &[0, 1]), Err(Error::TypeMismatch(_))));
    assert!(coarse_grain(&t, &test, &[]).is_err());
}

#[test]
fn coarse_graining_keeps_tests_causal() {
    let rat = MatCat::<RatNonneg>::new();
    let r = check_coarse_graining(&rat, &SubStochasticSampler, 4, 200, 4);
    assert!(r.passed(), "{:?}", r.failures);
    let r = check_coarse_graining(&Quant::new(), &SubCausalCpmSampler, 3, 60, 4);
    assert!(r.passed(), "{:?}", r.failures);
    let r = check_coarse_graining(&RelCat::new(), &RelSubCausalSampler, 4, 100, 4);
    assert!(r.passed(), "{:?}", r.failures);
}

type PFun = Vec<Option<usize>>;

fn to_pfun(p: &PartialArrow<FinFn>) -> PFun {
    p.arrow.table.iter().map(|&x| (x < p.cod).then_some(x)).collect()
}

#[test]
fn par_over_finite_sets_is_partial_functions() {
    let mut rng = SampleRng::seed_from_u64(12);
    for _ in 0..200 {
        let (a, b, c) = (rng.gen_range(1..5), rng.gen_range(1..5), rng.gen_range(1..5));
        let f = PartialArrow::new(&FinSet, FinSet.random_total(&mut rng, a, b + 1)).unwrap();
        let g = PartialArrow::new(&FinSet, FinSet.random_total(&mut rng, b, c + 1)).unwrap();
        let h = par_compose(&FinSet, &g, &f).unwrap();
        let (pf, pg) = (to_pfun(&f), to_pfun(&g));
        let oracle: PFun = pf.iter().map(|x| x.and_then(|y| pg[y])).collect();
        assert_eq!(to_pfun(&h), oracle);
    }
}

#[test]
fn par_identity_and_zero() {
    let mut rng = SampleRng::seed_from_u64(13);
    let f = PartialArrow::new(&FinSet, FinSet.random_total(&mut rng, 3, 3)).unwrap();
    let id = par_identity(&FinSet, 2);
    assert_eq!(par_compose(&FinSet, &id, &f).unwrap().arrow, f.arrow);
    assert_eq!(par_lift(&FinSet, &FinSet.identity(2)).arrow, id.arrow);
    let z = par_zero(&FinSet, 4, 3);
    let g = PartialArrow::new(&FinSet, FinSet.random_total(&mut rng, 3, 5)).unwrap();
    assert_eq!(par_compose(&FinSet, &g, &z).unwrap().arrow, par_zero(&FinSet, 4, 4).arrow);
    let zs = par_zero(&Stochastic, 2, 3);
    let gs = PartialArrow::new(&Stochastic, Stochastic.random_total(&mut rng, 3, 2)).unwrap();
    assert_eq!(par_compose(&Stochastic, &gs, &zs).unwrap().arrow, par_zero(&Stochastic, 2, 1).arrow);
    assert!(par_compose(&FinSet, &f, &par_zero(&FinSet, 4, 2)).is_err());
}

#[test]
fn par_lift_is_faithful() {
    let mut rng = SampleRng::seed_from_u64(14);
    for _ in 0..50 {
        let f = Stochastic.random_total(&mut rng, 3, 2);
        let g = Stochastic.random_total(&mut rng, 3, 2);
        assert_eq!(f == g, par_lift(&Stochastic, &f).arrow == par_lift(&Stochastic, &g).arrow);
    }
}

#[test]
fn test_category_checks_pass_on_sets_and_stochastic_maps() {
    for r in [check_test_category(&FinSet, 4, 200, 5), check_test_category(&Stochastic, 4, 200, 5)] {
        assert!(r.passed(), "{}: {:?}", r.summary_line(), r.failures.first());
    }
}

#[test]
fn duplicated_column_projection_breaks_joint_monicity() {
    for r in [
        check_test_category(&CorruptedPartialProjection(FinSet), 4, 100, 6),
        check_test_category(&CorruptedPartialProjection(Stochastic), 4, 100, 6),
    ] {
        assert!(!r.passed());
        assert!(r.failures[0].message.contains("share both events"));
        assert_eq!(r.failures[0].inputs.len(), 3);
    }
}

#[test]
fn partial_projections_of_finite_sets() {
    // A = {a0, a1}, B = {b0}: ▷₁ = (a0, a1, *), ▷₂ = (*, *, b0)
    assert_eq!(FinSet.partial_projection(2, 1, 0).table, vec![0, 1, 2]);
    assert_eq!(FinSet.partial_projection(2, 1, 1).table, vec![1, 1, 0]);
}

fn half_pcm() -> FinitePCM {
    FinitePCM::unit_interval(2)
}

#[test]
fn unit_interval_pcm_satisfies_axioms_and_roundtrips() {
    let m = half_pcm();
    assert_eq!(m.elements, vec!["0", "1/2", "1"]);
    assert!(m.check_axioms().passed());
    let back = FinitePCM::from_json(&m.to_json()).unwrap();
    assert_eq!(back, m);
}

#[test]
fn pcm_json_rejects_conflicts() {
    let v = serde_json::json!({"elements": ["0", "a"], "zero": "0", "ovee": [["a", "a", "a"], ["a", "a", null]]});
    assert!(FinitePCM::from_json(&v).is_err());
    let v = serde_json::json!({"elements": ["0"], "zero": "z", "ovee": []});
    assert!(FinitePCM::from_json(&v).is_err());
}

#[test]
fn broken_table_fails_associativity() {
    // a ⋁ a = b, b ⋁ a = b but a ⋁ b undefined is impossible by symmetry;
    // instead a ⋁ a = b and b ⋁ a = c while b ⋁ ... leaves a ⋁ (a ⋁ a) = c,
    // (a ⋁ a) ⋁ a = c, fine; break it with a ⋁ b = a
    let names = ["0", "a", "b"].map(String::from).to_vec();
    let m = FinitePCM::new(names, 0, &[(1, 1, 2), (1, 2, 1)]).unwrap();
    assert!(!m.check_axioms().passed());
}

/// Sum of a word as a rational, with element `k` of `unit_interval(d)`
/// worth `k / d`.
fn word_value(w: &[usize], d: usize) -> BigRational {
    w.iter()
        .map(|&k| BigRational::new(BigInt::from(k), BigInt::from(d)))
        .fold(BigRational::from_integer(0.into()), |a, b| a + b)
}

#[test]
fn totalising_halves_gives_multiples_of_a_half() {
    let m = half_pcm();
    let t = totalise_pcm(&m, 4).unwrap();
    let vals: Vec<BigRational> = t.certified().map(|c| word_value(&c.representative, 2)).collect();
    for k in 0..=4u64 {
        let v = BigRational::new(BigInt::from(k), BigInt::from(2));
        assert!(vals.contains(&v), "missing {v}");
    }
    // classes are exactly the fibres of the sum
    for c in &t.classes {
        let v = word_value(&c.representative, 2);
        assert!(c.members.iter().all(|w| word_value(w, 2) == v));
    }
    let half = m.index_of("1/2").unwrap();
    let one = m.index_of("1").unwrap();
    assert_eq!(t.class_of(&[half, half]), t.class_of(&[one]));
    assert_ne!(t.class_of(&[half]), t.class_of(&[one]));
}

#[test]
fn certified_classes_at_word_bound_six() {
    // 3 = six halves cannot be expanded further; 7/2 needs seven
    let m = half_pcm();
    let t = totalise_pcm(&m, 6).unwrap();
    let mut vals: Vec<BigRational> = t.certified().map(|c| word_value(&c.representative, 2)).collect();
    vals.sort();
    let expect: Vec<BigRational> = (0..=6).map(|k| BigRational::new(BigInt::from(k), BigInt::from(2))).collect();
    assert_eq!(vals, expect);
    assert!(t.check_embedding(&m).passed());
    let fact = t.check_fact(&m);
    assert!(fact.passed());
    assert!(fact.samples >= 4);
}

#[test]
fn trivial_pcm_has_a_single_class() {
    let m = FinitePCM::new(vec!["0".into()], 0, &[]).unwrap();
    let t = totalise_pcm(&m, 3).unwrap();
    assert_eq!(t.classes.len(), 1);
    assert!(t.classes[0].certified);
    assert!(totalise_pcm(&m, 1).is_err());
}

#[test]
fn totalisation_json_names_classes() {
    let m = half_pcm();
    let v = totalise_pcm(&m, 3).unwrap().to_json(&m);
    assert_eq!(v["max_word"], 3);
    assert!(v["classes"].as_array().unwrap().iter().any(|c| c["element"] == "1/2"));
}

#[test]
fn pair_representation_examples() {
    let f = Mat::from_vec(2, 1, vec![q(1, 3), q(1, 3)]).unwrap();
    assert!(total_rep_equal(&f, &q(1, 1), &f, &q(1, 1)).unwrap());
    let half_f = f.scale(&q(1, 2));
    assert!(total_rep_equal(&half_f, &q(1, 1), &f, &q(1, 2)).unwrap());
    let w = total_rep_witness(&half_f, &q(1, 1), &f, &q(1, 2)).unwrap().unwrap();
    assert_eq!((w.n, w.a, w.b), (1, q(1, 1), q(1, 2)));
    let g = Mat::from_vec(2, 1, vec![q(1, 3), q(1, 4)]).unwrap();
    assert!(!total_rep_equal(&f, &q(1, 1), &g, &q(1, 1)).unwrap());
    assert!(total_rep_equal(&f, &q(1, 1), &Mat::zeros(1, 1), &q(1, 1)).is_err());
}

#[test]
fn pair_representation_clears_large_denominators() {
    let f = Mat::from_vec(1, 2, vec![q(1, 5), q(2, 5)]).unwrap();
    // (f, 7/2) ~ (f/7, 49/2)
    let g = f.scale(&q(1, 7));
    let w = total_rep_witness(&f, &q(7, 2), &g, &q(49, 2)).unwrap().unwrap();
    assert_eq!(w.n, 25);
    assert!(w.a.at_most_one() && w.b.at_most_one());
    assert_eq!(f.scale(&w.a), g.scale(&w.b));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_equality_matches_cross_multiplication(seed in any::<u64>(), p in 1u64..6, pd in 1u64..6, r in 1u64..9, rd in 1u64..5) {
        let mut rng = SampleRng::seed_from_u64(seed);
        let h = SubStochasticSampler::sub_stochastic(&mut rng, 2, 2);
        let f = h.scale(&q(p.min(pd), pd));
        let r = q(r, rd);
        let s = r.mul(&q(p.min(pd), pd));
        // (f, r) vs (h, s): r·f = s·h always
        prop_assert!(total_rep_equal(&f, &r, &h, &s).unwrap());
        let off = s.add(&q(1, 7));
        prop_assert_eq!(total_rep_equal(&f, &r, &h, &off).unwrap(), h.is_zero());
    }

    #[test]
    fn ceil_matches_float(n in 0u64..1000, d in 1u64..50) {
        prop_assert_eq!(q(n, d).ceil(), (n as f64 / d as f64).ceil() as u64);
    }
}
