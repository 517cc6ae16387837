use proptest::prelude::*;

use proctheory::backends::{MatCat, MatSampler, RelCat, RelSampler};
use proctheory::catcore::{check_law, check_laws, Law, LawConfig, SampleRng, Sampler, Theory};
use proctheory::cpm::{Cpm, CpmSampler, FloatCpmSampler};
use proctheory::scalars::{Complex64, GaussRat, Nat, Rat, RatNonneg};
use proctheory::{LawReport, Mat, Result};
use serde_json::Value;

fn cfg(max_dim: usize, samples: usize, seed: u64) -> LawConfig {
    LawConfig {
        samples,
        seed,
        max_dim,
        timings: false,
    }
}

fn assert_all_pass(reports: &[LawReport]) {
    for r in reports {
        assert!(r.passed(), "{} {:?}", r.summary_line(), r.failures.first());
        assert!(r.samples > 0);
    }
}

#[test]
fn exact_matrix_backends_pass_every_law() {
    let c = cfg(5, 200, 1);
    assert_all_pass(&check_laws(&MatCat::<bool>::new(), &MatSampler, &Law::ALL, &c));
    assert_all_pass(&check_laws(&MatCat::<Nat>::new(), &MatSampler, &Law::ALL, &c));
    assert_all_pass(&check_laws(&MatCat::<RatNonneg>::new(), &MatSampler, &Law::ALL, &c));
    assert_all_pass(&check_laws(&MatCat::<Rat>::new(), &MatSampler, &Law::ALL, &c));
    assert_all_pass(&check_laws(&MatCat::<GaussRat>::new(), &MatSampler, &Law::ALL, &c));
}

#[test]
fn rel_passes_every_law() {
    assert_all_pass(&check_laws(&RelCat::new(), &RelSampler, &Law::ALL, &cfg(5, 200, 2)));
}

#[test]
fn float_backends_pass_within_tolerance() {
    let c = cfg(5, 200, 3);
    assert_all_pass(&check_laws(&MatCat::<f64>::with_tolerance(1e-9), &MatSampler, &Law::ALL, &c));
    assert_all_pass(&check_laws(&MatCat::<Complex64>::with_tolerance(1e-9), &MatSampler, &Law::ALL, &c));
    let c = cfg(3, 200, 3);
    assert_all_pass(&check_laws(&Cpm::<Complex64>::with_tolerance(1e-9), &FloatCpmSampler, &Law::ALL, &c));
    assert_all_pass(&check_laws(&Cpm::<f64>::with_tolerance(1e-9), &FloatCpmSampler, &Law::ALL, &c));
}

#[test]
fn exact_cpm_passes() {
    let c = cfg(2, 60, 4);
    assert_all_pass(&check_laws(&Cpm::<Rat>::new(), &CpmSampler, &Law::ALL, &c));
    assert_all_pass(&check_laws(&Cpm::<GaussRat>::new(), &CpmSampler, &Law::ALL, &c));
}

/// `Mat_ℚ` whose composite of square matrices comes out transposed.
struct TransposeBug(MatCat<Rat>);

impl Theory for TransposeBug {
    type Obj = usize;
    type Mor = Mat<Rat>;

    fn name(&self) -> String {
        "transpose_bug".into()
    }
    fn unit(&self) -> usize {
        self.0.unit()
    }
    fn dom(&self, f: &Mat<Rat>) -> usize {
        self.0.dom(f)
    }
    fn cod(&self, f: &Mat<Rat>) -> usize {
        self.0.cod(f)
    }
    fn identity(&self, a: &usize) -> Mat<Rat> {
        self.0.identity(a)
    }
    fn compose(&self, g: &Mat<Rat>, f: &Mat<Rat>) -> Result<Mat<Rat>> {
        let h = self.0.compose(g, f)?;
        Ok(if h.rows() == h.cols() { h.transpose() } else { h })
    }
    fn tensor_obj(&self, a: &usize, b: &usize) -> usize {
        self.0.tensor_obj(a, b)
    }
    fn tensor(&self, f: &Mat<Rat>, g: &Mat<Rat>) -> Mat<Rat> {
        self.0.tensor(f, g)
    }
    fn swap(&self, a: &usize, b: &usize) -> Mat<Rat> {
        self.0.swap(a, b)
    }
    fn zero(&self, a: &usize, b: &usize) -> Mat<Rat> {
        self.0.zero(a, b)
    }
    fn discard(&self, a: &usize) -> Mat<Rat> {
        self.0.discard(a)
    }
    fn dagger(&self, f: &Mat<Rat>) -> Result<Mat<Rat>> {
        self.0.dagger(f)
    }
    fn cup(&self, a: &usize) -> Result<Mat<Rat>> {
        self.0.cup(a)
    }
    fn deviation(&self, f: &Mat<Rat>, g: &Mat<Rat>) -> f64 {
        self.0.deviation(f, g)
    }
    fn tolerance(&self) -> f64 {
        0.0
    }
    fn obj_json(&self, a: &usize) -> Value {
        self.0.obj_json(a)
    }
    fn payload_json(&self, f: &Mat<Rat>) -> Value {
        self.0.payload_json(f)
    }
}

struct BugSampler;

impl Sampler<TransposeBug> for BugSampler {
    fn object(&self, t: &TransposeBug, rng: &mut SampleRng, bound: usize) -> usize {
        MatSampler.object(&t.0, rng, bound)
    }
    fn morphism(&self, t: &TransposeBug, rng: &mut SampleRng, a: &usize, b: &usize) -> Mat<Rat> {
        MatSampler.morphism(&t.0, rng, a, b)
    }
}

#[test]
fn transposed_composition_is_caught_with_witness() {
    let r = check_law(&TransposeBug(MatCat::new()), &BugSampler, Law::Category, &cfg(4, 200, 5));
    assert!(!r.passed());
    let w = &r.failures[0];
    assert!(!w.inputs.is_empty());
    assert!(w.inputs.iter().all(|v| v["backend"] == "transpose_bug"));
}

#[test]
fn reports_are_reproducible() {
    let t = MatCat::<Rat>::new();
    let a = serde_json::to_value(check_laws(&t, &MatSampler, &Law::ALL, &cfg(4, 50, 9))).unwrap();
    let b = serde_json::to_value(check_laws(&t, &MatSampler, &Law::ALL, &cfg(4, 50, 9))).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn laws_hold_for_any_seed(seed in any::<u64>()) {
        let c = cfg(4, 20, seed);
        for r in check_laws(&MatCat::<Rat>::new(), &MatSampler, &Law::ALL, &c) {
            prop_assert!(r.passed(), "{}", r.summary_line());
        }
        for r in check_laws(&RelCat::new(), &RelSampler, &Law::ALL, &c) {
            prop_assert!(r.passed(), "{}", r.summary_line());
        }
    }
}
