use proptest::prelude::*;
use rand::SeedableRng;

use super::*;
use crate::backends::rel::from_pairs;
use crate::linalg;
use crate::scalars::{Complex64, GaussRat, Rat};

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn fk() -> FloatKernels<C> {
    FloatKernels::default()
}

fn to_float(m: &Mat<GaussRat>) -> Mat<C> {
    m.map_to(GaussRat::to_c64)
}

impl<S: Scalar> Mat<S> {
    fn map_to<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat::from_fn(self.rows(), self.cols(), |i, j| f(self.get(i, j)))
    }
}

/// Column-space intersection by row reduction: solutions of `A x = B y`.
fn intersection_oracle(a: &Mat<GaussRat>, b: &Mat<GaussRat>) -> Mat<GaussRat> {
    let stacked = a.hstack(&b.neg()).unwrap();
    let null = linalg::nullspace(&stacked);
    let xs = null.submatrix(0, 0, a.cols(), null.cols());
    linalg::column_basis(&a.compose(&xs).unwrap())
}

#[test]
fn rel_kernel_of_single_pair() {
    // R = {(a, x)} on {a, b} → {x}
    let r = from_pairs(2, 1, &[(0, 0)]);
    let k = RelKernels.kernel(&r);
    assert_eq!(RelKernels.elements(&k), vec![1]);
}

#[test]
fn kernel_of_zero_is_identity() {
    let k = fk().kernel(&Mat::zeros(3, 2));
    assert_eq!(k.rank, 2);
    assert!(fk().projection(&k).deviation(&Mat::identity(2)) < 1e-12);
    let e = ExactKernels::<Rat>::new().unwrap();
    assert_eq!(e.projection(&e.kernel(&Mat::zeros(3, 2))), Mat::identity(2));
}

#[test]
fn kernel_of_effect_zero_matches_row_reduction() {
    let bra0 = Mat::row(vec![c(1.0), c(0.0)]);
    let k = fk().kernel(&bra0);
    assert_eq!(k.rank, 1);
    let oracle = linalg::projection_onto(&linalg::nullspace(&Mat::row(vec![GaussRat::from_ints(1, 0), GaussRat::from_ints(0, 0)])));
    assert!(fk().projection(&k).deviation(&to_float(&oracle)) < 1e-12);
}

#[test]
fn image_of_rank_one_density_is_support() {
    let v = Mat::column(vec![c(0.6), C::new(0.0, 0.8)]);
    let rho = v.compose(&v.dagger()).unwrap();
    let im = fk().image(&rho);
    assert_eq!(im.rank, 1);
    assert!(fk().projection(&im).deviation(&rho) < 1e-12);
}

#[test]
fn coimage_of_identity_is_unitary() {
    let co = coimage(&fk(), &Mat::<C>::identity(3));
    assert_eq!(co.shape(), (3, 3));
    assert!(linalg::isometry_defect(&co) < 1e-12);
    let e = ExactKernels::<Rat>::new().unwrap();
    assert_eq!(coimage(&e, &Mat::<Rat>::identity(2)), Mat::identity(2));
}

#[test]
fn rel_image_is_reachable_set() {
    let r = from_pairs(2, 3, &[(0, 2), (1, 2), (1, 0)]);
    assert_eq!(RelKernels.elements(&RelKernels.image(&r)), vec![0, 2]);
}

#[test]
fn complement_examples() {
    let e = ExactKernels::<Rat>::new().unwrap();
    let p0 = e.image(&Mat::column(vec![Rat::frac(1, 1), Rat::frac(0, 1)]));
    let perp = e.complement(&p0);
    assert_eq!(e.projection(&perp), Mat::diag(&[Rat::frac(0, 1), Rat::frac(1, 1)]));
    assert_eq!(e.complement(&perp), p0);
    assert_eq!(e.projection(&e.complement(&e.bottom(3))), Mat::identity(3));
    let b = fk();
    let mut rng = SampleRng::seed_from_u64(3);
    let k = b.image(&Mat::gaussian(&mut rng, 4, 2));
    assert!(kernel_eq(&b, &b.complement(&b.complement(&k)), &k));
}

#[test]
fn orthogonal_atoms_meet_and_join() {
    let b = fk();
    let e0 = b.image(&Mat::basis(3, 0).map(|x: &C| *x));
    let e1 = b.image(&Mat::basis(3, 1));
    assert_eq!(meet(&b, &e0, &e1).unwrap().rank, 0);
    let j = join(&b, &e0, &e1).unwrap();
    assert_eq!(j.rank, 2);
    let oracle = Mat::diag(&[c(1.0), c(1.0), c(0.0)]);
    assert!(b.projection(&j).deviation(&oracle) < 1e-12);
}

#[test]
fn meet_is_idempotent_and_top_is_neutral() {
    let b = fk();
    let mut rng = SampleRng::seed_from_u64(8);
    for _ in 0..20 {
        let (k, _) = sample_kernel_pair(&b, &mut rng, 4);
        assert!(kernel_eq(&b, &meet(&b, &k, &k).unwrap(), &k));
        assert!(kernel_eq(&b, &meet(&b, &k, &b.top(4)).unwrap(), &k));
    }
}

#[test]
fn ambient_mismatch_is_an_error() {
    let b = fk();
    assert!(meet(&b, &b.top(2), &b.top(3)).is_err());
}

#[test]
fn exact_kernels_refuse_isotropic_involutions() {
    assert!(ExactKernels::<crate::scalars::GaussRatTrivial>::new().is_err());
}

#[test]
fn float_meet_matches_exact_intersection() {
    let mut rng = SampleRng::seed_from_u64(21);
    let b = fk();
    let e = ExactKernels::<GaussRat>::new().unwrap();
    for _ in 0..50 {
        let (k, l) = sample_kernel_pair(&e, &mut rng, 4);
        let (mk, ml) = (e.mono(&k), e.mono(&l));
        let oracle = linalg::projection_onto(&intersection_oracle(&mk, &ml));
        assert_eq!(e.projection(&meet(&e, &k, &l).unwrap()), oracle);
        let fm = meet(&b, &b.image(&to_float(&mk)), &b.image(&to_float(&ml))).unwrap();
        assert!(b.projection(&fm).deviation(&to_float(&oracle)) < 1e-8);
        let sum = linalg::projection_onto(&linalg::column_basis(&mk.hstack(&ml).unwrap()));
        assert_eq!(e.projection(&join(&e, &k, &l).unwrap()), sum);
    }
}

#[test]
fn lattice_checks_pass_on_complex_four() {
    let b = fk();
    for r in [
        check_orthomodular(&b, 4, 200, 1),
        check_image_meet_lemma(&b, 4, 200, 1),
        check_covering_law(&b, 4, 200, 1),
        check_atomicity(&b, 4, 100, 1),
        check_kernel_factorisation(&b, 4, 100, 1),
        check_tensor_images(&b, 2, 50, 1),
        check_dagger_nondegenerate(&b, 4, 50, 1),
    ] {
        assert!(r.passed(), "{}", r.summary_line());
    }
}

#[test]
fn lattice_checks_pass_on_complex_one() {
    let b = fk();
    assert!(check_orthomodular(&b, 1, 30, 2).passed());
    assert!(check_covering_law(&b, 1, 30, 2).passed());
}

#[test]
fn lattice_checks_pass_on_rel() {
    for n in [4, 5] {
        for r in [
            check_orthomodular(&RelKernels, n, 200, 3),
            check_image_meet_lemma(&RelKernels, n, 200, 3),
            check_covering_law(&RelKernels, n, 200, 3),
            check_atomicity(&RelKernels, n, 100, 3),
            check_kernel_factorisation(&RelKernels, n, 100, 3),
            check_tensor_images(&RelKernels, 3, 50, 3),
            check_dagger_nondegenerate(&RelKernels, n, 50, 3),
        ] {
            assert!(r.passed(), "{}", r.summary_line());
        }
    }
}

#[test]
fn lattice_checks_pass_on_exact_rationals() {
    let e = ExactKernels::<Rat>::new().unwrap();
    for r in [
        check_orthomodular(&e, 3, 40, 4),
        check_image_meet_lemma(&e, 3, 40, 4),
        check_covering_law(&e, 3, 40, 4),
        check_kernel_factorisation(&e, 3, 40, 4),
    ] {
        assert!(r.passed(), "{}", r.summary_line());
    }
}

#[test]
fn image_meet_lemma_special_cases() {
    let b = fk();
    let mut rng = SampleRng::seed_from_u64(5);
    let k = b.image(&Mat::gaussian(&mut rng, 3, 2));
    let l = sample_subkernel(&b, &mut rng, &k);
    let lhs = b.image(&b.compose(&b.projection(&k), &b.mono(&l)));
    assert!(kernel_eq(&b, &lhs, &l));
    let e0 = b.image(&Mat::basis(3, 0));
    let e1 = b.image(&Mat::basis(3, 1));
    let lhs = b.image(&b.compose(&b.projection(&e0), &b.mono(&e1)));
    assert_eq!(lhs.rank, 0);
    let rhs = meet(&b, &e0, &join(&b, &e1, &b.complement(&e0)).unwrap()).unwrap();
    assert_eq!(rhs.rank, 0);
}

#[test]
fn covering_law_below_case_returns_the_atom() {
    let b = fk();
    let mut rng = SampleRng::seed_from_u64(6);
    let k = b.image(&Mat::gaussian(&mut rng, 4, 3));
    let a = b.image(&b.compose(&b.mono(&k), &Mat::gaussian(&mut rng, 3, 1)));
    let r = meet(&b, &k, &join(&b, &a, &b.complement(&k)).unwrap()).unwrap();
    assert!(kernel_eq(&b, &r, &a));
}

#[test]
fn kernel_json_uses_projection() {
    let v = kernel_json(&RelKernels, &RelKernels.from_subset(3, &[1]));
    assert_eq!(v["ambient"], 3);
    assert_eq!(v["projection"]["rows"], 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rel_meet_is_intersection(xs in proptest::collection::vec(any::<bool>(), 5), ys in proptest::collection::vec(any::<bool>(), 5)) {
        let sub = |v: &[bool]| (0..5).filter(|&i| v[i]).collect::<Vec<_>>();
        let (k, l) = (RelKernels.from_subset(5, &sub(&xs)), RelKernels.from_subset(5, &sub(&ys)));
        let m = meet(&RelKernels, &k, &l).unwrap();
        let both: Vec<usize> = (0..5).filter(|&i| xs[i] && ys[i]).collect();
        prop_assert_eq!(RelKernels.elements(&m), both);
        let j = join(&RelKernels, &k, &l).unwrap();
        let either: Vec<usize> = (0..5).filter(|&i| xs[i] || ys[i]).collect();
        prop_assert_eq!(RelKernels.elements(&j), either);
    }

    #[test]
    fn float_kernel_annihilates_and_is_isometric(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5, inner in 0usize..4) {
        let mut rng = SampleRng::seed_from_u64(seed);
        let f: Mat<C> = Mat::gaussian(&mut rng, rows, inner).compose(&Mat::gaussian(&mut rng, inner, cols)).unwrap();
        let k = fk().kernel(&f);
        let m = fk().mono(&k);
        prop_assert!(linalg::isometry_defect(&m) < 1e-9 || m.cols() == 0);
        prop_assert!(f.compose(&m).unwrap().max_magnitude() < 1e-9);
        prop_assert_eq!(k.rank, cols - inner.min(rows).min(cols));
    }
}
