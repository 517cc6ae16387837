use std::marker::PhantomData;

use rand::Rng;
use serde_json::{json, Value};

use crate::catcore::{SampleRng, Sampler, Theory};
use crate::error::Result;
use crate::matrix::Mat;
use crate::scalars::{Scalar, DEFAULT_TOL};

/// `Mat_S`: objects are natural numbers, morphisms `n → m` are `m × n` matrices.
#[derive(Clone, Debug)]
pub struct MatCat<S> {
    tol: f64,
    _scalar: PhantomData<fn() -> S>,
}

impl<S: Scalar> Default for MatCat<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> MatCat<S> {
    /// Exact backends ignore the tolerance.
    pub fn new() -> Self {
        Self::with_tolerance(DEFAULT_TOL)
    }

    pub fn with_tolerance(tol: f64) -> Self {
        MatCat {
            tol: if S::KIND.is_float() { tol } else { 0.0 },
            _scalar: PhantomData,
        }
    }

    /// Cup `1 → n²` and cap `n² → 1`.
    pub fn cup_cap(n: usize) -> (Mat<S>, Mat<S>) {
        (Mat::cup(n), Mat::cap(n))
    }

    pub fn add(&self, f: &Mat<S>, g: &Mat<S>) -> Result<Mat<S>> {
        f.add(g)
    }
}

/// Column sums all equal to one.
pub fn columns_sum_to_one<S: Scalar>(m: &Mat<S>, tol: f64) -> bool {
    (0..m.cols()).all(|j| {
        let s = (0..m.rows()).fold(S::zero(), |acc, i| acc.add(m.get(i, j)));
        s.approx_eq(&S::one(), tol)
    })
}

impl<S: Scalar> Theory for MatCat<S> {
    type Obj = usize;
    type Mor = Mat<S>;

    fn name(&self) -> String {
        format!("mat_{}", S::KIND.name())
    }

    fn unit(&self) -> usize {
        1
    }

    fn dom(&self, f: &Mat<S>) -> usize {
        f.cols()
    }

    fn cod(&self, f: &Mat<S>) -> usize {
        f.rows()
    }

    fn identity(&self, a: &usize) -> Mat<S> {
        Mat::identity(*a)
    }

    fn compose(&self, g: &Mat<S>, f: &Mat<S>) -> Result<Mat<S>> {
        g.compose(f)
    }

    fn tensor_obj(&self, a: &usize, b: &usize) -> usize {
        a * b
    }

    fn tensor(&self, f: &Mat<S>, g: &Mat<S>) -> Mat<S> {
        f.kron(g)
    }

    fn swap(&self, a: &usize, b: &usize) -> Mat<S> {
        Mat::swap(*a, *b)
    }

    fn zero(&self, a: &usize, b: &usize) -> Mat<S> {
        Mat::zeros(*b, *a)
    }

    fn discard(&self, a: &usize) -> Mat<S> {
        Mat::discard(*a)
    }

    fn dagger(&self, f: &Mat<S>) -> Result<Mat<S>> {
        Ok(f.dagger())
    }

    fn cup(&self, a: &usize) -> Result<Mat<S>> {
        Ok(Mat::cup(*a))
    }

    fn cap(&self, a: &usize) -> Result<Mat<S>> {
        Ok(Mat::cap(*a))
    }

    fn deviation(&self, f: &Mat<S>, g: &Mat<S>) -> f64 {
        f.relative_deviation(g)
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }

    fn obj_json(&self, a: &usize) -> Value {
        json!(a)
    }

    fn payload_json(&self, f: &Mat<S>) -> Value {
        f.to_json()
    }
}

/// Uniform dimensions in `1..=bound`, entries from the backend's small value set.
#[derive(Clone, Copy, Debug, Default)]
pub struct MatSampler;

impl<S: Scalar> Sampler<MatCat<S>> for MatSampler {
    fn object(&self, _: &MatCat<S>, rng: &mut SampleRng, bound: usize) -> usize {
        rng.gen_range(1..=bound.max(1))
    }

    fn morphism(&self, _: &MatCat<S>, rng: &mut SampleRng, a: &usize, b: &usize) -> Mat<S> {
        Mat::sample(rng, *b, *a)
    }
}
