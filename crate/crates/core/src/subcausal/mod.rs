//! Sub-causal processes, partial addition, tests and coarse-graining,
//! partial arrows, and totalisation.

mod par;
mod pcm;

use rand::Rng;
use serde_json::{json, Value};

use crate::backends::{Additive, Biproduct, BlockMor, MatCat, RelCat};
use crate::catcore::{is_causal, sample_rng, SampleRng, Theory};
use crate::cpm::{from_kraus, random_channel, random_cpm, Cpm, CpmMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Mat;
use crate::report::{Failure, LawReport};
use crate::scalars::{FloatScalar, RatNonneg, Scalar};

pub use par::{
    check_test_category, par_compose, par_identity, par_lift, par_zero, CorruptedPartialProjection, FinFn, FinSet,
    PartialArrow, Stochastic, TestCategory,
};
pub use pcm::{
    total_rep_equal, total_rep_witness, DivisibleScalar, FinitePCM, RepWitness, TotalClass, Totalisation,
    totalise_pcm,
};

/// Additive theories with a decidable sub-causal predicate:
/// `⊤ ∘ f + e = ⊤` for some effect `e`.
pub trait SubCausal: Additive + Clone {
    fn is_sub_causal(&self, f: &Self::Mor) -> bool;
}

fn column_sums<S: Scalar>(m: &Mat<S>) -> Vec<S> {
    (0..m.cols())
        .map(|j| (0..m.rows()).fold(S::zero(), |acc, i| acc.add(m.get(i, j))))
        .collect()
}

impl SubCausal for MatCat<RatNonneg> {
    fn is_sub_causal(&self, f: &Mat<RatNonneg>) -> bool {
        column_sums(f).iter().all(|s| RatNonneg::one().checked_sub(s).is_some())
    }
}

impl SubCausal for MatCat<f64> {
    fn is_sub_causal(&self, f: &Mat<f64>) -> bool {
        let tol = self.tolerance();
        f.data().iter().all(|x| *x >= -tol) && column_sums(f).iter().all(|s| *s <= 1.0 + tol)
    }
}

impl<S: FloatScalar> SubCausal for Cpm<S> {
    fn is_sub_causal(&self, f: &CpmMap<S>) -> bool {
        sub_causal_slack(f) >= -self.tolerance()
    }
}

impl SubCausal for RelCat {
    fn is_sub_causal(&self, _: &Mat<bool>) -> bool {
        true
    }
}

/// Smallest eigenvalue of `I − Tr_out(C)`.
pub fn sub_causal_slack<S: FloatScalar>(f: &CpmMap<S>) -> f64 {
    let n = f.in_dim;
    if n == 0 {
        return 0.0;
    }
    let gap = Mat::identity(n).sub(&f.output_trace()).expect("square");
    linalg::eigh(&gap).0[0]
}

/// The partial sum `f ⋁ g`, defined when `f + g` is sub-causal.
#[derive(Clone, Copy, Debug)]
pub struct PartialAdd<'a, T> {
    pub theory: &'a T,
}

impl<'a, T: SubCausal> PartialAdd<'a, T> {
    pub fn new(theory: &'a T) -> Self {
        PartialAdd { theory }
    }

    pub fn ovee(&self, f: &T::Mor, g: &T::Mor) -> Result<Option<T::Mor>> {
        let s = self.theory.add(f, g)?;
        Ok(self.theory.is_sub_causal(&s).then_some(s))
    }

    pub fn zero(&self, a: &T::Obj, b: &T::Obj) -> T::Mor {
        self.theory.zero(a, b)
    }

    fn same(&self, f: &T::Mor, g: &T::Mor) -> bool {
        self.theory.approx_eq(f, g)
    }
}

/// Samplers of sub-causal, causal and unrestricted morphisms on
/// dimension-indexed backends.
pub trait SubCausalSampler<T: SubCausal<Obj = usize>>: Sync {
    fn sub_causal(&self, t: &T, rng: &mut SampleRng, a: usize, b: usize) -> T::Mor;
    fn causal(&self, t: &T, rng: &mut SampleRng, a: usize, b: usize) -> T::Mor;
    /// Anything in the ambient category, sub-causal or not.
    fn arbitrary(&self, t: &T, rng: &mut SampleRng, a: usize, b: usize) -> T::Mor;
    /// Events `A → B` of an `n`-outcome causal test.
    fn causal_test(&self, t: &T, rng: &mut SampleRng, a: usize, b: usize, n: usize) -> Vec<T::Mor>;
}

/// Columns `w_i / (Σ w + slack)` for small integer weights.
fn weighted_columns(rng: &mut SampleRng, rows: usize, cols: usize, max_slack: u64) -> Mat<RatNonneg> {
    let mut m = Mat::zeros(rows, cols);
    for j in 0..cols {
        let w: Vec<u64> = (0..rows).map(|_| rng.gen_range(0..=3)).collect();
        let slack = rng.gen_range(0..=max_slack);
        let mut total: u64 = w.iter().sum::<u64>() + slack;
        let mut w = w;
        if total == 0 {
            w[rng.gen_range(0..rows)] = 1;
            total = 1;
        }
        for (i, wi) in w.iter().enumerate() {
            m.set(i, j, RatNonneg::frac(*wi, total));
        }
    }
    m
}

/// Sub-stochastic matrices with small denominators.
#[derive(Clone, Copy, Debug, Default)]
pub struct SubStochasticSampler;

impl SubStochasticSampler {
    pub fn stochastic(rng: &mut SampleRng, rows: usize, cols: usize) -> Mat<RatNonneg> {
        weighted_columns(rng, rows, cols, 0)
    }

    pub fn sub_stochastic(rng: &mut SampleRng, rows: usize, cols: usize) -> Mat<RatNonneg> {
        weighted_columns(rng, rows, cols, 6)
    }
}

impl SubCausalSampler<MatCat<RatNonneg>> for SubStochasticSampler {
    fn sub_causal(&self, _: &MatCat<RatNonneg>, rng: &mut SampleRng, a: usize, b: usize) -> Mat<RatNonneg> {
        Self::sub_stochastic(rng, b, a)
    }

    fn causal(&self, _: &MatCat<RatNonneg>, rng: &mut SampleRng, a: usize, b: usize) -> Mat<RatNonneg> {
        Self::stochastic(rng, b, a)
    }

    fn arbitrary(&self, _: &MatCat<RatNonneg>, rng: &mut SampleRng, a: usize, b: usize) -> Mat<RatNonneg> {
        Mat::from_fn(b, a, |_, _| RatNonneg::frac(rng.gen_range(0..=4), rng.gen_range(1..=4)))
    }

    fn causal_test(&self, _: &MatCat<RatNonneg>, rng: &mut SampleRng, a: usize, b: usize, n: usize) -> Vec<Mat<RatNonneg>> {
        row_blocks(&Self::stochastic(rng, n * b, a), b)
    }
}

impl SubCausalSampler<MatCat<f64>> for SubStochasticSampler {
    fn sub_causal(&self, _: &MatCat<f64>, rng: &mut SampleRng, a: usize, b: usize) -> Mat<f64> {
        let m = Self::sub_stochastic(rng, b, a);
        Mat::from_fn(b, a, |i, j| m.get(i, j).magnitude())
    }

    fn causal(&self, _: &MatCat<f64>, rng: &mut SampleRng, a: usize, b: usize) -> Mat<f64> {
        let m = Self::stochastic(rng, b, a);
        Mat::from_fn(b, a, |i, j| m.get(i, j).magnitude())
    }

    fn arbitrary(&self, _: &MatCat<f64>, rng: &mut SampleRng, a: usize, b: usize) -> Mat<f64> {
        Mat::from_fn(b, a, |_, _| rng.gen_range(0.0..1.0))
    }

    fn causal_test(&self, t: &MatCat<f64>, rng: &mut SampleRng, a: usize, b: usize, n: usize) -> Vec<Mat<f64>> {
        row_blocks(&self.causal(t, rng, a, n * b), b)
    }
}

fn row_blocks<S: Scalar>(m: &Mat<S>, b: usize) -> Vec<Mat<S>> {
    (0..m.rows() / b).map(|i| m.submatrix(i * b, 0, b, m.cols())).collect()
}

/// Gaussian CP maps rescaled so that `Tr_out(C) ≤ u · I` with `u ≤ 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SubCausalCpmSampler;

fn rescale<S: FloatScalar>(f: CpmMap<S>, c: f64) -> CpmMap<S> {
    let choi = f.choi.scale(&S::from_f64(c));
    CpmMap::from_choi(f.in_dim, f.out_dim, choi).expect("shape kept")
}

fn trace_norm_bound<S: FloatScalar>(f: &CpmMap<S>) -> f64 {
    let (vals, _) = linalg::eigh(&f.output_trace());
    vals.last().copied().unwrap_or(0.0)
}

impl<S: FloatScalar> SubCausalSampler<Cpm<S>> for SubCausalCpmSampler {
    fn sub_causal(&self, _: &Cpm<S>, rng: &mut SampleRng, a: usize, b: usize) -> CpmMap<S> {
        let k = rng.gen_range(1..=2);
        let f = random_cpm(rng, a, b, k);
        let top = trace_norm_bound(&f);
        let u = rng.gen_range(0.1..=1.0);
        if top <= f64::MIN_POSITIVE {
            f
        } else {
            rescale(f, u / top)
        }
    }

    fn causal(&self, _: &Cpm<S>, rng: &mut SampleRng, a: usize, b: usize) -> CpmMap<S> {
        let k = rng.gen_range(a.div_ceil(b)..=a * b);
        random_channel(rng, a, b, k)
    }

    fn arbitrary(&self, _: &Cpm<S>, rng: &mut SampleRng, a: usize, b: usize) -> CpmMap<S> {
        let f = random_cpm(rng, a, b, 1);
        let top = trace_norm_bound(&f);
        let u = rng.gen_range(0.0..=1.6);
        if top <= f64::MIN_POSITIVE {
            f
        } else {
            rescale(f, u / top)
        }
    }

    fn causal_test(&self, _: &Cpm<S>, rng: &mut SampleRng, a: usize, b: usize, n: usize) -> Vec<CpmMap<S>> {
        // an instrument: Kraus blocks of one isometry a → n·b·k
        let k = rng.gen_range(1..=2usize).max(a.div_ceil(n * b));
        let v: Mat<S> = linalg::random_isometry(rng, n * b * k, a);
        (0..n)
            .map(|i| {
                let kraus: Vec<Mat<S>> = (0..k).map(|e| v.submatrix((i * k + e) * b, 0, b, a)).collect();
                from_kraus(a, b, &kraus).expect("shapes agree")
            })
            .collect()
    }
}

/// Every relation is sub-causal; causal ones are total.
#[derive(Clone, Copy, Debug, Default)]
pub struct RelSubCausalSampler;

impl SubCausalSampler<RelCat> for RelSubCausalSampler {
    fn sub_causal(&self, _: &RelCat, rng: &mut SampleRng, a: usize, b: usize) -> Mat<bool> {
        Mat::from_fn(b, a, |_, _| rng.gen_bool(0.4))
    }

    fn causal(&self, _: &RelCat, rng: &mut SampleRng, a: usize, b: usize) -> Mat<bool> {
        let mut m = Mat::from_fn(b, a, |_, _| rng.gen_bool(0.4));
        for j in 0..a {
            let i = rng.gen_range(0..b);
            m.set(i, j, true);
        }
        m
    }

    fn arbitrary(&self, t: &RelCat, rng: &mut SampleRng, a: usize, b: usize) -> Mat<bool> {
        self.sub_causal(t, rng, a, b)
    }

    fn causal_test(&self, t: &RelCat, rng: &mut SampleRng, a: usize, b: usize, n: usize) -> Vec<Mat<bool>> {
        let mut evs: Vec<Mat<bool>> = (0..n).map(|_| self.sub_causal(t, rng, a, b)).collect();
        for j in 0..a {
            let (e, i) = (rng.gen_range(0..n), rng.gen_range(0..b));
            evs[e].set(i, j, true);
        }
        evs
    }
}

fn dims(rng: &mut SampleRng, max_dim: usize) -> (usize, usize, usize) {
    let d = max_dim.max(1);
    (rng.gen_range(1..=d), rng.gen_range(1..=d), rng.gen_range(1..=d))
}

/// Commutativity, unit and associativity-where-defined of `⋁` on sampled
/// sub-causal triples.
pub fn check_pcm_laws<T, P>(t: &T, p: &P, max_dim: usize, samples: usize, seed: u64) -> LawReport
where
    T: SubCausal<Obj = usize>,
    P: SubCausalSampler<T>,
{
    let pa = PartialAdd::new(t);
    let mut report = LawReport::new(format!("pcm_laws[{}]", t.name()))
        .with_statement("f⋁g = g⋁f, f⋁0 = f, (f⋁g)⋁h = f⋁(g⋁h) whenever the left side is defined");
    for idx in 0..samples {
        let mut rng = sample_rng(seed, 0x5c01, idx as u64);
        let (a, b, _) = dims(&mut rng, max_dim);
        let f = p.sub_causal(t, &mut rng, a, b);
        let g = p.sub_causal(t, &mut rng, a, b);
        let h = p.sub_causal(t, &mut rng, a, b);
        let witness = |msg: &str| Failure::new(msg).inputs(vec![t.mor_json(&f), t.mor_json(&g), t.mor_json(&h)]);
        let fg = pa.ovee(&f, &g).ok().flatten();
        let gf = pa.ovee(&g, &f).ok().flatten();
        let comm = match (&fg, &gf) {
            (Some(x), Some(y)) => pa.same(x, y),
            (None, None) => true,
            _ => false,
        };
        report.check(comm, || witness("f⋁g and g⋁f disagree"));
        let unit = pa.ovee(&f, &pa.zero(&a, &b)).ok().flatten().is_some_and(|x| pa.same(&x, &f));
        report.check(unit, || witness("f⋁0 ≠ f"));
        if let Some(fg) = fg {
            if let Some(left) = pa.ovee(&fg, &h).ok().flatten() {
                let right = pa.ovee(&g, &h).ok().flatten().and_then(|gh| pa.ovee(&f, &gh).ok().flatten());
                let ok = right.is_some_and(|r| pa.same(&r, &left));
                report.check(ok, || witness("(f⋁g)⋁h defined but f⋁(g⋁h) is not equal to it"));
            }
        }
    }
    report
}

/// If `f + g` is sub-causal then so are `f` and `g`, on arbitrary samples.
pub fn check_downset<T, P>(t: &T, p: &P, max_dim: usize, samples: usize, seed: u64) -> LawReport
where
    T: SubCausal<Obj = usize>,
    P: SubCausalSampler<T>,
{
    let mut report =
        LawReport::new(format!("downset[{}]", t.name())).with_statement("f + g sub-causal ⟹ f, g sub-causal");
    for idx in 0..samples {
        let mut rng = sample_rng(seed, 0x5c02, idx as u64);
        let (a, b, _) = dims(&mut rng, max_dim);
        let f = p.arbitrary(t, &mut rng, a, b);
        let g = p.arbitrary(t, &mut rng, a, b);
        let sum = match t.add(&f, &g) {
            Ok(s) => s,
            Err(e) => {
                report.check(false, || Failure::new(e.to_string()));
                continue;
            }
        };
        if t.is_sub_causal(&sum) {
            let ok = t.is_sub_causal(&f) && t.is_sub_causal(&g);
            report.check(ok, || {
                Failure::new("sum is sub-causal but a summand is not").inputs(vec![t.mor_json(&f), t.mor_json(&g)])
            });
        }
    }
    if report.samples == 0 {
        report.note("no sampled sum was sub-causal");
    }
    report
}

/// Sub-causal morphisms are closed under `∘` and `⊗`, and identities,
/// discards and zeros are sub-causal.
pub fn check_sub_causal_closure<T, P>(t: &T, p: &P, max_dim: usize, samples: usize, seed: u64) -> LawReport
where
    T: SubCausal<Obj = usize>,
    P: SubCausalSampler<T>,
{
    let mut report = LawReport::new(format!("sub_causal_closure[{}]", t.name()))
        .with_statement("g∘f and f⊗g are sub-causal for sub-causal f, g");
    for idx in 0..samples {
        let mut rng = sample_rng(seed, 0x5c03, idx as u64);
        let (a, b, c) = dims(&mut rng, max_dim);
        let f = p.sub_causal(t, &mut rng, a, b);
        let g = p.sub_causal(t, &mut rng, b, c);
        let inputs = || vec![t.mor_json(&f), t.mor_json(&g)];
        let comp = t.compose(&g, &f).map(|h| t.is_sub_causal(&h)).unwrap_or(false);
        report.check(comp, || Failure::new("g∘f is not sub-causal").inputs(inputs()));
        let tens = t.is_sub_causal(&t.tensor(&f, &g));
        report.check(tens, || Failure::new("f⊗g is not sub-causal").inputs(inputs()));
        let structural = t.is_sub_causal(&t.identity(&a))
            && t.is_sub_causal(&t.discard(&a))
            && t.is_sub_causal(&t.zero(&a, &b));
        report.check(structural, || Failure::new("identity, discard or zero is not sub-causal"));
    }
    report
}

/// `η = cup / n` and `ε = cap` on `Mat_ℚ≥0`: both sub-causal, with
/// `(id ⊗ ε) ∘ (η ⊗ id) = (1/n) · id = (ε ⊗ id) ∘ (id ⊗ η)`.
pub fn check_scaled_snake(max_dim: usize) -> LawReport {
    let t = MatCat::<RatNonneg>::new();
    let mut report = LawReport::new("scaled_snake[mat_rat_nonneg]")
        .with_statement("cup/n and cap are sub-causal and both snakes equal (1/n)·id");
    for n in 1..=max_dim {
        let inv = RatNonneg::frac(1, n as u64);
        let eta = Mat::<RatNonneg>::cup(n).scale(&inv);
        let eps = Mat::<RatNonneg>::cap(n);
        let id = Mat::<RatNonneg>::identity(n);
        let target = id.scale(&inv);
        let left = id.kron(&eps).compose(&eta.kron(&id)).expect("snake shapes");
        let right = eps.kron(&id).compose(&id.kron(&eta)).expect("snake shapes");
        let ok = t.is_sub_causal(&eta) && t.is_sub_causal(&eps) && left == target && right == target;
        report.check(ok, || {
            Failure::new(format!("scaled snake fails at n = {n}")).sides(left.to_json(), target.to_json())
        });
    }
    report
}

/// A family of events `f_i : A → B_i` packaged as one carrier
/// `A → B_1 ⊕ … ⊕ B_n`.
#[derive(Clone, Debug)]
pub struct TestMorphism<O, M> {
    pub source: O,
    pub branches: Vec<O>,
    pub carrier: BlockMor<O, M>,
    /// The carrier is causal.
    pub causal: bool,
}

impl<O: Clone, M: Clone> TestMorphism<O, M> {
    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }
}

fn completion<T: SubCausal>(t: &T) -> Biproduct<T> {
    Biproduct { base: t.clone() }
}

/// Assembles the carrier column from its events.
pub fn test_from_events<T: SubCausal>(t: &T, events: Vec<T::Mor>) -> Result<TestMorphism<T::Obj, T::Mor>> {
    let first = events.first().ok_or_else(|| Error::Invalid("a test needs at least one event".into()))?;
    let source = t.dom(first);
    if events.iter().any(|e| t.dom(e) != source) {
        return Err(Error::TypeMismatch("events of a test share their source".into()));
    }
    let branches: Vec<T::Obj> = events.iter().map(|e| t.cod(e)).collect();
    let bp = completion(t);
    let carrier = bp.from_blocks(vec![source.clone()], branches.clone(), events.into_iter().map(|e| vec![e]).collect())?;
    let causal = is_causal(&bp, &carrier);
    Ok(TestMorphism {
        source,
        branches,
        carrier,
        causal,
    })
}

/// `f_i = ▷_i ∘ f`.
pub fn events<T: SubCausal>(t: &T, test: &TestMorphism<T::Obj, T::Mor>) -> Result<Vec<T::Mor>> {
    let bp = completion(t);
    (0..test.len())
        .map(|i| {
            let e = bp.compose(&bp.projection(&test.branches, i), &test.carrier)?;
            Ok(e.blocks[0][0].clone())
        })
        .collect()
}

/// Rebuilds the carrier from the events and compares.
pub fn joint_monicity_holds<T: SubCausal>(t: &T, test: &TestMorphism<T::Obj, T::Mor>) -> Result<bool> {
    let rebuilt = test_from_events(t, events(t, test)?)?;
    Ok(test
        .carrier
        .blocks
        .iter()
        .zip(&rebuilt.carrier.blocks)
        .all(|(x, y)| t.approx_eq(&x[0], &y[0])))
}

/// `∇ ∘ (carrier restricted to the selected branches)`.
pub fn coarse_grain<T: SubCausal>(t: &T, test: &TestMorphism<T::Obj, T::Mor>, subset: &[usize]) -> Result<T::Mor> {
    let first = *subset.first().ok_or_else(|| Error::Invalid("coarse-graining needs a branch".into()))?;
    if subset.iter().any(|&i| i >= test.len()) {
        return Err(Error::Invalid("branch index out of range".into()));
    }
    let target = &test.branches[first];
    if subset.iter().any(|&i| &test.branches[i] != target) {
        return Err(Error::TypeMismatch("merged branches must share a target".into()));
    }
    let bp = completion(t);
    let restricted = BlockMor {
        src: vec![test.source.clone()],
        tgt: vec![target.clone(); subset.len()],
        blocks: subset.iter().map(|&i| test.carrier.blocks[i].clone()).collect(),
    };
    let merged = bp.compose(&bp.codiagonal(target, subset.len()), &restricted)?;
    Ok(merged.blocks[0][0].clone())
}

/// Left fold `((f_{i1} + f_{i2}) + …)` of the selected events.
pub fn sum_events<T: SubCausal>(t: &T, events: &[T::Mor], subset: &[usize]) -> Result<T::Mor> {
    let (first, rest) = subset.split_first().ok_or_else(|| Error::Invalid("empty selection".into()))?;
    rest.iter().try_fold(events[*first].clone(), |acc, &i| t.add(&acc, &events[i]))
}

/// The test with the selected branches merged into one outcome, placed first.
pub fn coarse_grain_test<T: SubCausal>(
    t: &T,
    test: &TestMorphism<T::Obj, T::Mor>,
    subset: &[usize],
) -> Result<TestMorphism<T::Obj, T::Mor>> {
    let merged = coarse_grain(t, test, subset)?;
    let evs = events(t, test)?;
    let mut out = vec![merged];
    out.extend((0..test.len()).filter(|i| !subset.contains(i)).map(|i| evs[i].clone()));
    test_from_events(t, out)
}

/// Coarse-graining causal tests on a copower `A → n·B`: merged tests stay
/// causal, the merge equals the sum of events in either fold order, and
/// events recover the carrier.
pub fn check_coarse_graining<T, P>(t: &T, p: &P, max_dim: usize, samples: usize, seed: u64) -> LawReport
where
    T: SubCausal<Obj = usize>,
    P: SubCausalSampler<T>,
{
    let mut report = LawReport::new(format!("coarse_graining[{}]", t.name()))
        .with_statement("merging outcomes of a causal test gives a causal test; ∇∘κ_i = id");
    for idx in 0..samples {
        let mut rng = sample_rng(seed, 0x5c04, idx as u64);
        let (a, b, _) = dims(&mut rng, max_dim);
        let n = rng.gen_range(2..=4);
        let evs = p.causal_test(t, &mut rng, a, b, n);
        let test = match test_from_events(t, evs.clone()) {
            Ok(x) => x,
            Err(e) => {
                report.check(false, || Failure::new(e.to_string()));
                continue;
            }
        };
        let json = || Value::Array(evs.iter().map(|e| t.mor_json(e)).collect());
        report.check(test.causal, || Failure::new("sampled test is not causal").input(json()));
        let mut subset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if subset.is_empty() {
            subset.push(rng.gen_range(0..n));
        }
        let merged = coarse_grain_test(t, &test, &subset);
        report.check(merged.as_ref().is_ok_and(|m| m.causal), || {
            Failure::new("coarse-grained test is not causal").input(json()).input(json!(subset))
        });
        let direct = coarse_grain(t, &test, &subset);
        let left = sum_events(t, &evs, &subset);
        let rev: Vec<usize> = subset.iter().rev().copied().collect();
        let right = sum_events(t, &evs, &rev);
        let agree = match (direct, left, right) {
            (Ok(d), Ok(l), Ok(r)) => t.approx_eq(&d, &l) && t.approx_eq(&l, &r),
            _ => false,
        };
        report.check(agree, || Failure::new("∇∘carrier differs from the sum of events").input(json()).input(json!(subset)));
        let all: Vec<usize> = (0..n).collect();
        let total = coarse_grain(t, &test, &all).map(|m| is_causal(t, &m)).unwrap_or(false);
        report.check(total, || Failure::new("merging every branch is not causal").input(json()));
        let mono = joint_monicity_holds(t, &test).unwrap_or(false);
        report.check(mono, || Failure::new("events do not recover the carrier").input(json()));
    }
    report
}


#[cfg(test)]
mod tests;
