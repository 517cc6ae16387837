//! Test categories and the partial-arrow category `Par(B)`.

use std::fmt::Debug;

use rand::Rng;
use serde_json::{json, Value};

use super::SubStochasticSampler;
use crate::catcore::{sample_rng, SampleRng};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::report::{Failure, LawReport};
use crate::scalars::{RatNonneg, Scalar};

/// A category of total (causal) maps with finite coproducts `A + B` of
/// sizes `a + b` and a terminal object `1` of size one.
pub trait TestCategory: Sync {
    type Mor: Clone + Debug + Send + Sync;

    fn name(&self) -> String;
    fn dom(&self, f: &Self::Mor) -> usize;
    fn cod(&self, f: &Self::Mor) -> usize;
    fn identity(&self, a: usize) -> Self::Mor;
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    /// `κ_i : A → A + B` for `i = 0`, `B → A + B` for `i = 1`.
    fn coprojection(&self, a: usize, b: usize, i: usize) -> Self::Mor;
    /// `[f, g] : A + B → C`.
    fn cotuple(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    /// `! : A → 1`.
    fn bang(&self, a: usize) -> Self::Mor;
    fn equal(&self, f: &Self::Mor, g: &Self::Mor) -> bool;
    fn random_total(&self, rng: &mut SampleRng, a: usize, b: usize) -> Self::Mor;
    /// Total endomorphism of `n` exchanging points `i` and `j`.
    fn transposition(&self, n: usize, i: usize, j: usize) -> Self::Mor;
    /// Total endomorphism of `n ≥ 2` sending point 1 to point 0.
    fn collapse(&self, n: usize) -> Self::Mor;
    /// `h : A → B` with `f = κ₁ ∘ h`, built from `f : A → B + 1` when the
    /// last summand is never hit.
    fn restrict_left(&self, f: &Self::Mor) -> Option<Self::Mor>;
    fn mor_json(&self, f: &Self::Mor) -> Value;

    /// `▷₁ = [κ₁, κ₂∘!] : A + B → A + 1` and `▷₂ = [κ₂∘!, κ₁] : A + B → B + 1`.
    fn partial_projection(&self, a: usize, b: usize, i: usize) -> Self::Mor {
        let (keep, drop) = if i == 0 { (a, b) } else { (b, a) };
        let kept = self.coprojection(keep, 1, 0);
        let lost = self.compose(&self.coprojection(keep, 1, 1), &self.bang(drop)).expect("bang types");
        let res = if i == 0 { self.cotuple(&kept, &lost) } else { self.cotuple(&lost, &kept) };
        res.expect("cotuple types")
    }

    /// `f + g = [κ₁∘f, κ₂∘g]`.
    fn coproduct_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        let (c, d) = (self.cod(f), self.cod(g));
        let l = self.compose(&self.coprojection(c, d, 0), f)?;
        let r = self.compose(&self.coprojection(c, d, 1), g)?;
        self.cotuple(&l, &r)
    }
}

/// Finite sets and total functions.
#[derive(Clone, Copy, Debug, Default)]
pub struct FinSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFn {
    pub dom: usize,
    pub cod: usize,
    pub table: Vec<usize>,
}

impl FinFn {
    pub fn new(cod: usize, table: Vec<usize>) -> Result<Self> {
        if table.iter().any(|&x| x >= cod) {
            return Err(Error::Invalid("function value out of range".into()));
        }
        Ok(FinFn {
            dom: table.len(),
            cod,
            table,
        })
    }
}

impl TestCategory for FinSet {
    type Mor = FinFn;

    fn name(&self) -> String {
        "finset".into()
    }

    fn dom(&self, f: &FinFn) -> usize {
        f.dom
    }

    fn cod(&self, f: &FinFn) -> usize {
        f.cod
    }

    fn identity(&self, a: usize) -> FinFn {
        FinFn {
            dom: a,
            cod: a,
            table: (0..a).collect(),
        }
    }

    fn compose(&self, g: &FinFn, f: &FinFn) -> Result<FinFn> {
        if f.cod != g.dom {
            return Err(Error::shape(format!("cannot compose {} → {} after {} → {}", g.dom, g.cod, f.dom, f.cod)));
        }
        Ok(FinFn {
            dom: f.dom,
            cod: g.cod,
            table: f.table.iter().map(|&x| g.table[x]).collect(),
        })
    }

    fn coprojection(&self, a: usize, b: usize, i: usize) -> FinFn {
        let (n, off) = if i == 0 { (a, 0) } else { (b, a) };
        FinFn {
            dom: n,
            cod: a + b,
            table: (off..off + n).collect(),
        }
    }

    fn cotuple(&self, f: &FinFn, g: &FinFn) -> Result<FinFn> {
        if f.cod != g.cod {
            return Err(Error::shape("cotuple legs need a common target"));
        }
        Ok(FinFn {
            dom: f.dom + g.dom,
            cod: f.cod,
            table: f.table.iter().chain(&g.table).copied().collect(),
        })
    }

    fn bang(&self, a: usize) -> FinFn {
        FinFn {
            dom: a,
            cod: 1,
            table: vec![0; a],
        }
    }

    fn equal(&self, f: &FinFn, g: &FinFn) -> bool {
        f == g
    }

    fn random_total(&self, rng: &mut SampleRng, a: usize, b: usize) -> FinFn {
        FinFn {
            dom: a,
            cod: b,
            table: (0..a).map(|_| rng.gen_range(0..b)).collect(),
        }
    }

    fn transposition(&self, n: usize, i: usize, j: usize) -> FinFn {
        let mut t = self.identity(n);
        t.table.swap(i, j);
        t
    }

    fn collapse(&self, n: usize) -> FinFn {
        let mut t = self.identity(n);
        t.table[1] = 0;
        t
    }

    fn restrict_left(&self, f: &FinFn) -> Option<FinFn> {
        let b = f.cod.checked_sub(1)?;
        f.table.iter().all(|&x| x < b).then(|| FinFn {
            dom: f.dom,
            cod: b,
            table: f.table.clone(),
        })
    }

    fn mor_json(&self, f: &FinFn) -> Value {
        json!({"dom": f.dom, "cod": f.cod, "table": f.table})
    }
}

/// Column-stochastic matrices over `ℚ≥0`; coproducts are direct sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct Stochastic;

impl TestCategory for Stochastic {
    type Mor = Mat<RatNonneg>;

    fn name(&self) -> String {
        "stochastic_rat_nonneg".into()
    }

    fn dom(&self, f: &Mat<RatNonneg>) -> usize {
        f.cols()
    }

    fn cod(&self, f: &Mat<RatNonneg>) -> usize {
        f.rows()
    }

    fn identity(&self, a: usize) -> Mat<RatNonneg> {
        Mat::identity(a)
    }

    fn compose(&self, g: &Mat<RatNonneg>, f: &Mat<RatNonneg>) -> Result<Mat<RatNonneg>> {
        g.compose(f)
    }

    fn coprojection(&self, a: usize, b: usize, i: usize) -> Mat<RatNonneg> {
        let (n, off) = if i == 0 { (a, 0) } else { (b, a) };
        Mat::from_fn(a + b, n, |r, c| if r == c + off { RatNonneg::one() } else { RatNonneg::zero() })
    }

    fn cotuple(&self, f: &Mat<RatNonneg>, g: &Mat<RatNonneg>) -> Result<Mat<RatNonneg>> {
        f.hstack(g)
    }

    fn bang(&self, a: usize) -> Mat<RatNonneg> {
        Mat::discard(a)
    }

    fn equal(&self, f: &Mat<RatNonneg>, g: &Mat<RatNonneg>) -> bool {
        f == g
    }

    fn random_total(&self, rng: &mut SampleRng, a: usize, b: usize) -> Mat<RatNonneg> {
        SubStochasticSampler::stochastic(rng, b, a)
    }

    fn transposition(&self, n: usize, i: usize, j: usize) -> Mat<RatNonneg> {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, j);
        Mat::from_fn(n, n, |r, c| if perm[c] == r { RatNonneg::one() } else { RatNonneg::zero() })
    }

    fn collapse(&self, n: usize) -> Mat<RatNonneg> {
        Mat::from_fn(n, n, |r, c| {
            let target = if c == 1 { 0 } else { c };
            if r == target {
                RatNonneg::one()
            } else {
                RatNonneg::zero()
            }
        })
    }

    fn restrict_left(&self, f: &Mat<RatNonneg>) -> Option<Mat<RatNonneg>> {
        let b = f.rows().checked_sub(1)?;
        (0..f.cols())
            .all(|j| f.get(b, j).is_zero())
            .then(|| f.submatrix(0, 0, b, f.cols()))
    }

    fn mor_json(&self, f: &Mat<RatNonneg>) -> Value {
        f.to_json()
    }
}

/// A test category whose `▷₁` first identifies points 0 and 1 of `A`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CorruptedPartialProjection<B>(pub B);

impl<B: TestCategory> TestCategory for CorruptedPartialProjection<B> {
    type Mor = B::Mor;

    fn name(&self) -> String {
        format!("corrupted_partial_projection[{}]", self.0.name())
    }
    fn dom(&self, f: &B::Mor) -> usize {
        self.0.dom(f)
    }
    fn cod(&self, f: &B::Mor) -> usize {
        self.0.cod(f)
    }
    fn identity(&self, a: usize) -> B::Mor {
        self.0.identity(a)
    }
    fn compose(&self, g: &B::Mor, f: &B::Mor) -> Result<B::Mor> {
        self.0.compose(g, f)
    }
    fn coprojection(&self, a: usize, b: usize, i: usize) -> B::Mor {
        self.0.coprojection(a, b, i)
    }
    fn cotuple(&self, f: &B::Mor, g: &B::Mor) -> Result<B::Mor> {
        self.0.cotuple(f, g)
    }
    fn bang(&self, a: usize) -> B::Mor {
        self.0.bang(a)
    }
    fn equal(&self, f: &B::Mor, g: &B::Mor) -> bool {
        self.0.equal(f, g)
    }
    fn random_total(&self, rng: &mut SampleRng, a: usize, b: usize) -> B::Mor {
        self.0.random_total(rng, a, b)
    }
    fn transposition(&self, n: usize, i: usize, j: usize) -> B::Mor {
        self.0.transposition(n, i, j)
    }
    fn collapse(&self, n: usize) -> B::Mor {
        self.0.collapse(n)
    }
    fn restrict_left(&self, f: &B::Mor) -> Option<B::Mor> {
        self.0.restrict_left(f)
    }
    fn mor_json(&self, f: &B::Mor) -> Value {
        self.0.mor_json(f)
    }

    fn partial_projection(&self, a: usize, b: usize, i: usize) -> B::Mor {
        let honest = self.0.partial_projection(a, b, i);
        if i != 0 || a < 2 {
            return honest;
        }
        let squash = self.0.coproduct_mor(&self.0.collapse(a), &self.0.identity(b)).expect("coproduct types");
        self.0.compose(&honest, &squash).expect("endomorphism")
    }
}

/// A morphism `A → B + 1` of the underlying test category.
#[derive(Clone, Debug)]
pub struct PartialArrow<M> {
    pub dom: usize,
    pub cod: usize,
    pub arrow: M,
}

impl<M> PartialArrow<M> {
    pub fn new<B: TestCategory<Mor = M>>(t: &B, arrow: M) -> Result<Self> {
        let (dom, c) = (t.dom(&arrow), t.cod(&arrow));
        let cod = c.checked_sub(1).ok_or_else(|| Error::shape("a partial arrow targets B + 1"))?;
        Ok(PartialArrow { dom, cod, arrow })
    }
}

/// `κ₁ ∘ f`.
pub fn par_lift<B: TestCategory>(t: &B, f: &B::Mor) -> PartialArrow<B::Mor> {
    let (a, b) = (t.dom(f), t.cod(f));
    let arrow = t.compose(&t.coprojection(b, 1, 0), f).expect("lift types");
    PartialArrow { dom: a, cod: b, arrow }
}

pub fn par_identity<B: TestCategory>(t: &B, a: usize) -> PartialArrow<B::Mor> {
    par_lift(t, &t.identity(a))
}

/// `κ₂ ∘ ! : A → B + 1`.
pub fn par_zero<B: TestCategory>(t: &B, a: usize, b: usize) -> PartialArrow<B::Mor> {
    let arrow = t.compose(&t.coprojection(b, 1, 1), &t.bang(a)).expect("zero types");
    PartialArrow { dom: a, cod: b, arrow }
}

/// Kleisli composite `[g, κ₂] ∘ f`.
pub fn par_compose<B: TestCategory>(
    t: &B,
    g: &PartialArrow<B::Mor>,
    f: &PartialArrow<B::Mor>,
) -> Result<PartialArrow<B::Mor>> {
    if f.cod != g.dom {
        return Err(Error::shape(format!("partial arrows {} and {} do not meet", f.cod, g.dom)));
    }
    let lifted = t.cotuple(&g.arrow, &t.coprojection(g.cod, 1, 1))?;
    Ok(PartialArrow {
        dom: f.dom,
        cod: g.cod,
        arrow: t.compose(&lifted, &f.arrow)?,
    })
}

/// `(! + id₁) ∘ f = κ₁ ∘ !`.
pub fn is_total_arrow<B: TestCategory>(t: &B, f: &PartialArrow<B::Mor>) -> bool {
    let collapse = t.coproduct_mor(&t.bang(f.cod), &t.identity(1)).expect("coproduct types");
    let lhs = t.compose(&collapse, &f.arrow).expect("collapse types");
    let rhs = t.compose(&t.coprojection(1, 1, 0), &t.bang(f.dom)).expect("bang types");
    t.equal(&lhs, &rhs)
}

/// Joint monicity of `▷₁, ▷₂` against transposed and random neighbours,
/// the `▷ ∘ κ` equations, and the characterisation of total partial arrows
/// as those of the form `κ₁ ∘ h`, with `h` constructed.
pub fn check_test_category<B: TestCategory>(t: &B, max_dim: usize, samples: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new(format!("test_category[{}]", t.name()))
        .with_statement("▷₁, ▷₂ jointly monic; a partial arrow is total iff it factors as κ₁∘h");
    let d = max_dim.max(1);
    for idx in 0..samples {
        let mut rng = sample_rng(seed, 0x7e57, idx as u64);
        let (a, b, x) = (rng.gen_range(1..=d), rng.gen_range(1..=d), rng.gen_range(1..=d));
        let p1 = t.partial_projection(a, b, 0);
        let p2 = t.partial_projection(a, b, 1);
        let events = |f: &B::Mor| -> (B::Mor, B::Mor) {
            (t.compose(&p1, f).expect("event types"), t.compose(&p2, f).expect("event types"))
        };
        let f = t.random_total(&mut rng, x, a + b);
        let (e1, e2) = events(&f);
        let mut rivals: Vec<B::Mor> = Vec::new();
        for i in 0..a + b {
            for j in i + 1..a + b {
                rivals.push(t.compose(&t.transposition(a + b, i, j), &f).expect("endomorphism"));
            }
        }
        rivals.push(t.random_total(&mut rng, x, a + b));
        for g in rivals {
            if t.equal(&f, &g) {
                continue;
            }
            let (g1, g2) = events(&g);
            let separated = !(t.equal(&e1, &g1) && t.equal(&e2, &g2));
            report.check(separated, || {
                Failure::new("distinct morphisms into A + B share both events")
                    .inputs(vec![t.mor_json(&f), t.mor_json(&g)])
                    .input(json!({"a": a, "b": b}))
            });
        }
        let k1 = t.coprojection(a, b, 0);
        let k2 = t.coprojection(a, b, 1);
        let back1 = t.compose(&p1, &k1).expect("κ types");
        let back2 = t.compose(&p1, &k2).expect("κ types");
        let ok = t.equal(&back1, &t.coprojection(a, 1, 0))
            && t.equal(&back2, &t.compose(&t.coprojection(a, 1, 1), &t.bang(b)).expect("bang types"));
        report.check(ok, || Failure::new("▷₁∘κ₁ ≠ κ₁ or ▷₁∘κ₂ ≠ κ₂∘!").input(json!({"a": a, "b": b})));

        let arrow = if rng.gen_bool(0.5) {
            par_lift(t, &t.random_total(&mut rng, x, b))
        } else {
            PartialArrow::new(t, t.random_total(&mut rng, x, b + 1)).expect("targets b + 1")
        };
        let total = is_total_arrow(t, &arrow);
        let factors = t
            .restrict_left(&arrow.arrow)
            .is_some_and(|h| t.equal(&par_lift(t, &h).arrow, &arrow.arrow));
        report.check(total == factors, || {
            Failure::new(format!("totality ({total}) disagrees with factoring through κ₁ ({factors})"))
                .input(t.mor_json(&arrow.arrow))
        });
    }
    report
}
