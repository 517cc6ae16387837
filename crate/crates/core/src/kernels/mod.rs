//! Dagger kernels, cokernels, images and the orthomodular lattice `DKer(A)`.
//!
//! A kernel on an ambient object `n` is stored either as an isometry
//! `k : r → n` (float backends) or as a projection `p : n → n` (exact
//! backends and `Rel`). Kernels are always compared through projections.

mod backends;

use rand::Rng;
use serde_json::{json, Value};

use crate::catcore::{sample_rng, SampleRng};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::report::{Failure, LawReport};
use crate::scalars::Scalar;

pub use backends::{ExactKernels, FloatKernels, RelKernels};

#[derive(Clone, Debug, PartialEq)]
pub enum KernelForm<S> {
    Isometry(Mat<S>),
    Projection(Mat<S>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelRep<S> {
    pub ambient: usize,
    pub rank: usize,
    pub form: KernelForm<S>,
    /// The larger-gap rank heuristic decided some rank on the way here.
    pub heuristic: bool,
}

impl<S: Scalar> KernelRep<S> {
    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    pub fn is_top(&self) -> bool {
        self.rank == self.ambient
    }
}

/// Kernel primitives of one backend. Everything else is derived from these.
pub trait KernelBackend: Sync {
    type S: Scalar;

    fn name(&self) -> String;
    fn tolerance(&self) -> f64;

    /// `ker(f)` for `f : n → m`, on ambient `n`.
    fn kernel(&self, f: &Mat<Self::S>) -> KernelRep<Self::S>;
    /// `im(f) = ker(coker(f))` for `f : n → m`, on ambient `m`.
    fn image(&self, f: &Mat<Self::S>) -> KernelRep<Self::S>;
    /// `k⊥ = coker(k)†`.
    fn complement(&self, k: &KernelRep<Self::S>) -> KernelRep<Self::S>;
    /// A monomorphism `r → n` representing `k`.
    fn mono(&self, k: &KernelRep<Self::S>) -> Mat<Self::S>;
    /// `r` with `r ∘ mono(k) = id`.
    fn retraction(&self, k: &KernelRep<Self::S>) -> Mat<Self::S>;
    /// The projection `mono ∘ retraction`.
    fn projection(&self, k: &KernelRep<Self::S>) -> Mat<Self::S>;
    /// A morphism `cols → rows` drawn for lattice sampling.
    fn random_morphism(&self, rng: &mut SampleRng, rows: usize, cols: usize) -> Mat<Self::S>;

    fn compose(&self, g: &Mat<Self::S>, f: &Mat<Self::S>) -> Mat<Self::S> {
        g.mul_unchecked(f)
    }

    fn dagger(&self, f: &Mat<Self::S>) -> Mat<Self::S> {
        f.dagger()
    }

    fn deviation(&self, f: &Mat<Self::S>, g: &Mat<Self::S>) -> f64 {
        f.deviation(g)
    }

    fn close(&self, f: &Mat<Self::S>, g: &Mat<Self::S>) -> bool {
        self.deviation(f, g) <= self.tolerance()
    }

    fn top(&self, n: usize) -> KernelRep<Self::S> {
        self.kernel(&Mat::zeros(0, n))
    }

    fn bottom(&self, n: usize) -> KernelRep<Self::S> {
        self.image(&Mat::zeros(n, 0))
    }
}

fn heuristic<S>(ks: &[&KernelRep<S>]) -> bool {
    ks.iter().any(|k| k.heuristic)
}

/// `coker(f) = ker(f†)†`.
pub fn cokernel<B: KernelBackend>(b: &B, f: &Mat<B::S>) -> Mat<B::S> {
    b.dagger(&b.mono(&b.kernel(&b.dagger(f))))
}

/// `coim(f) = coker(ker(f))`.
pub fn coimage<B: KernelBackend>(b: &B, f: &Mat<B::S>) -> Mat<B::S> {
    cokernel(b, &b.mono(&b.kernel(f)))
}

pub fn leq<B: KernelBackend>(b: &B, k: &KernelRep<B::S>, l: &KernelRep<B::S>) -> bool {
    let (p, q) = (b.projection(k), b.projection(l));
    b.close(&b.compose(&q, &p), &p)
}

pub fn kernel_eq<B: KernelBackend>(b: &B, k: &KernelRep<B::S>, l: &KernelRep<B::S>) -> bool {
    k.ambient == l.ambient && b.close(&b.projection(k), &b.projection(l))
}

pub fn kernel_deviation<B: KernelBackend>(b: &B, k: &KernelRep<B::S>, l: &KernelRep<B::S>) -> f64 {
    if k.ambient != l.ambient {
        return f64::INFINITY;
    }
    b.deviation(&b.projection(k), &b.projection(l))
}

/// `k ∧ l := k ∘ ker(coker(l) ∘ k)`.
pub fn meet<B: KernelBackend>(b: &B, k: &KernelRep<B::S>, l: &KernelRep<B::S>) -> Result<KernelRep<B::S>> {
    if k.ambient != l.ambient {
        return Err(Error::Precondition(format!(
            "meet of kernels on ambients {} and {}",
            k.ambient, l.ambient
        )));
    }
    let mk = b.mono(k);
    let coker_l = b.dagger(&b.mono(&b.complement(l)));
    let inner = b.kernel(&b.compose(&coker_l, &mk));
    let mut out = b.image(&b.compose(&mk, &b.mono(&inner)));
    out.heuristic |= heuristic(&[k, l, &inner]);
    Ok(out)
}

/// `k ∨ l := (k⊥ ∧ l⊥)⊥`.
pub fn join<B: KernelBackend>(b: &B, k: &KernelRep<B::S>, l: &KernelRep<B::S>) -> Result<KernelRep<B::S>> {
    Ok(b.complement(&meet(b, &b.complement(k), &b.complement(l))?))
}

/// `{"ambient", "projection"}`.
pub fn kernel_json<B: KernelBackend>(b: &B, k: &KernelRep<B::S>) -> Value {
    json!({"ambient": k.ambient, "projection": b.projection(k).to_json()})
}

/// A pair of kernels that share part of their generating columns with
/// probability one half, so meets and joins are often nontrivial.
pub fn sample_kernel_pair<B: KernelBackend>(
    b: &B,
    rng: &mut SampleRng,
    n: usize,
) -> (KernelRep<B::S>, KernelRep<B::S>) {
    let (cf, cg) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
    let f = b.random_morphism(rng, n, cf);
    let g = b.random_morphism(rng, n, cg);
    let g = if rng.gen_bool(0.5) && f.cols() > 0 {
        let keep: Vec<usize> = (0..f.cols()).filter(|_| rng.gen_bool(0.5)).collect();
        f.select_cols(&keep).hstack(&g).expect("same height")
    } else {
        g
    };
    (b.image(&f), b.image(&g))
}

/// A sub-kernel of `k`: the image of `k` after a random morphism.
pub fn sample_subkernel<B: KernelBackend>(b: &B, rng: &mut SampleRng, k: &KernelRep<B::S>) -> KernelRep<B::S> {
    let r = k.rank;
    let c = rng.gen_range(0..=r);
    let h = b.random_morphism(rng, r, c);
    b.image(&b.compose(&b.mono(k), &h))
}

/// A rank-one kernel: the image of a nonzero state.
pub fn sample_atom<B: KernelBackend>(b: &B, rng: &mut SampleRng, n: usize) -> KernelRep<B::S> {
    loop {
        let v = b.random_morphism(rng, n, 1);
        let a = b.image(&v);
        if a.rank == 1 {
            return a;
        }
    }
}

const STREAM_ORTHOMODULAR: u64 = 0x0a11;
const STREAM_IMAGE_MEET: u64 = 0x0a12;
const STREAM_COVERING: u64 = 0x0a13;
const STREAM_FACTOR: u64 = 0x0a14;

fn lattice_failure<B: KernelBackend>(b: &B, msg: &str, ks: &[&KernelRep<B::S>], lhs: &KernelRep<B::S>, rhs: &KernelRep<B::S>) -> Failure {
    Failure::new(msg)
        .inputs(ks.iter().map(|k| kernel_json(b, k)).collect())
        .sides(kernel_json(b, lhs), kernel_json(b, rhs))
        .deviation(kernel_deviation(b, lhs, rhs))
}

fn note_heuristic(report: &mut LawReport, count: usize) {
    if count > 0 {
        report.note(format!("rank decided by the larger-gap heuristic in {count} samples"));
    }
}

/// Orthomodularity `a ≤ b ⟹ b = a ∨ (b ∧ a⊥)` on sampled `a ≤ b`, together
/// with the ortholattice axioms on sampled triples.
pub fn check_orthomodular<B: KernelBackend>(b: &B, n: usize, samples: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new(format!("{}/orthomodular[{n}]", b.name()))
        .with_statement("a ≤ b implies b = a ∨ (b ∧ a⊥); ∧, ∨, ⊥ form an ortholattice with a ∨ a⊥ = 1 and a ∧ a⊥ = 0");
    let mut flagged = 0;
    for i in 0..samples {
        let mut rng = sample_rng(seed, STREAM_ORTHOMODULAR, i as u64);
        let (top, bottom) = (b.top(n), b.bottom(n));
        let (x, c) = sample_kernel_pair(b, &mut rng, n);
        let a = sample_subkernel(b, &mut rng, &x);
        let bb = x;
        let run = || -> Result<Vec<(&'static str, KernelRep<B::S>, KernelRep<B::S>)>> {
            let ac = b.complement(&a);
            let mut eqs = vec![
                ("orthomodular law", bb.clone(), join(b, &a, &meet(b, &bb, &ac)?)?),
                ("a ∨ a⊥ = 1", join(b, &a, &ac)?, top.clone()),
                ("a ∧ a⊥ = 0", meet(b, &a, &ac)?, bottom.clone()),
                ("a⊥⊥ = a", b.complement(&ac), a.clone()),
                ("a ∧ b = b ∧ a", meet(b, &a, &c)?, meet(b, &c, &a)?),
                ("a ∨ b = b ∨ a", join(b, &a, &c)?, join(b, &c, &a)?),
                ("a ∧ a = a", meet(b, &c, &c)?, c.clone()),
                ("a ∧ 1 = a", meet(b, &c, &top)?, c.clone()),
                ("a ∧ (a ∨ b) = a", meet(b, &c, &join(b, &c, &bb)?)?, c.clone()),
                ("a ∨ (a ∧ b) = a", join(b, &c, &meet(b, &c, &bb)?)?, c.clone()),
                (
                    "(a ∧ b) ∧ c = a ∧ (b ∧ c)",
                    meet(b, &meet(b, &a, &bb)?, &c)?,
                    meet(b, &a, &meet(b, &bb, &c)?)?,
                ),
                ("a ≤ b gives a ∧ b = a", meet(b, &a, &bb)?, a.clone()),
            ];
            // complements reverse order
            eqs.push(("a ≤ b gives b⊥ ∧ a⊥ = b⊥", meet(b, &b.complement(&bb), &ac)?, b.complement(&bb)));
            Ok(eqs)
        };
        report.samples += 1;
        match run() {
            Ok(eqs) => {
                if eqs.iter().any(|(_, l, r)| l.heuristic || r.heuristic) {
                    flagged += 1;
                }
                for (name, lhs, rhs) in &eqs {
                    let ok = kernel_eq(b, lhs, rhs);
                    report.check(ok, || lattice_failure(b, name, &[&a, &bb, &c], lhs, rhs));
                }
            }
            Err(e) => report.fail(Failure::new(e.to_string())),
        }
    }
    note_heuristic(&mut report, flagged);
    report
}

/// `im(k ∘ k† ∘ l) = k ∧ (l ∨ k⊥)` on sampled kernel pairs.
pub fn check_image_meet_lemma<B: KernelBackend>(b: &B, n: usize, samples: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new(format!("{}/image_meet_lemma[{n}]", b.name()))
        .with_statement("im(k ∘ k† ∘ l) = k ∧ (l ∨ k⊥)");
    let mut flagged = 0;
    for i in 0..samples {
        let mut rng = sample_rng(seed, STREAM_IMAGE_MEET, i as u64);
        let (k, l) = sample_kernel_pair(b, &mut rng, n);
        report.samples += 1;
        let lhs = b.image(&b.compose(&b.projection(&k), &b.mono(&l)));
        let rhs = match join(b, &l, &b.complement(&k)).and_then(|j| meet(b, &k, &j)) {
            Ok(r) => r,
            Err(e) => {
                report.fail(Failure::new(e.to_string()));
                continue;
            }
        };
        if lhs.heuristic || rhs.heuristic {
            flagged += 1;
        }
        report.check(kernel_eq(b, &lhs, &rhs), || lattice_failure(b, "image-meet lemma", &[&k, &l], &lhs, &rhs));
    }
    note_heuristic(&mut report, flagged);
    report
}

/// `b ∧ (a ∨ b⊥)` is an atom or zero for atoms `a`.
pub fn check_covering_law<B: KernelBackend>(b: &B, n: usize, samples: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new(format!("{}/covering_law[{n}]", b.name()))
        .with_statement("for every atom a and kernel b, b ∧ (a ∨ b⊥) is an atom or zero");
    for i in 0..samples {
        let mut rng = sample_rng(seed, STREAM_COVERING, i as u64);
        let a = sample_atom(b, &mut rng, n);
        let (x, _) = sample_kernel_pair(b, &mut rng, n);
        report.samples += 1;
        match join(b, &a, &b.complement(&x)).and_then(|j| meet(b, &x, &j)) {
            Ok(r) => report.check(r.rank <= 1, || {
                Failure::new(format!("b ∧ (a ∨ b⊥) has rank {}", r.rank))
                    .inputs(vec![kernel_json(b, &a), kernel_json(b, &x)])
                    .sides(kernel_json(b, &r), json!("rank ≤ 1"))
            }),
            Err(e) => report.fail(Failure::new(e.to_string())),
        }
    }
    report
}

/// Every nonzero kernel dominates an atom.
pub fn check_atomicity<B: KernelBackend>(b: &B, n: usize, samples: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new(format!("{}/atomicity[{n}]", b.name()))
        .with_statement("every nonzero kernel lies above a rank-one kernel");
    for i in 0..samples {
        let mut rng = sample_rng(seed, STREAM_COVERING ^ 0xff, i as u64);
        let (k, _) = sample_kernel_pair(b, &mut rng, n);
        if k.is_zero() {
            continue;
        }
        report.samples += 1;
        let atom = loop {
            let h = b.random_morphism(&mut rng, k.rank, 1);
            let a = b.image(&b.compose(&b.mono(&k), &h));
            if a.rank == 1 {
                break a;
            }
        };
        report.check(leq(b, &atom, &k), || {
            Failure::new("atom not below kernel").inputs(vec![kernel_json(b, &k), kernel_json(b, &atom)])
        });
    }
    report
}

/// `f ∘ ker(f) = 0`, and every sampled `g` with `f ∘ g = 0` factors through
/// `ker(f)`; also the coimage/image factorisation of `f`.
pub fn check_kernel_factorisation<B: KernelBackend>(b: &B, n: usize, samples: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new(format!("{}/kernel_factorisation[{n}]", b.name()))
        .with_statement("f ∘ ker(f) = 0, g factors through ker(f) whenever f ∘ g = 0, and f factors through im(f)");
    for i in 0..samples {
        let mut rng = sample_rng(seed, STREAM_FACTOR, i as u64);
        let m = rng.gen_range(1..=n);
        // low-rank f so its kernel is usually nonzero
        let inner = rng.gen_range(0..=n);
        let f = b.compose(&b.random_morphism(&mut rng, m, inner), &b.random_morphism(&mut rng, inner, n));
        let k = b.kernel(&f);
        let mk = b.mono(&k);
        report.samples += 1;
        let fk = b.compose(&f, &mk);
        report.check(b.close(&fk, &Mat::zeros(m, k.rank)), || {
            Failure::new("f ∘ ker(f) ≠ 0").input(f.to_json()).deviation(fk.max_magnitude())
        });
        let hc = rng.gen_range(1..=n);
        let h = b.random_morphism(&mut rng, k.rank, hc);
        let g = b.compose(&mk, &h);
        let x = b.compose(&b.retraction(&k), &g);
        let rebuilt = b.compose(&mk, &x);
        report.check(b.close(&rebuilt, &g), || {
            Failure::new("g with f ∘ g = 0 does not factor through ker(f)")
                .inputs(vec![f.to_json(), g.to_json()])
                .deviation(b.deviation(&rebuilt, &g))
        });
        let im = b.image(&f);
        let through = b.compose(&b.projection(&im), &f);
        report.check(b.close(&through, &f), || {
            Failure::new("f does not factor through im(f)").input(f.to_json()).deviation(b.deviation(&through, &f))
        });
        let coim = coimage(b, &f);
        let cc = b.compose(&coim, &mk);
        report.check(b.close(&cc, &Mat::zeros(coim.rows(), k.rank)), || {
            Failure::new("coim(f) ∘ ker(f) ≠ 0").input(f.to_json())
        });
    }
    report
}

/// `im(f ⊗ g) = im(f) ⊗ im(g)`.
pub fn check_tensor_images<B: KernelBackend>(b: &B, n: usize, samples: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new(format!("{}/tensor_images[{n}]", b.name()))
        .with_statement("im(f ⊗ g) = im(f) ⊗ im(g)");
    for i in 0..samples {
        let mut rng = sample_rng(seed, STREAM_FACTOR ^ 0xff, i as u64);
        let dims: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=n.max(1))).collect();
        let f = b.random_morphism(&mut rng, dims[0], dims[1]);
        let g = b.random_morphism(&mut rng, dims[2], dims[3]);
        report.samples += 1;
        let lhs = b.projection(&b.image(&f.kron(&g)));
        let rhs = b.projection(&b.image(&f)).kron(&b.projection(&b.image(&g)));
        report.check(b.close(&lhs, &rhs), || {
            Failure::new("im(f ⊗ g) ≠ im(f) ⊗ im(g)")
                .inputs(vec![f.to_json(), g.to_json()])
                .sides(lhs.to_json(), rhs.to_json())
                .deviation(b.deviation(&lhs, &rhs))
        });
    }
    report
}

/// `f† ∘ f = 0 ⟹ f = 0`, with zero morphisms mixed into the samples.
pub fn check_dagger_nondegenerate<B: KernelBackend>(b: &B, n: usize, samples: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new(format!("{}/dagger_nondegenerate[{n}]", b.name()))
        .with_statement("f† ∘ f = 0 implies f = 0");
    for i in 0..samples {
        let mut rng = sample_rng(seed, STREAM_FACTOR ^ 0xf0, i as u64);
        let (r, c) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
        let f = if i % 4 == 0 { Mat::zeros(r, c) } else { b.random_morphism(&mut rng, r, c) };
        let ff = b.compose(&b.dagger(&f), &f);
        report.samples += 1;
        let gram_zero = b.close(&ff, &Mat::zeros(c, c));
        let f_zero = b.close(&f, &Mat::zeros(r, c));
        report.check(!gram_zero || f_zero, || Failure::new("f† ∘ f = 0 but f ≠ 0").input(f.to_json()));
    }
    report
}

#[cfg(test)]
mod tests;
