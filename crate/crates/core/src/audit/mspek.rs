//! Principle checks on `MSpek`, using saturated generated closures.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use serde_json::json;

use super::Params;
use crate::backends::spek::{closure_generate, iv_permutations, spek_pure_exclusion_witness, Closure, ClosureSpec, Relation};
use crate::catcore::sample_rng;
use crate::error::{Error, Result};
use crate::report::{Failure, LawReport};

/// The `Spek` and `MSpek` closures at one generator power.
#[derive(Clone, Debug)]
pub struct SpekTheory {
    pub n: u8,
    pub spek: Closure,
    pub mspek: Closure,
}

impl SpekTheory {
    /// Errors unless both closures saturate within the budget. Results are
    /// cached per process.
    pub fn generate(n: u8, budget: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(u8, usize), Arc<SpekTheory>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = guard.get(&(n, budget)) {
            return Ok(t.clone());
        }
        let t = Arc::new(Self::generate_uncached(n, budget)?);
        guard.insert((n, budget), t.clone());
        Ok(t)
    }

    fn generate_uncached(n: u8, budget: usize) -> Result<Self> {
        let spek = closure_generate(&ClosureSpec::spek(n).with_budget(budget));
        let mspek = closure_generate(&ClosureSpec::mspek(n).with_budget(budget));
        for (name, c) in [("Spek", &spek), ("MSpek", &mspek)] {
            if !c.saturated {
                return Err(Error::Precondition(format!(
                    "{name} closure at n = {n} did not saturate within {budget} morphisms ({} generated); \
                     audit aborted rather than reporting on a partial theory",
                    c.len()
                )));
            }
        }
        Ok(SpekTheory { n, spek, mspek })
    }

    pub fn is_pure(&self, r: &Relation) -> bool {
        self.spek.contains(r)
    }
}

/// `(id ⊗ discard) ∘ ψ` for a two-wire state.
fn marginal(psi: &Relation) -> Relation {
    Relation::identity(1).tensor(&Relation::discard(1)).after(psi).expect("two-wire state")
}

fn relation_json(r: &Relation) -> serde_json::Value {
    r.to_json()
}

/// A permutation `U` of the second wire with `(id ⊗ U) ∘ a = b`.
fn environment_permutation(a: &Relation, b: &Relation) -> Option<Relation> {
    iv_permutations()
        .into_iter()
        .find(|u| u.after_on_wires(1, a).as_ref() == Some(b))
}

pub fn check_strong_purification(t: &SpekTheory, p: &Params) -> LawReport {
    let mut report = LawReport::new("strong_purification");
    let pure2: Vec<&Relation> = t.spek.nonzero_states(2);
    for rho in t.mspek.nonzero_states(1) {
        let purifications: Vec<&&Relation> = pure2.iter().filter(|psi| &marginal(psi) == rho).collect();
        report.check(!purifications.is_empty(), || {
            Failure::new("mixed state has no pure two-wire purification").input(relation_json(rho))
        });
        if let Some(first) = purifications.first() {
            for other in &purifications {
                report.check(environment_permutation(first, other).is_some(), || {
                    Failure::new("purifications are not related by a reversible map on the environment")
                        .inputs(vec![relation_json(first), relation_json(other)])
                });
            }
        }
    }
    // pure maps stay pure under composition, tensor and converse
    let maps = t.spek.morphisms(1, 1);
    let states = t.spek.nonzero_states(1);
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 21, idx as u64);
        let f = &maps[rng.gen_range(0..maps.len())];
        let g = &maps[rng.gen_range(0..maps.len())];
        let s = states[rng.gen_range(0..states.len())];
        let closed = g.after(f).is_some_and(|h| t.is_pure(&h))
            && t.is_pure(&f.converse())
            && t.is_pure(&s.tensor(s))
            && f.after(s).is_some_and(|h| t.is_pure(&h));
        report.check(closed, || {
            Failure::new("pure morphisms are not closed").inputs(vec![relation_json(f), relation_json(g), relation_json(s)])
        });
    }
    for s in states {
        report.check(Relation::discard(1).after(s).is_some_and(|x| !x.is_empty()), || {
            Failure::new("pure state is not causal").input(relation_json(s))
        });
    }
    report
}

pub fn check_pure_exclusion(t: &SpekTheory, _: &Params) -> LawReport {
    let mut report = LawReport::new("pure_exclusion");
    for s in t.spek.nonzero_states(1) {
        let w = spek_pure_exclusion_witness(&t.mspek, s);
        report.check(w.is_some(), || Failure::new("no nonzero effect annihilates the pure state").input(relation_json(s)));
    }
    let example = spek_pure_exclusion_witness(&t.mspek, &Relation::state(1, &[0, 2]));
    report.check(example == Some(Relation::effect(1, &[1, 3])), || {
        Failure::new("{1, 3} is not excluded by {2, 4}").input(json!(example.map(|e| e.to_json())))
    });
    report
}

/// For pure two-wire states: equal marginals iff related by a reversible
/// map on the discarded wire.
pub fn check_cp_axiom(t: &SpekTheory, _: &Params) -> LawReport {
    let mut report = LawReport::new("cp_axiom");
    let pure2 = t.spek.nonzero_states(2);
    for a in &pure2 {
        for b in &pure2 {
            let lhs = marginal(a) == marginal(b);
            let rhs = environment_permutation(a, b).is_some();
            report.check(lhs == rhs, || {
                Failure::new(format!("equal marginals is {lhs} but environment equivalence is {rhs}"))
                    .inputs(vec![relation_json(a), relation_json(b)])
            });
        }
    }
    report
}
