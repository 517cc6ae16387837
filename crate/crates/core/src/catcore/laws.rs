use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_rng, SampleRng, Sampler, Theory};
use crate::error::Result;
use crate::report::{Failure, LawReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Category,
    Interchange,
    MonoidalUnitAssoc,
    Symmetry,
    Dagger,
    DaggerMonoidal,
    Snake,
    Discard,
    Zero,
    ScalarCommutativity,
}

impl Law {
    pub const ALL: [Law; 10] = [
        Law::Category,
        Law::Interchange,
        Law::MonoidalUnitAssoc,
        Law::Symmetry,
        Law::Dagger,
        Law::DaggerMonoidal,
        Law::Snake,
        Law::Discard,
        Law::Zero,
        Law::ScalarCommutativity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Category => "category",
            Law::Interchange => "interchange",
            Law::MonoidalUnitAssoc => "monoidal_unit_assoc",
            Law::Symmetry => "symmetry",
            Law::Dagger => "dagger",
            Law::DaggerMonoidal => "dagger_monoidal",
            Law::Snake => "snake",
            Law::Discard => "discard",
            Law::Zero => "zero",
            Law::ScalarCommutativity => "scalar_commutativity",
        }
    }

    pub fn from_name(s: &str) -> Option<Law> {
        Law::ALL.into_iter().find(|l| l.name() == s)
    }

    pub fn statement(self) -> &'static str {
        match self {
            Law::Category => "h∘(g∘f) = (h∘g)∘f, id∘f = f = f∘id",
            Law::Interchange => "(g1∘f1)⊗(g2∘f2) = (g1⊗g2)∘(f1⊗f2), id⊗id = id",
            Law::MonoidalUnitAssoc => "(f⊗g)⊗h = f⊗(g⊗h), f⊗id_I = f = id_I⊗f",
            Law::Symmetry => "σ_{B,A}∘σ_{A,B} = id, σ natural, σ_{A,B⊗C} = (id⊗σ)∘(σ⊗id)",
            Law::Dagger => "f†† = f, (g∘f)† = f†∘g†, id† = id",
            Law::DaggerMonoidal => "(f⊗g)† = f†⊗g†, σ_{A,B}† = σ_{B,A}",
            Law::Snake => "(id⊗cap)∘(cup⊗id) = id = (cap⊗id)∘(id⊗cup)",
            Law::Discard => "⊤_I = id_I, ⊤_{A⊗B} = ⊤_A⊗⊤_B, ⊤∘σ = ⊤",
            Law::Zero => "0∘f = 0, f∘0 = 0, f⊗0 = 0",
            Law::ScalarCommutativity => "s∘t = t∘s = s⊗t for scalars s, t",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LawConfig {
    pub samples: usize,
    pub seed: u64,
    /// Largest object sampled; factors of tensor laws stay below
    /// `max(2, ⌊√max_dim⌋)`.
    pub max_dim: usize,
    pub timings: bool,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            samples: 200,
            seed: 42,
            max_dim: 4,
            timings: false,
        }
    }
}

struct Equation<T: Theory> {
    label: &'static str,
    lhs: T::Mor,
    rhs: T::Mor,
}

fn eq<T: Theory>(label: &'static str, lhs: T::Mor, rhs: T::Mor) -> Equation<T> {
    Equation { label, lhs, rhs }
}

/// Morphisms drawn for one sample together with the equations they must satisfy.
struct Instance<T: Theory> {
    inputs: Vec<T::Mor>,
    equations: Vec<Equation<T>>,
}

fn factor_bound(max_dim: usize) -> usize {
    let r = (max_dim as f64).sqrt().floor() as usize;
    r.max(2).min(max_dim.max(1))
}

fn instance<T: Theory, P: Sampler<T>>(
    law: Law,
    t: &T,
    p: &P,
    rng: &mut SampleRng,
    max_dim: usize,
) -> Result<Instance<T>> {
    let small = factor_bound(max_dim);
    let obj = |rng: &mut SampleRng, bound: usize| p.object(t, rng, bound);
    let mor = |rng: &mut SampleRng, a: &T::Obj, b: &T::Obj| p.morphism(t, rng, a, b);
    Ok(match law {
        Law::Category => {
            let (a, b, c, d) = (obj(rng, max_dim), obj(rng, max_dim), obj(rng, max_dim), obj(rng, max_dim));
            let (f, g, h) = (mor(rng, &a, &b), mor(rng, &b, &c), mor(rng, &c, &d));
            let lhs = t.compose(&h, &t.compose(&g, &f)?)?;
            let rhs = t.compose(&t.compose(&h, &g)?, &f)?;
            let left_id = t.compose(&t.identity(&b), &f)?;
            let right_id = t.compose(&f, &t.identity(&a))?;
            Instance {
                equations: vec![
                    eq("associativity", lhs, rhs),
                    eq("left identity", left_id, f.clone()),
                    eq("right identity", right_id, f.clone()),
                ],
                inputs: vec![f, g, h],
            }
        }
        Law::Interchange => {
            let objs: Vec<T::Obj> = (0..6).map(|_| obj(rng, small)).collect();
            let f1 = mor(rng, &objs[0], &objs[1]);
            let g1 = mor(rng, &objs[1], &objs[2]);
            let f2 = mor(rng, &objs[3], &objs[4]);
            let g2 = mor(rng, &objs[4], &objs[5]);
            let lhs = t.tensor(&t.compose(&g1, &f1)?, &t.compose(&g2, &f2)?);
            let rhs = t.compose(&t.tensor(&g1, &g2), &t.tensor(&f1, &f2))?;
            let ids = t.tensor(&t.identity(&objs[0]), &t.identity(&objs[3]));
            let id = t.identity(&t.tensor_obj(&objs[0], &objs[3]));
            Instance {
                equations: vec![eq("interchange", lhs, rhs), eq("id ⊗ id", ids, id)],
                inputs: vec![f1, g1, f2, g2],
            }
        }
        Law::MonoidalUnitAssoc => {
            let objs: Vec<T::Obj> = (0..6).map(|_| obj(rng, small)).collect();
            let f = mor(rng, &objs[0], &objs[1]);
            let g = mor(rng, &objs[2], &objs[3]);
            let h = mor(rng, &objs[4], &objs[5]);
            let id_i = t.identity(&t.unit());
            Instance {
                equations: vec![
                    eq("associativity", t.tensor(&t.tensor(&f, &g), &h), t.tensor(&f, &t.tensor(&g, &h))),
                    eq("right unit", t.tensor(&f, &id_i), f.clone()),
                    eq("left unit", t.tensor(&id_i, &f), f.clone()),
                ],
                inputs: vec![f, g, h],
            }
        }
        Law::Symmetry => {
            let objs: Vec<T::Obj> = (0..5).map(|_| obj(rng, small)).collect();
            let (a, b, c) = (&objs[0], &objs[1], &objs[2]);
            let (a2, b2) = (&objs[3], &objs[4]);
            let f = mor(rng, a, a2);
            let g = mor(rng, b, b2);
            let round = t.compose(&t.swap(b, a), &t.swap(a, b))?;
            let nat_l = t.compose(&t.tensor(&g, &f), &t.swap(a, b))?;
            let nat_r = t.compose(&t.swap(a2, b2), &t.tensor(&f, &g))?;
            let hex_l = t.swap(a, &t.tensor_obj(b, c));
            let hex_r = t.compose(
                &t.tensor(&t.identity(b), &t.swap(a, c)),
                &t.tensor(&t.swap(a, b), &t.identity(c)),
            )?;
            Instance {
                equations: vec![
                    eq("σ∘σ = id", round, t.identity(&t.tensor_obj(a, b))),
                    eq("naturality", nat_l, nat_r),
                    eq("hexagon", hex_l, hex_r),
                ],
                inputs: vec![f, g],
            }
        }
        Law::Dagger => {
            let (a, b, c) = (obj(rng, max_dim), obj(rng, max_dim), obj(rng, max_dim));
            let f = mor(rng, &a, &b);
            let g = mor(rng, &b, &c);
            let ff = t.dagger(&t.dagger(&f)?)?;
            let lhs = t.dagger(&t.compose(&g, &f)?)?;
            let rhs = t.compose(&t.dagger(&f)?, &t.dagger(&g)?)?;
            Instance {
                equations: vec![
                    eq("involutive", ff, f.clone()),
                    eq("contravariant", lhs, rhs),
                    eq("id† = id", t.dagger(&t.identity(&a))?, t.identity(&a)),
                ],
                inputs: vec![f, g],
            }
        }
        Law::DaggerMonoidal => {
            let objs: Vec<T::Obj> = (0..4).map(|_| obj(rng, small)).collect();
            let f = mor(rng, &objs[0], &objs[1]);
            let g = mor(rng, &objs[2], &objs[3]);
            let lhs = t.dagger(&t.tensor(&f, &g))?;
            let rhs = t.tensor(&t.dagger(&f)?, &t.dagger(&g)?);
            let sw = t.dagger(&t.swap(&objs[0], &objs[2]))?;
            Instance {
                equations: vec![eq("(f⊗g)† = f†⊗g†", lhs, rhs), eq("σ† = σ⁻¹", sw, t.swap(&objs[2], &objs[0]))],
                inputs: vec![f, g],
            }
        }
        Law::Snake => {
            let a = obj(rng, small);
            let id = t.identity(&a);
            let (cup, cap) = (t.cup(&a)?, t.cap(&a)?);
            let s1 = t.compose(&t.tensor(&id, &cap), &t.tensor(&cup, &id))?;
            let s2 = t.compose(&t.tensor(&cap, &id), &t.tensor(&id, &cup))?;
            Instance {
                equations: vec![eq("left snake", s1, id.clone()), eq("right snake", s2, id)],
                inputs: vec![cup, cap],
            }
        }
        Law::Discard => {
            let (a, b) = (obj(rng, small), obj(rng, small));
            let ab = t.tensor_obj(&a, &b);
            let unit = t.unit();
            let causal_swap = t.compose(&t.discard(&t.tensor_obj(&b, &a)), &t.swap(&a, &b))?;
            Instance {
                equations: vec![
                    eq("⊤_I = id_I", t.discard(&unit), t.identity(&unit)),
                    eq("⊤_{A⊗B} = ⊤_A ⊗ ⊤_B", t.discard(&ab), t.tensor(&t.discard(&a), &t.discard(&b))),
                    eq("σ causal", causal_swap, t.discard(&ab)),
                ],
                inputs: vec![],
            }
        }
        Law::Zero => {
            let (a, b, c) = (obj(rng, small), obj(rng, small), obj(rng, small));
            let f = mor(rng, &a, &b);
            let z_bc = t.zero(&b, &c);
            let z_ca = t.zero(&c, &a);
            Instance {
                equations: vec![
                    eq("0∘f = 0", t.compose(&z_bc, &f)?, t.zero(&a, &c)),
                    eq("f∘0 = 0", t.compose(&f, &z_ca)?, t.zero(&c, &b)),
                    eq(
                        "f⊗0 = 0",
                        t.tensor(&f, &t.zero(&c, &c)),
                        t.zero(&t.tensor_obj(&a, &c), &t.tensor_obj(&b, &c)),
                    ),
                ],
                inputs: vec![f],
            }
        }
        Law::ScalarCommutativity => {
            let unit = t.unit();
            let s = mor(rng, &unit, &unit);
            let u = mor(rng, &unit, &unit);
            let st = t.compose(&s, &u)?;
            Instance {
                equations: vec![eq("s∘t = t∘s", st.clone(), t.compose(&u, &s)?), eq("s⊗t = s∘t", t.tensor(&s, &u), st)],
                inputs: vec![s, u],
            }
        }
    })
}

fn evaluate<T: Theory, P: Sampler<T>>(law: Law, t: &T, p: &P, rng: &mut SampleRng, max_dim: usize) -> Option<Failure> {
    let inst = match instance(law, t, p, rng, max_dim) {
        Ok(i) => i,
        Err(e) => return Some(Failure::new(format!("operation failed: {e}")).deviation(f64::INFINITY)),
    };
    let inputs: Vec<_> = inst.inputs.iter().map(|m| t.mor_json(m)).collect();
    inst.equations.into_iter().find_map(|e| {
        let d = t.deviation(&e.lhs, &e.rhs);
        (d > t.tolerance()).then(|| {
            Failure::new(e.label)
                .inputs(inputs.clone())
                .sides(t.mor_json(&e.lhs), t.mor_json(&e.rhs))
                .deviation(d)
        })
    })
}

/// Runs one law on `samples` independently seeded instances. Results are
/// independent of thread scheduling.
pub fn check_law<T: Theory, P: Sampler<T>>(t: &T, p: &P, law: Law, cfg: &LawConfig) -> LawReport {
    let start = Instant::now();
    let stream = Law::ALL.iter().position(|&l| l == law).unwrap_or(0) as u64;
    let outcomes: Vec<Option<Failure>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, stream, i as u64);
            evaluate(law, t, p, &mut rng, cfg.max_dim)
        })
        .collect();
    let mut report = LawReport::new(format!("{}/{}", t.name(), law.name())).with_statement(law.statement());
    for o in outcomes {
        report.check(o.is_none(), || o.expect("failure present"));
    }
    if cfg.timings {
        report = report.timed(start);
    }
    report
}

pub fn check_laws<T: Theory, P: Sampler<T>>(t: &T, p: &P, laws: &[Law], cfg: &LawConfig) -> Vec<LawReport> {
    laws.iter().map(|&law| check_law(t, p, law, cfg)).collect()
}
