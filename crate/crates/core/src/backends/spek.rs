//! Closure-generated subcategories of `Rel` on powers of `IV = {1, 2, 3, 4}`:
//! the Spekkens toy model `Spek` and its mixed extension `MSpek`.
//!
//! Morphisms `IV^a → IV^b` are bitsets with bit `i · 4^b + j` set iff input
//! `i` relates to output `j`; bit order equals the order of sorted pair
//! lists, so the bitset is the canonical form used for deduplication.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::matrix::Mat;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    dom: u8,
    cod: u8,
    bits: Vec<u64>,
}

fn carrier(wires: u8) -> usize {
    1usize << (2 * wires as usize)
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IV^{}→IV^{} {:?}", self.dom, self.cod, self.pairs())
    }
}

impl Relation {
    pub fn empty(dom: u8, cod: u8) -> Self {
        let n = carrier(dom) * carrier(cod);
        Relation {
            dom,
            cod,
            bits: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_pairs(dom: u8, cod: u8, pairs: &[(usize, usize)]) -> Self {
        let mut r = Relation::empty(dom, cod);
        for &(i, j) in pairs {
            r.set(i, j);
        }
        r
    }

    /// State `I → IV^n` on the given 0-based elements.
    pub fn state(n: u8, elems: &[usize]) -> Self {
        Relation::from_pairs(0, n, &elems.iter().map(|&j| (0, j)).collect::<Vec<_>>())
    }

    /// Effect `IV^n → I` on the given 0-based elements.
    pub fn effect(n: u8, elems: &[usize]) -> Self {
        Relation::from_pairs(n, 0, &elems.iter().map(|&i| (i, 0)).collect::<Vec<_>>())
    }

    pub fn identity(wires: u8) -> Self {
        let n = carrier(wires);
        Relation::from_pairs(wires, wires, &(0..n).map(|i| (i, i)).collect::<Vec<_>>())
    }

    /// `σ : IV^a ⊗ IV^b → IV^b ⊗ IV^a`.
    pub fn swap(a: u8, b: u8) -> Self {
        let (na, nb) = (carrier(a), carrier(b));
        let pairs: Vec<_> = (0..na)
            .flat_map(|i| (0..nb).map(move |k| (i * nb + k, k * na + i)))
            .collect();
        Relation::from_pairs(a + b, b + a, &pairs)
    }

    /// The permutation `IV → IV` sending `i` to `perm[i]`.
    pub fn permutation(perm: [usize; 4]) -> Self {
        Relation::from_pairs(1, 1, &(0..4).map(|i| (i, perm[i])).collect::<Vec<_>>())
    }

    pub fn discard(wires: u8) -> Self {
        Relation::effect(wires, &(0..carrier(wires)).collect::<Vec<_>>())
    }

    pub fn dom(&self) -> u8 {
        self.dom
    }

    pub fn cod(&self) -> u8 {
        self.cod
    }

    pub fn wires(&self) -> u8 {
        self.dom + self.cod
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i * carrier(self.cod) + j
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        let k = self.index(i, j);
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        let k = self.index(i, j);
        self.bits[k / 64] |= 1 << (k % 64);
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn cardinality(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let m = carrier(self.cod);
        let mut out = Vec::with_capacity(self.cardinality());
        for (w, &word) in self.bits.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let k = w * 64 + word.trailing_zeros() as usize;
                out.push((k / m, k % m));
                word &= word - 1;
            }
        }
        out
    }

    /// Outputs of input `i` as a bit mask; requires `cod <= 3`.
    fn row_mask(&self, i: usize) -> u64 {
        let m = carrier(self.cod);
        let k = i * m;
        let word = self.bits[k / 64] >> (k % 64);
        if m == 64 {
            word
        } else {
            word & ((1u64 << m) - 1)
        }
    }

    fn or_row_mask(&mut self, i: usize, mask: u64) {
        let k = i * carrier(self.cod);
        self.bits[k / 64] |= mask << (k % 64);
    }

    /// Outputs related to each input.
    fn rows(&self) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); carrier(self.dom)];
        for (i, j) in self.pairs() {
            rows[i].push(j);
        }
        rows
    }

    /// `self ∘ f`, when `f.cod == self.dom`.
    pub fn after(&self, f: &Relation) -> Option<Relation> {
        if f.cod != self.dom {
            return None;
        }
        let mut out = Relation::empty(f.dom, self.cod);
        if f.cod <= 3 && self.cod <= 3 {
            for i in 0..carrier(f.dom) {
                let mut row = f.row_mask(i);
                let mut acc = 0u64;
                while row != 0 {
                    acc |= self.row_mask(row.trailing_zeros() as usize);
                    row &= row - 1;
                }
                out.or_row_mask(i, acc);
            }
            return Some(out);
        }
        let rows = self.rows();
        for (i, j) in f.pairs() {
            for &k in &rows[j] {
                out.set(i, k);
            }
        }
        Some(out)
    }

    /// `(id_p ⊗ self ⊗ id_q) ∘ f`: `self` applied to wires `p..p+dom` of `f`'s output.
    pub fn after_on_wires(&self, p: u8, f: &Relation) -> Option<Relation> {
        if p + self.dom > f.cod {
            return None;
        }
        let q = f.cod - p - self.dom;
        let (nb, nq, nc) = (carrier(self.dom), carrier(q), carrier(self.cod));
        let mut out = Relation::empty(f.dom, p + self.cod + q);
        if f.cod <= 3 && out.cod <= 3 && self.cod <= 3 {
            // rows of self with output k moved to bit k * nq
            let spread: Vec<u64> = (0..nb)
                .map(|jb| {
                    let mut row = self.row_mask(jb);
                    let mut acc = 0u64;
                    while row != 0 {
                        acc |= 1 << (row.trailing_zeros() as usize * nq);
                        row &= row - 1;
                    }
                    acc
                })
                .collect();
            for i in 0..carrier(f.dom) {
                let mut row = f.row_mask(i);
                let mut acc = 0u64;
                while row != 0 {
                    let j = row.trailing_zeros() as usize;
                    let (head, jq) = (j / nq, j % nq);
                    let (jp, jb) = (head / nb, head % nb);
                    acc |= spread[jb] << (jp * nc * nq + jq);
                    row &= row - 1;
                }
                out.or_row_mask(i, acc);
            }
            return Some(out);
        }
        let rows = self.rows();
        for (i, j) in f.pairs() {
            let (head, jq) = (j / nq, j % nq);
            let (jp, jb) = (head / nb, head % nb);
            for &k in &rows[jb] {
                out.set(i, (jp * nc + k) * nq + jq);
            }
        }
        Some(out)
    }

    pub fn tensor(&self, g: &Relation) -> Relation {
        let (n2, m2) = (carrier(g.dom), carrier(g.cod));
        let mut out = Relation::empty(self.dom + g.dom, self.cod + g.cod);
        for (i1, j1) in self.pairs() {
            for (i2, j2) in g.pairs() {
                out.set(i1 * n2 + i2, j1 * m2 + j2);
            }
        }
        out
    }

    /// Relational converse.
    pub fn converse(&self) -> Relation {
        let mut out = Relation::empty(self.cod, self.dom);
        for (i, j) in self.pairs() {
            out.set(j, i);
        }
        out
    }

    /// Boolean matrix in the `Rel` convention (`4^cod × 4^dom`).
    pub fn to_mat(&self) -> Mat<bool> {
        Mat::from_fn(carrier(self.cod), carrier(self.dom), |j, i| self.get(i, j))
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<[usize; 2]> = self.pairs().into_iter().map(|(a, b)| [a, b]).collect();
        json!({"dom": carrier(self.dom), "cod": carrier(self.cod), "pairs": pairs})
    }
}

/// The generating state `{1, 3}` of `IV`.
pub fn spek_state() -> Relation {
    Relation::state(1, &[0, 2])
}

/// `1 ↦ (1,1),(2,2); 2 ↦ (1,2),(2,1); 3 ↦ (3,3),(4,4); 4 ↦ (3,4),(4,3)`.
pub fn spek_copy() -> Relation {
    let pair = |a: usize, b: usize| a * 4 + b;
    Relation::from_pairs(
        1,
        2,
        &[
            (0, pair(0, 0)),
            (0, pair(1, 1)),
            (1, pair(0, 1)),
            (1, pair(1, 0)),
            (2, pair(2, 2)),
            (2, pair(3, 3)),
            (3, pair(2, 3)),
            (3, pair(3, 2)),
        ],
    )
}

/// All 24 permutations of `IV`.
pub fn iv_permutations() -> Vec<Relation> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(Relation::permutation(p));
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureOps {
    pub compose: bool,
    pub tensor: bool,
    pub dagger: bool,
    pub swaps: bool,
    pub identities: bool,
}

impl ClosureOps {
    pub const ALL: ClosureOps = ClosureOps {
        compose: true,
        tensor: true,
        dagger: true,
        swaps: true,
        identities: true,
    };
}

#[derive(Clone, Debug)]
pub struct ClosureSpec {
    pub generators: Vec<Relation>,
    pub ops: ClosureOps,
    /// Largest generator power `n` of interest.
    pub object_bound: u8,
    /// Largest `a + b` kept for morphisms `IV^a → IV^b`.
    pub wire_bound: u8,
    /// Largest number of stored morphisms.
    pub budget: usize,
    /// Largest number of candidates examined; bounds work when the
    /// deduplicated set grows slowly.
    pub max_candidates: usize,
}

pub const DEFAULT_BUDGET: usize = 100_000;

const FRONTIER_CHUNK: usize = 64;

impl ClosureSpec {
    /// `Spek` generators with wire bound `2n + 1`, the least bound that
    /// admits the copy relation at `n = 1`.
    pub fn spek(n: u8) -> Self {
        let mut generators = vec![spek_state(), spek_copy()];
        generators.extend(iv_permutations());
        ClosureSpec {
            generators,
            ops: ClosureOps::ALL,
            object_bound: n,
            wire_bound: 2 * n + 1,
            budget: DEFAULT_BUDGET,
            max_candidates: 200 * DEFAULT_BUDGET,
        }
    }

    /// `Spek` plus the discarding effect of `IV`.
    pub fn mspek(n: u8) -> Self {
        let mut spec = ClosureSpec::spek(n);
        spec.generators.push(Relation::discard(1));
        spec
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self.max_candidates = 200 * budget;
        self
    }
}

/// Result of a bounded closure: morphisms by type `(a, b)`, each sorted.
#[derive(Clone, Debug)]
pub struct Closure {
    pub spec_object_bound: u8,
    pub wire_bound: u8,
    pub by_type: BTreeMap<(u8, u8), Vec<Relation>>,
    pub saturated: bool,
    pub rounds: usize,
    pub candidates: usize,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.by_type.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn morphisms(&self, dom: u8, cod: u8) -> &[Relation] {
        self.by_type.get(&(dom, cod)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn states(&self, n: u8) -> &[Relation] {
        self.morphisms(0, n)
    }

    pub fn effects(&self, n: u8) -> &[Relation] {
        self.morphisms(n, 0)
    }

    pub fn contains(&self, r: &Relation) -> bool {
        self.morphisms(r.dom, r.cod).binary_search(r).is_ok()
    }

    pub fn nonzero_states(&self, n: u8) -> Vec<&Relation> {
        self.states(n).iter().filter(|s| !s.is_empty()).collect()
    }

    /// `{"objects", "counts", "saturated"}` plus bookkeeping.
    pub fn report_json(&self) -> Value {
        let objects: Vec<String> = (0..=self.wire_bound)
            .map(|k| match k {
                0 => "I".to_string(),
                1 => "IV".to_string(),
                k => format!("IV^{k}"),
            })
            .collect();
        let counts: serde_json::Map<String, Value> = self
            .by_type
            .iter()
            .map(|(&(a, b), v)| (format!("{a}->{b}"), json!(v.len())))
            .collect();
        let state_sizes: serde_json::Map<String, Value> = (1..=self.wire_bound)
            .filter(|&n| !self.states(n).is_empty())
            .map(|n| {
                let mut sizes: Vec<usize> = self.nonzero_states(n).iter().map(|s| s.cardinality()).collect();
                sizes.sort_unstable();
                sizes.dedup();
                (format!("IV^{n}"), json!({"nonzero": self.nonzero_states(n).len(), "cardinalities": sizes}))
            })
            .collect();
        json!({
            "objects": objects,
            "counts": counts,
            "saturated": self.saturated,
            "object_bound": self.spec_object_bound,
            "wire_bound": self.wire_bound,
            "rounds": self.rounds,
            "states": state_sizes,
        })
    }
}

struct Store {
    all: Vec<Relation>,
    seen: HashSet<Relation>,
    by_dom: HashMap<u8, Vec<usize>>,
    by_cod: HashMap<u8, Vec<usize>>,
    by_wires: HashMap<u8, Vec<usize>>,
}

impl Store {
    fn new() -> Self {
        Store {
            all: Vec::new(),
            seen: HashSet::new(),
            by_dom: HashMap::new(),
            by_cod: HashMap::new(),
            by_wires: HashMap::new(),
        }
    }

    fn insert(&mut self, r: Relation) -> bool {
        if self.seen.contains(&r) {
            return false;
        }
        let idx = self.all.len();
        self.by_dom.entry(r.dom).or_default().push(idx);
        self.by_cod.entry(r.cod).or_default().push(idx);
        self.by_wires.entry(r.wires()).or_default().push(idx);
        self.seen.insert(r.clone());
        self.all.push(r);
        true
    }

    fn indices<'a>(map: &'a HashMap<u8, Vec<usize>>, key: u8) -> &'a [usize] {
        map.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Unary and binary consequences of one frontier element against `known`.
fn consequences(f: &Relation, store: &Store, known: usize, ops: ClosureOps, wire_bound: u8) -> Vec<Relation> {
    let mut out = Vec::new();
    if ops.dagger {
        out.push(f.converse());
    }
    if ops.compose {
        for &gi in Store::indices(&store.by_dom, f.cod) {
            if gi < known {
                out.extend(store.all[gi].after(f));
            }
        }
        for &hi in Store::indices(&store.by_cod, f.dom) {
            if hi < known {
                out.extend(f.after(&store.all[hi]));
            }
        }
        // g whiskered onto some wires of f's output
        for d in 0..f.cod {
            for &gi in Store::indices(&store.by_dom, d) {
                let g = &store.all[gi];
                if gi < known && f.dom + f.cod - d + g.cod <= wire_bound {
                    for p in 0..=(f.cod - d) {
                        out.extend(g.after_on_wires(p, f));
                    }
                }
            }
        }
        // f whiskered onto some wires of h's output
        for c in (f.dom + 1)..=wire_bound {
            for &hi in Store::indices(&store.by_cod, c) {
                let h = &store.all[hi];
                if hi < known && h.dom + c - f.dom + f.cod <= wire_bound {
                    for p in 0..=(c - f.dom) {
                        out.extend(f.after_on_wires(p, h));
                    }
                }
            }
        }
    }
    if ops.tensor {
        for w in 0..=wire_bound.saturating_sub(f.wires()) {
            for &gi in Store::indices(&store.by_wires, w) {
                if gi < known {
                    let g = &store.all[gi];
                    out.push(f.tensor(g));
                    out.push(g.tensor(f));
                }
            }
        }
    }
    out
}

/// Semi-naive breadth-first closure: each round combines the previous
/// round's new morphisms with everything known, until nothing new appears
/// (saturated) or a budget runs out.
///
/// Composition includes whiskered composites `(id ⊗ g ⊗ id) ∘ f`, so a
/// morphism can act on any wires of another even when the whiskered
/// morphism itself exceeds the wire bound.
pub fn closure_generate(spec: &ClosureSpec) -> Closure {
    let w = spec.wire_bound;
    let mut store = Store::new();
    let mut seeds: Vec<Relation> = spec.generators.clone();
    if spec.ops.identities {
        seeds.push(Relation::identity(0));
        seeds.push(Relation::identity(1));
    }
    if spec.ops.swaps {
        seeds.push(Relation::swap(1, 1));
    }
    let mut frontier: Vec<usize> = Vec::new();
    for r in seeds {
        if r.wires() <= w && store.insert(r) {
            frontier.push(store.all.len() - 1);
        }
    }
    let mut rounds = 0;
    let mut candidates = 0usize;
    let mut saturated = false;
    'rounds: loop {
        if frontier.is_empty() {
            saturated = true;
            break;
        }
        rounds += 1;
        let known = store.all.len();
        let mut next = Vec::new();
        // chunks keep the candidate buffers bounded when rounds are large
        for chunk in frontier.chunks(FRONTIER_CHUNK) {
            let batches: Vec<Vec<Relation>> = chunk
                .par_iter()
                .map(|&fi| {
                    let mut local: Vec<Relation> = consequences(&store.all[fi], &store, known, spec.ops, w);
                    local.retain(|r| r.wires() <= w && !store.seen.contains(r));
                    local.sort_unstable();
                    local.dedup();
                    local
                })
                .collect();
            for batch in batches {
                for r in batch {
                    candidates += 1;
                    if store.insert(r) {
                        next.push(store.all.len() - 1);
                        if store.all.len() >= spec.budget {
                            break 'rounds;
                        }
                    }
                    if candidates >= spec.max_candidates {
                        break 'rounds;
                    }
                }
            }
        }
        frontier = next;
    }
    let mut by_type: BTreeMap<(u8, u8), Vec<Relation>> = BTreeMap::new();
    for r in store.all {
        by_type.entry((r.dom, r.cod)).or_default().push(r);
    }
    for v in by_type.values_mut() {
        v.sort_unstable();
    }
    Closure {
        spec_object_bound: spec.object_bound,
        wire_bound: w,
        by_type,
        saturated,
        rounds,
        candidates,
    }
}

/// A nonzero generated effect `e` with `e ∘ state = 0`.
pub fn spek_pure_exclusion_witness(closure: &Closure, state: &Relation) -> Option<Relation> {
    closure
        .effects(state.cod)
        .iter()
        .filter(|e| !e.is_empty())
        .find(|e| e.after(state).is_some_and(|s| s.is_empty()))
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_well_typed() {
        assert_eq!(iv_permutations().len(), 24);
        assert_eq!(spek_copy().cardinality(), 8);
        assert_eq!(spek_state().pairs(), vec![(0, 0), (0, 2)]);
        // copy after state {1,3} is the cup {11, 22, 33, 44}
        let cup = spek_copy().after(&spek_state()).unwrap();
        assert_eq!(cup, Relation::state(2, &[0, 5, 10, 15]));
    }

    #[test]
    fn relation_algebra_matches_boolean_matrices() {
        let f = spek_copy();
        let g = Relation::swap(1, 1);
        let composite = g.after(&f).unwrap().to_mat();
        assert_eq!(composite, g.to_mat().compose(&f.to_mat()).unwrap());
        let t = spek_state().tensor(&f);
        assert_eq!(t.to_mat(), spek_state().to_mat().kron(&f.to_mat()));
        assert_eq!(f.converse().to_mat(), f.to_mat().transpose());
    }

    #[test]
    fn whiskered_composite_matches_tensor_with_identities() {
        let g = Relation::permutation([1, 2, 3, 0]);
        let cup = spek_copy().after(&spek_state()).unwrap();
        let direct = Relation::identity(1).tensor(&g).after(&cup).unwrap();
        assert_eq!(g.after_on_wires(1, &cup).unwrap(), direct);
        let direct = g.tensor(&Relation::identity(1)).after(&cup).unwrap();
        assert_eq!(g.after_on_wires(0, &cup).unwrap(), direct);
        assert!(g.after_on_wires(2, &cup).is_none());
    }

    #[test]
    fn swap_relation_is_symmetric() {
        let s = Relation::swap(1, 1);
        assert_eq!(s.after(&s).unwrap(), Relation::identity(2));
    }

    #[test]
    fn pure_exclusion_by_scanning() {
        let mut spec = ClosureSpec::spek(1);
        spec.wire_bound = 2;
        let c = closure_generate(&spec);
        let w = spek_pure_exclusion_witness(&c, &Relation::state(1, &[0, 2])).unwrap();
        assert_eq!(w, Relation::effect(1, &[1, 3]));
        let w = spek_pure_exclusion_witness(&c, &Relation::state(1, &[0, 1])).unwrap();
        assert_eq!(w, Relation::effect(1, &[2, 3]));
        assert!(spek_pure_exclusion_witness(&c, &Relation::empty(0, 1)).is_some());
    }
}
