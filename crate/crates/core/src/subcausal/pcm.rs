//! Finite partial commutative monoids, bounded totalisation, and the
//! pair representation of totalised morphisms.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use petgraph::unionfind::UnionFind;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::report::{Failure, LawReport};
use crate::scalars::{RatNonneg, Scalar};

/// A PCM on named elements with an explicit partial table.
#[derive(Clone, Debug, PartialEq)]
pub struct FinitePCM {
    pub elements: Vec<String>,
    pub zero: usize,
    table: Vec<Vec<Option<usize>>>,
}

impl FinitePCM {
    /// `entries` lists defined sums; each is mirrored, and `x ⋁ 0 = x` is
    /// always added.
    pub fn new(elements: Vec<String>, zero: usize, entries: &[(usize, usize, usize)]) -> Result<Self> {
        let n = elements.len();
        if zero >= n {
            return Err(Error::Invalid("zero is not an element".into()));
        }
        let mut table = vec![vec![None; n]; n];
        let mut put = |a: usize, b: usize, c: usize| -> Result<()> {
            if a >= n || b >= n || c >= n {
                return Err(Error::Invalid("table entry out of range".into()));
            }
            match table[a][b] {
                Some(old) if old != c => Err(Error::Invalid(format!(
                    "{} ⋁ {} given two values",
                    elements[a], elements[b]
                ))),
                _ => {
                    table[a][b] = Some(c);
                    Ok(())
                }
            }
        };
        for x in 0..n {
            put(x, zero, x)?;
            put(zero, x, x)?;
        }
        for &(a, b, c) in entries {
            put(a, b, c)?;
            put(b, a, c)?;
        }
        Ok(FinitePCM { elements, zero, table })
    }

    /// `{0, 1/d, …, 1}` with `p ⋁ q = p + q` when at most one.
    pub fn unit_interval(d: usize) -> Self {
        let name = |k: usize| {
            let q = BigRational::new(BigInt::from(k), BigInt::from(d));
            q.to_string()
        };
        let elements = (0..=d).map(name).collect();
        let mut entries = Vec::new();
        for a in 0..=d {
            for b in 0..=d - a {
                entries.push((a, b, a + b));
            }
        }
        FinitePCM::new(elements, 0, &entries).expect("well-formed table")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ovee(&self, a: usize, b: usize) -> Option<usize> {
        self.table[a][b]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// Left fold of `⋁` over a word.
    pub fn fold(&self, word: &[usize]) -> Option<usize> {
        word.iter().try_fold(self.zero, |acc, &x| self.ovee(acc, x))
    }

    /// Commutativity, unit and associativity on the whole table.
    pub fn check_axioms(&self) -> LawReport {
        let mut report = LawReport::new("pcm_axioms").with_statement("⋁ commutative, 0 unit, associative where defined");
        let n = self.len();
        for a in 0..n {
            report.check(self.ovee(a, self.zero) == Some(a), || Failure::new(format!("{} ⋁ 0", self.elements[a])));
            for b in 0..n {
                report.check(self.ovee(a, b) == self.ovee(b, a), || {
                    Failure::new(format!("{} ⋁ {} not commutative", self.elements[a], self.elements[b]))
                });
                let Some(ab) = self.ovee(a, b) else { continue };
                for c in 0..n {
                    let Some(left) = self.ovee(ab, c) else { continue };
                    let right = self.ovee(b, c).and_then(|bc| self.ovee(a, bc));
                    report.check(right == Some(left), || {
                        Failure::new(format!(
                            "({0} ⋁ {1}) ⋁ {2} defined but {0} ⋁ ({1} ⋁ {2}) differs",
                            self.elements[a], self.elements[b], self.elements[c]
                        ))
                    });
                }
            }
        }
        report
    }

    /// `{"elements", "zero", "ovee": [[a, b, result-or-null], …]}`.
    pub fn to_json(&self) -> Value {
        let mut rows = Vec::new();
        for a in 0..self.len() {
            for b in a..self.len() {
                let r = self.table[a][b].map(|c| json!(self.elements[c])).unwrap_or(Value::Null);
                rows.push(json!([self.elements[a], self.elements[b], r]));
            }
        }
        json!({"elements": self.elements, "zero": self.elements[self.zero], "ovee": rows})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Json(m.to_string());
        let elements: Vec<String> = serde_json::from_value(v["elements"].clone())?;
        let find = |x: &Value| -> Result<usize> {
            let s = x.as_str().ok_or_else(|| bad("element names are strings"))?;
            elements.iter().position(|e| e == s).ok_or_else(|| bad(&format!("unknown element {s}")))
        };
        let zero = find(&v["zero"])?;
        let rows = v["ovee"].as_array().ok_or_else(|| bad("ovee is an array"))?;
        let mut entries = Vec::new();
        let mut undefined = Vec::new();
        for row in rows {
            let r = row.as_array().filter(|r| r.len() == 3).ok_or_else(|| bad("ovee rows are triples"))?;
            let (a, b) = (find(&r[0])?, find(&r[1])?);
            if r[2].is_null() {
                undefined.push((a, b));
            } else {
                entries.push((a, b, find(&r[2])?));
            }
        }
        let pcm = FinitePCM::new(elements, zero, &entries)?;
        if let Some(&(a, b)) = undefined.iter().find(|&&(a, b)| pcm.ovee(a, b).is_some()) {
            return Err(bad(&format!("{} ⋁ {} is both defined and undefined", pcm.elements[a], pcm.elements[b])));
        }
        Ok(pcm)
    }
}

/// One equivalence class of bounded words.
#[derive(Clone, Debug)]
pub struct TotalClass {
    /// A shortest member.
    pub representative: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    /// No member can be expanded past the bound, so the class is complete.
    pub certified: bool,
    /// The element of `M` in this class, if any.
    pub element: Option<usize>,
}

/// The congruence closure of `M(M)` restricted to words of bounded length.
#[derive(Clone, Debug)]
pub struct Totalisation {
    pub max_word: usize,
    pub classes: Vec<TotalClass>,
    index: HashMap<Vec<usize>, usize>,
}

fn multisets(alphabet: &[usize], max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            let start = w.last().copied();
            for &x in alphabet.iter().filter(|&&x| start.is_none_or(|s| x >= s)) {
                let mut v: Vec<usize> = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Union-find over nonzero multisets of length at most `max_word`, joined by
/// the rewrites `{x, y} → {x ⋁ y}` (dropping `0`).
///
/// Rewrites shorten words, so a class is complete once none of its members
/// of maximal length contains an element that splits as a sum of two
/// nonzero elements; such classes are certified.
pub fn totalise_pcm(m: &FinitePCM, max_word: usize) -> Result<Totalisation> {
    if max_word < 2 {
        return Err(Error::Precondition("totalisation needs words of length at least 2".into()));
    }
    let alphabet: Vec<usize> = (0..m.len()).filter(|&x| x != m.zero).collect();
    let words = multisets(&alphabet, max_word);
    let index: HashMap<Vec<usize>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut uf = UnionFind::<usize>::new(words.len());
    for (i, w) in words.iter().enumerate() {
        for p in 0..w.len() {
            for q in p + 1..w.len() {
                if (q > p + 1 && w[q] == w[q - 1]) || (p > 0 && w[p] == w[p - 1]) {
                    continue;
                }
                let Some(z) = m.ovee(w[p], w[q]) else { continue };
                let mut v: Vec<usize> = w.iter().enumerate().filter(|&(k, _)| k != p && k != q).map(|(_, &x)| x).collect();
                if z != m.zero {
                    v.push(z);
                    v.sort_unstable();
                }
                uf.union(i, index[&v]);
            }
        }
    }
    let splittable: Vec<bool> = (0..m.len())
        .map(|z| {
            alphabet
                .iter()
                .any(|&x| alphabet.iter().any(|&y| m.ovee(x, y) == Some(z)))
        })
        .collect();
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<TotalClass> = Vec::new();
    let mut class_of = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        let root = uf.find(i);
        let c = *by_root.entry(root).or_insert_with(|| {
            classes.push(TotalClass {
                representative: w.clone(),
                members: Vec::new(),
                certified: true,
                element: None,
            });
            classes.len() - 1
        });
        let cls = &mut classes[c];
        if w.len() < cls.representative.len() {
            cls.representative = w.clone();
        }
        if w.len() >= max_word && w.iter().any(|&x| splittable[x]) {
            cls.certified = false;
        }
        match w.len() {
            0 => cls.element = Some(m.zero),
            1 if cls.element.is_none() => cls.element = Some(w[0]),
            _ => {}
        }
        cls.members.push(w.clone());
        class_of.insert(w.clone(), c);
    }
    Ok(Totalisation {
        max_word,
        classes,
        index: class_of,
    })
}

impl Totalisation {
    pub fn class_of(&self, word: &[usize]) -> Option<usize> {
        let mut w = word.to_vec();
        w.sort_unstable();
        self.index.get(&w).copied()
    }

    pub fn certified(&self) -> impl Iterator<Item = &TotalClass> {
        self.classes.iter().filter(|c| c.certified)
    }

    /// Distinct elements of `M` lie in distinct certified classes.
    pub fn check_embedding(&self, m: &FinitePCM) -> LawReport {
        let mut report =
            LawReport::new("totalisation_embedding").with_statement("x ↦ [x] is injective and lands in certified classes");
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for x in 0..m.len() {
            let word: Vec<usize> = if x == m.zero { vec![] } else { vec![x] };
            let c = self.class_of(&word).expect("singletons are enumerated");
            report.check(self.classes[c].certified, || {
                Failure::new(format!("class of {} is truncated", m.elements[x]))
            });
            let clash = seen.insert(c, x);
            report.check(clash.is_none(), || {
                Failure::new(format!("{} and {} are identified", m.elements[clash.unwrap_or(x)], m.elements[x]))
            });
        }
        report
    }

    /// `[a₁ + … + aₙ] = [b]` implies `a₁ ⋁ … ⋁ aₙ` is defined and equals `b`,
    /// on every member of every certified class (both fold orders).
    pub fn check_fact(&self, m: &FinitePCM) -> LawReport {
        let mut report = LawReport::new("totalisation_fact")
            .with_statement("[a₁ + … + aₙ] = [b] ⟹ ⋁ aᵢ is defined in M and equals b");
        for cls in self.certified() {
            let Some(b) = cls.element else { continue };
            for w in &cls.members {
                let rev: Vec<usize> = w.iter().rev().copied().collect();
                let ok = m.fold(w) == Some(b) && m.fold(&rev) == Some(b);
                report.check(ok, || {
                    let names: Vec<&str> = w.iter().map(|&x| m.elements[x].as_str()).collect();
                    Failure::new(format!("word {names:?} does not fold to {}", m.elements[b]))
                });
            }
        }
        report
    }

    pub fn to_json(&self, m: &FinitePCM) -> Value {
        let name = |w: &[usize]| w.iter().map(|&x| m.elements[x].clone()).collect::<Vec<_>>();
        json!({
            "max_word": self.max_word,
            "classes": self.classes.iter().map(|c| json!({
                "representative": name(&c.representative),
                "size": c.members.len(),
                "certified": c.certified,
                "element": c.element.map(|e| m.elements[e].clone()),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Scalars with `1/n` and a decidable order, so that pairs `(f, r)` can be
/// compared by clearing denominators.
pub trait DivisibleScalar: Scalar {
    fn divide(&self, n: u64) -> Self;
    /// Smallest natural number at least `self`.
    fn ceil(&self) -> u64;
    fn at_most_one(&self) -> bool;
}

impl DivisibleScalar for RatNonneg {
    fn divide(&self, n: u64) -> Self {
        self.mul(&RatNonneg::frac(1, n))
    }

    fn ceil(&self) -> u64 {
        let q = self.value();
        let (d, r) = q.numer().div_rem(q.denom());
        let c = if r.is_zero() { d } else { d + BigInt::one() };
        c.to_u64().unwrap_or(u64::MAX)
    }

    fn at_most_one(&self) -> bool {
        RatNonneg::one().checked_sub(self).is_some()
    }
}

/// `a · f = b · g` with `n · a = r`, `n · b = s` and `a, b ≤ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepWitness<S> {
    pub n: u64,
    pub a: S,
    pub b: S,
}

/// Witness for `(f, r) ∼ (g, s)`, taking `n = ⌈max(r, s)⌉`.
pub fn total_rep_witness<S: DivisibleScalar>(f: &Mat<S>, r: &S, g: &Mat<S>, s: &S) -> Result<Option<RepWitness<S>>> {
    if f.shape() != g.shape() {
        return Err(Error::shape("representatives have different types"));
    }
    let n = r.ceil().max(s.ceil()).max(1);
    let (a, b) = (r.divide(n), s.divide(n));
    debug_assert!(a.at_most_one() && b.at_most_one());
    Ok((f.scale(&a) == g.scale(&b)).then_some(RepWitness { n, a, b }))
}

pub fn total_rep_equal<S: DivisibleScalar>(f: &Mat<S>, r: &S, g: &Mat<S>, s: &S) -> Result<bool> {
    Ok(total_rep_witness(f, r, g, s)?.is_some())
}
