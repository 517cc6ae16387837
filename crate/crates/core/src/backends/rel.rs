//! Finite sets and relations, realised as Boolean matrices.
//!
//! A relation `R ⊆ A × B` is the `|B| × |A|` matrix with entry `(b, a)` set
//! iff `(a, b) ∈ R`.

use rand::Rng;
use serde_json::{json, Value};

use super::mat::MatCat;
use crate::catcore::{SampleRng, Sampler, Theory};
use crate::error::{Error, Result};
use crate::matrix::Mat;

/// `Rel` with relation-shaped JSON payloads.
#[derive(Clone, Debug, Default)]
pub struct RelCat {
    inner: MatCat<bool>,
}

impl RelCat {
    pub fn new() -> Self {
        RelCat::default()
    }
}

pub fn from_pairs(dom: usize, cod: usize, pairs: &[(usize, usize)]) -> Mat<bool> {
    let mut m = Mat::zeros(cod, dom);
    for &(a, b) in pairs {
        m.set(b, a, true);
    }
    m
}

/// Sorted `(input, output)` pairs.
pub fn pairs(r: &Mat<bool>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..r.cols() {
        for b in 0..r.rows() {
            if *r.get(b, a) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Subset of `0..n` as a state `I → n`.
pub fn subset_state(n: usize, elems: &[usize]) -> Mat<bool> {
    from_pairs(1, n, &elems.iter().map(|&b| (0, b)).collect::<Vec<_>>())
}

/// Subset of `0..n` as an effect `n → I`.
pub fn subset_effect(n: usize, elems: &[usize]) -> Mat<bool> {
    subset_state(n, elems).transpose()
}

/// Elements of a state or effect.
pub fn support(r: &Mat<bool>) -> Vec<usize> {
    r.data()
        .iter()
        .enumerate()
        .filter_map(|(i, &x)| x.then_some(i))
        .collect()
}

/// Inclusion `S ↪ A` of a subset, elements in increasing order.
pub fn inclusion(n: usize, subset: &[usize]) -> Mat<bool> {
    let mut m = Mat::zeros(n, subset.len());
    for (k, &a) in subset.iter().enumerate() {
        m.set(a, k, true);
    }
    m
}

/// Relates every input to some output.
pub fn is_total(r: &Mat<bool>) -> bool {
    (0..r.cols()).all(|a| (0..r.rows()).any(|b| *r.get(b, a)))
}

pub fn relation_json(r: &Mat<bool>) -> Value {
    let pairs: Vec<[usize; 2]> = pairs(r).into_iter().map(|(a, b)| [a, b]).collect();
    json!({"dom": r.cols(), "cod": r.rows(), "pairs": pairs})
}

pub fn relation_from_json(v: &Value) -> Result<Mat<bool>> {
    let dim = |k: &str| {
        v.get(k)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| Error::Json(format!("relation needs `{k}`")))
    };
    let (dom, cod) = (dim("dom")?, dim("cod")?);
    let raw = v
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("relation needs `pairs`".into()))?;
    let mut ps = Vec::with_capacity(raw.len());
    for p in raw {
        let idx = |i: usize| p.get(i).and_then(Value::as_u64).map(|x| x as usize);
        match (idx(0), idx(1)) {
            (Some(a), Some(b)) if a < dom && b < cod => ps.push((a, b)),
            _ => return Err(Error::Json(format!("bad pair {p}"))),
        }
    }
    Ok(from_pairs(dom, cod, &ps))
}

impl Theory for RelCat {
    type Obj = usize;
    type Mor = Mat<bool>;

    fn name(&self) -> String {
        "rel".into()
    }
    fn unit(&self) -> usize {
        1
    }
    fn dom(&self, f: &Mat<bool>) -> usize {
        f.cols()
    }
    fn cod(&self, f: &Mat<bool>) -> usize {
        f.rows()
    }
    fn identity(&self, a: &usize) -> Mat<bool> {
        self.inner.identity(a)
    }
    fn compose(&self, g: &Mat<bool>, f: &Mat<bool>) -> Result<Mat<bool>> {
        self.inner.compose(g, f)
    }
    fn tensor_obj(&self, a: &usize, b: &usize) -> usize {
        a * b
    }
    fn tensor(&self, f: &Mat<bool>, g: &Mat<bool>) -> Mat<bool> {
        self.inner.tensor(f, g)
    }
    fn swap(&self, a: &usize, b: &usize) -> Mat<bool> {
        self.inner.swap(a, b)
    }
    fn zero(&self, a: &usize, b: &usize) -> Mat<bool> {
        self.inner.zero(a, b)
    }
    fn discard(&self, a: &usize) -> Mat<bool> {
        self.inner.discard(a)
    }
    fn dagger(&self, f: &Mat<bool>) -> Result<Mat<bool>> {
        Ok(f.transpose())
    }
    fn cup(&self, a: &usize) -> Result<Mat<bool>> {
        self.inner.cup(a)
    }
    fn deviation(&self, f: &Mat<bool>, g: &Mat<bool>) -> f64 {
        self.inner.deviation(f, g)
    }
    fn tolerance(&self) -> f64 {
        0.0
    }
    fn obj_json(&self, a: &usize) -> Value {
        json!(a)
    }
    fn payload_json(&self, f: &Mat<bool>) -> Value {
        relation_json(f)
    }
}

/// Sets of size `1..=bound`; each pair related with probability ½.
#[derive(Clone, Copy, Debug, Default)]
pub struct RelSampler;

impl Sampler<RelCat> for RelSampler {
    fn object(&self, _: &RelCat, rng: &mut SampleRng, bound: usize) -> usize {
        rng.gen_range(1..=bound.max(1))
    }

    fn morphism(&self, _: &RelCat, rng: &mut SampleRng, a: &usize, b: &usize) -> Mat<bool> {
        Mat::from_fn(*b, *a, |_, _| rng.gen_bool(0.5))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catcore::is_causal;
    use rand::SeedableRng;

    #[test]
    fn relational_composite() {
        // {(a,x)} then {(x,p)} on A = {a, b}, X = {x}, P = {p}
        let r = from_pairs(2, 1, &[(0, 0)]);
        let s = from_pairs(1, 1, &[(0, 0)]);
        let t = RelCat::new();
        assert_eq!(pairs(&t.compose(&s, &r).unwrap()), vec![(0, 0)]);
    }

    #[test]
    fn discard_relates_everything_to_the_point() {
        let t = RelCat::new();
        assert_eq!(pairs(&t.discard(&2)), vec![(0, 0), (1, 0)]);
        assert_eq!(t.tensor(&t.discard(&2), &t.discard(&3)), t.discard(&6));
    }

    #[test]
    fn causal_iff_total() {
        let t = RelCat::new();
        let mut rng = SampleRng::seed_from_u64(5);
        for _ in 0..200 {
            let f = RelSampler.morphism(&t, &mut rng, &3, &2);
            assert_eq!(is_causal(&t, &f), is_total(&f));
        }
    }

    #[test]
    fn dagger_is_converse() {
        let t = RelCat::new();
        let mut rng = SampleRng::seed_from_u64(6);
        for _ in 0..200 {
            let f = RelSampler.morphism(&t, &mut rng, &4, &3);
            let fd = t.dagger(&f).unwrap();
            for (a, b) in pairs(&f) {
                assert!(*fd.get(a, b));
            }
            assert_eq!(pairs(&fd).len(), pairs(&f).len());
        }
    }

    #[test]
    fn json_roundtrip() {
        let r = from_pairs(3, 2, &[(0, 1), (2, 0), (2, 1)]);
        let v = relation_json(&r);
        assert_eq!(v["pairs"], json!([[0, 1], [2, 0], [2, 1]]));
        assert_eq!(relation_from_json(&v).unwrap(), r);
        assert!(relation_from_json(&json!({"dom": 1, "cod": 1, "pairs": [[0, 3]]})).is_err());
    }
}
