//! Completely positive maps over matrix backends.
//!
//! A map `n → m` is stored by its Choi matrix
//! `C = Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`, so `C[i·m + a, j·m + b] = Φ(|i⟩⟨j|)[a, b]`
//! with the input index outer. Doubling uses the column-major vectorisation
//! `vec(f)[i·m + a] = f[a, i]` and sets `C = vec(f) vec(f)†`. A state's Choi
//! matrix is its density matrix; an effect `E` has Choi matrix `Eᵀ`.

mod float;

use std::marker::PhantomData;

use rand::Rng;
use serde_json::{json, Value};

use crate::backends::Additive;
use crate::catcore::{SampleRng, Sampler, Theory};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalars::{Complex64, Field, Scalar, DEFAULT_TOL};

pub use float::{
    cp_axiom_check, cpm_kernel, essential_uniqueness_witness, is_pure, kraus_from_choi, min_eigenvalue, pure_witness,
    purify, random_channel, random_cpm, EuWitness, FloatCpmSampler,
};

#[derive(Clone, Debug, PartialEq)]
pub struct CpmMap<S> {
    pub in_dim: usize,
    pub out_dim: usize,
    pub choi: Mat<S>,
    /// Kraus witnesses with `choi = Σ vec(K) vec(K)†`, when known.
    pub kraus: Option<Vec<Mat<S>>>,
}

fn vec_col<S: Scalar>(f: &Mat<S>) -> Vec<S> {
    let (m, n) = f.shape();
    let mut v = Vec::with_capacity(n * m);
    for i in 0..n {
        for a in 0..m {
            v.push(f.get(a, i).clone());
        }
    }
    v
}

fn outer<S: Scalar>(v: &[S]) -> Mat<S> {
    Mat::from_fn(v.len(), v.len(), |x, y| v[x].mul(&v[y].conj()))
}

/// Inverse of the column-major vectorisation.
pub fn unvec<S: Scalar>(v: &[S], m: usize, n: usize) -> Mat<S> {
    Mat::from_fn(m, n, |a, i| v[i * m + a].clone())
}

/// `Dbl(f)` with Kraus witness `[f]`.
pub fn dbl<S: Scalar>(f: &Mat<S>) -> CpmMap<S> {
    CpmMap {
        in_dim: f.cols(),
        out_dim: f.rows(),
        choi: outer(&vec_col(f)),
        kraus: Some(vec![f.clone()]),
    }
}

/// `Σ_K Dbl(K)`.
pub fn from_kraus<S: Scalar>(n: usize, m: usize, kraus: &[Mat<S>]) -> Result<CpmMap<S>> {
    let mut choi = Mat::zeros(n * m, n * m);
    for k in kraus {
        if k.shape() != (m, n) {
            return Err(Error::shape(format!("Kraus operator has shape {:?}, expected {:?}", k.shape(), (m, n))));
        }
        choi = choi.zip(&outer(&vec_col(k)), |x, y| x.add(y));
    }
    Ok(CpmMap {
        in_dim: n,
        out_dim: m,
        choi,
        kraus: Some(kraus.to_vec()),
    })
}

impl<S: Scalar> CpmMap<S> {
    pub fn from_choi(n: usize, m: usize, choi: Mat<S>) -> Result<Self> {
        if choi.shape() != (n * m, n * m) {
            return Err(Error::shape(format!("Choi matrix has shape {:?}, expected {:?}", choi.shape(), (n * m, n * m))));
        }
        Ok(CpmMap {
            in_dim: n,
            out_dim: m,
            choi,
            kraus: None,
        })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        CpmMap {
            in_dim: n,
            out_dim: m,
            choi: Mat::zeros(n * m, n * m),
            kraus: Some(Vec::new()),
        }
    }

    /// Superoperator `S[(b·m + a), (j·n + i)] = C[i·m + a, j·m + b]`;
    /// `Dbl(f)` becomes `f̄ ⊗ f`.
    pub fn superoperator(&self) -> Mat<S> {
        let (n, m) = (self.in_dim, self.out_dim);
        Mat::from_fn(m * m, n * n, |r, c| {
            let (b, a) = (r / m, r % m);
            let (j, i) = (c / n, c % n);
            self.choi.get(i * m + a, j * m + b).clone()
        })
    }

    pub fn from_superoperator(n: usize, m: usize, s: &Mat<S>) -> Self {
        let choi = Mat::from_fn(n * m, n * m, |r, c| {
            let (i, a) = (r / m, r % m);
            let (j, b) = (c / m, c % m);
            s.get(b * m + a, j * n + i).clone()
        });
        CpmMap {
            in_dim: n,
            out_dim: m,
            choi,
            kraus: None,
        }
    }

    /// `Tr_out(C)`, the Choi matrix of `discard ∘ self` transposed.
    pub fn output_trace(&self) -> Mat<S> {
        let (n, m) = (self.in_dim, self.out_dim);
        Mat::from_fn(n, n, |i, j| {
            (0..m).fold(S::zero(), |acc, a| acc.add(self.choi.get(i * m + a, j * m + a)))
        })
    }

    pub fn to_json(&self) -> Value {
        let kraus = self
            .kraus
            .as_ref()
            .map(|ks| Value::Array(ks.iter().map(Mat::to_json).collect()))
            .unwrap_or(Value::Null);
        json!({"in": self.in_dim, "out": self.out_dim, "choi": self.choi.to_json(), "kraus": kraus})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let dim = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Invalid(format!("CpmMap JSON needs integer \"{k}\"")))
        };
        let (n, m) = (dim("in")?, dim("out")?);
        let choi = Mat::from_json(v.get("choi").ok_or_else(|| Error::Invalid("CpmMap JSON needs \"choi\"".into()))?)?;
        let mut f = CpmMap::from_choi(n, m, choi)?;
        if let Some(Value::Array(ks)) = v.get("kraus") {
            f.kraus = Some(ks.iter().map(Mat::from_json).collect::<Result<_>>()?);
        }
        Ok(f)
    }
}

pub fn cpm_compose<S: Scalar>(g: &CpmMap<S>, f: &CpmMap<S>) -> Result<CpmMap<S>> {
    if g.in_dim != f.out_dim {
        return Err(Error::TypeMismatch(format!(
            "cannot compose CPM maps {}→{} after {}→{}",
            g.in_dim, g.out_dim, f.in_dim, f.out_dim
        )));
    }
    let s = g.superoperator().mul_unchecked(&f.superoperator());
    let mut out = CpmMap::from_superoperator(f.in_dim, g.out_dim, &s);
    if let (Some(kg), Some(kf)) = (&g.kraus, &f.kraus) {
        if kg.len() * kf.len() <= 64 {
            out.kraus = Some(kg.iter().flat_map(|a| kf.iter().map(move |b| a.mul_unchecked(b))).collect());
        }
    }
    Ok(out)
}

pub fn cpm_tensor<S: Scalar>(f: &CpmMap<S>, g: &CpmMap<S>) -> CpmMap<S> {
    let (n1, m1, n2, m2) = (f.in_dim, f.out_dim, g.in_dim, g.out_dim);
    let (n, m) = (n1 * n2, m1 * m2);
    let split = |x: usize| {
        let (i, a) = (x / m, x % m);
        ((i / n2, i % n2), (a / m2, a % m2))
    };
    let choi = Mat::from_fn(n * m, n * m, |r, c| {
        let ((i1, i2), (a1, a2)) = split(r);
        let ((j1, j2), (b1, b2)) = split(c);
        f.choi
            .get(i1 * m1 + a1, j1 * m1 + b1)
            .mul(g.choi.get(i2 * m2 + a2, j2 * m2 + b2))
    });
    let kraus = match (&f.kraus, &g.kraus) {
        (Some(kf), Some(kg)) if kf.len() * kg.len() <= 64 => {
            Some(kf.iter().flat_map(|a| kg.iter().map(move |b| a.kron(b))).collect())
        }
        _ => None,
    };
    CpmMap {
        in_dim: n,
        out_dim: m,
        choi,
        kraus,
    }
}

/// Choi matrix of the daggered Kraus family.
pub fn cpm_dagger<S: Scalar>(f: &CpmMap<S>) -> CpmMap<S> {
    let (n, m) = (f.in_dim, f.out_dim);
    let choi = Mat::from_fn(n * m, n * m, |r, c| {
        let (a, i) = (r / n, r % n);
        let (b, j) = (c / n, c % n);
        f.choi.get(i * m + a, j * m + b).conj()
    });
    CpmMap {
        in_dim: m,
        out_dim: n,
        choi,
        kraus: f.kraus.as_ref().map(|ks| ks.iter().map(Mat::dagger).collect()),
    }
}

pub fn cpm_add<S: Scalar>(f: &CpmMap<S>, g: &CpmMap<S>) -> Result<CpmMap<S>> {
    if (f.in_dim, f.out_dim) != (g.in_dim, g.out_dim) {
        return Err(Error::TypeMismatch(format!(
            "cannot add CPM maps {}→{} and {}→{}",
            f.in_dim, f.out_dim, g.in_dim, g.out_dim
        )));
    }
    let kraus = match (&f.kraus, &g.kraus) {
        (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
        _ => None,
    };
    Ok(CpmMap {
        in_dim: f.in_dim,
        out_dim: f.out_dim,
        choi: f.choi.add(&g.choi)?,
        kraus,
    })
}

/// Addition through dagger biproducts of the base: the Kraus families of
/// `f` and `g` stacked into `⟨V_f, V_g⟩ : n → (k_f ⊕ k_g) ⊗ m`, doubled, with
/// the environment discarded.
pub fn cpm_add_via_biproduct<S: Scalar>(f: &CpmMap<S>, g: &CpmMap<S>) -> Result<CpmMap<S>> {
    let (Some(kf), Some(kg)) = (&f.kraus, &g.kraus) else {
        return Err(Error::Precondition("biproduct addition needs Kraus witnesses".into()));
    };
    let (n, m) = (f.in_dim, f.out_dim);
    let family: Vec<&Mat<S>> = kf.iter().chain(kg).collect();
    let k = family.len();
    if k == 0 {
        return Ok(CpmMap::zero(n, m));
    }
    // V[(e·m + a), i] = K_e[a, i]
    let v = Mat::from_fn(k * m, n, |r, i| family[r / m].get(r % m, i).clone());
    let pure = dbl(&v);
    let discard_env = cpm_tensor(&cpm_discard(k), &cpm_identity(m));
    let mut out = cpm_compose(&discard_env, &pure)?;
    out.kraus = None;
    Ok(out)
}

pub fn cpm_identity<S: Scalar>(n: usize) -> CpmMap<S> {
    dbl(&Mat::identity(n))
}

/// The trace effect `n → 1`, with Choi matrix `I_n`.
pub fn cpm_discard<S: Scalar>(n: usize) -> CpmMap<S> {
    CpmMap {
        in_dim: n,
        out_dim: 1,
        choi: Mat::identity(n),
        kraus: Some((0..n).map(|i| Mat::basis(n, i).transpose()).collect()),
    }
}

/// `Tr_out(C) = id` within `tol` (relative).
pub fn is_cpm_causal<S: Scalar>(f: &CpmMap<S>, tol: f64) -> bool {
    f.output_trace().approx_eq(&Mat::identity(f.in_dim), tol)
}

/// `(id_m ⊗ discard_k) ∘ f` for `f : n → m·k`.
pub fn discard_last<S: Scalar>(f: &CpmMap<S>, m: usize, k: usize) -> Result<CpmMap<S>> {
    if m * k != f.out_dim {
        return Err(Error::TypeMismatch(format!("output {} is not {m}·{k}", f.out_dim)));
    }
    let mut out = cpm_compose(&cpm_tensor(&cpm_identity(m), &cpm_discard(k)), f)?;
    out.kraus = None;
    Ok(out)
}

/// `(discard_k ⊗ id_m) ∘ f` for `f : n → k·m`.
pub fn discard_first<S: Scalar>(f: &CpmMap<S>, k: usize, m: usize) -> Result<CpmMap<S>> {
    if m * k != f.out_dim {
        return Err(Error::TypeMismatch(format!("output {} is not {k}·{m}", f.out_dim)));
    }
    let mut out = cpm_compose(&cpm_tensor(&cpm_discard(k), &cpm_identity(m)), f)?;
    out.kraus = None;
    Ok(out)
}

/// Hermitian PSD test by symmetric elimination over an ordered subfield.
pub trait OrderedHermitian: Field {
    /// Sign of a real element; `None` when not real.
    fn real_sign(&self) -> Option<std::cmp::Ordering>;
}

impl OrderedHermitian for crate::scalars::Rat {
    fn real_sign(&self) -> Option<std::cmp::Ordering> {
        use num_traits::Signed;
        Some(if self.0.is_positive() {
            std::cmp::Ordering::Greater
        } else if self.0.is_negative() {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Equal
        })
    }
}

impl OrderedHermitian for crate::scalars::GaussRat {
    fn real_sign(&self) -> Option<std::cmp::Ordering> {
        use num_traits::{Signed, Zero};
        if !self.im.is_zero() {
            return None;
        }
        Some(if self.re.is_positive() {
            std::cmp::Ordering::Greater
        } else if self.re.is_negative() {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Equal
        })
    }
}

/// Exact positive semidefiniteness of a Hermitian matrix: `LDL†` elimination
/// where a zero pivot forces its whole row to vanish.
pub fn is_psd_exact<S: OrderedHermitian>(m: &Mat<S>) -> bool {
    use std::cmp::Ordering;
    if !m.is_square() || !m.is_self_adjoint(0.0) {
        return false;
    }
    let n = m.rows();
    let mut a = m.clone();
    for k in 0..n {
        let pivot = a.get(k, k).clone();
        match pivot.real_sign() {
            None | Some(Ordering::Less) => return false,
            Some(Ordering::Equal) => {
                if (k + 1..n).any(|j| !a.get(k, j).is_zero()) {
                    return false;
                }
            }
            Some(Ordering::Greater) => {
                let inv = pivot.inv().expect("positive pivot");
                for i in k + 1..n {
                    let factor = a.get(i, k).mul(&inv);
                    for j in k + 1..n {
                        let v = a.get(i, j).sub(&factor.mul(a.get(k, j)));
                        a.set(i, j, v);
                    }
                }
            }
        }
    }
    true
}

/// `CPM(Mat_S)`. `Cpm<Complex64>` is `Quant_ℂ`, `Cpm<f64>` is `Quant_ℝ`.
#[derive(Clone, Debug)]
pub struct Cpm<S> {
    tol: f64,
    _scalar: PhantomData<fn() -> S>,
}

pub type Quant = Cpm<Complex64>;
pub type QuantReal = Cpm<f64>;

impl<S: Scalar> Default for Cpm<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Cpm<S> {
    pub fn new() -> Self {
        Self::with_tolerance(DEFAULT_TOL)
    }

    pub fn with_tolerance(tol: f64) -> Self {
        Cpm {
            tol: if S::KIND.is_float() { tol } else { 0.0 },
            _scalar: PhantomData,
        }
    }
}

impl<S: Scalar> Theory for Cpm<S> {
    type Obj = usize;
    type Mor = CpmMap<S>;

    fn name(&self) -> String {
        format!("cpm_{}", S::KIND.name())
    }

    fn unit(&self) -> usize {
        1
    }

    fn dom(&self, f: &CpmMap<S>) -> usize {
        f.in_dim
    }

    fn cod(&self, f: &CpmMap<S>) -> usize {
        f.out_dim
    }

    fn identity(&self, a: &usize) -> CpmMap<S> {
        cpm_identity(*a)
    }

    fn compose(&self, g: &CpmMap<S>, f: &CpmMap<S>) -> Result<CpmMap<S>> {
        cpm_compose(g, f)
    }

    fn tensor_obj(&self, a: &usize, b: &usize) -> usize {
        a * b
    }

    fn tensor(&self, f: &CpmMap<S>, g: &CpmMap<S>) -> CpmMap<S> {
        cpm_tensor(f, g)
    }

    fn swap(&self, a: &usize, b: &usize) -> CpmMap<S> {
        dbl(&Mat::swap(*a, *b))
    }

    fn zero(&self, a: &usize, b: &usize) -> CpmMap<S> {
        CpmMap::zero(*a, *b)
    }

    fn discard(&self, a: &usize) -> CpmMap<S> {
        cpm_discard(*a)
    }

    fn dagger(&self, f: &CpmMap<S>) -> Result<CpmMap<S>> {
        Ok(cpm_dagger(f))
    }

    fn cup(&self, a: &usize) -> Result<CpmMap<S>> {
        Ok(dbl(&Mat::cup(*a)))
    }

    fn cap(&self, a: &usize) -> Result<CpmMap<S>> {
        Ok(dbl(&Mat::cap(*a)))
    }

    fn deviation(&self, f: &CpmMap<S>, g: &CpmMap<S>) -> f64 {
        if (f.in_dim, f.out_dim) != (g.in_dim, g.out_dim) {
            return f64::INFINITY;
        }
        f.choi.relative_deviation(&g.choi)
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }

    fn obj_json(&self, a: &usize) -> Value {
        json!(a)
    }

    fn payload_json(&self, f: &CpmMap<S>) -> Value {
        f.to_json()
    }
}

impl<S: Scalar> Additive for Cpm<S> {
    fn add(&self, f: &CpmMap<S>, g: &CpmMap<S>) -> Result<CpmMap<S>> {
        cpm_add(f, g)
    }
}

/// Sums of up to two doubled matrices with entries from the backend's small
/// value set.
#[derive(Clone, Copy, Debug, Default)]
pub struct CpmSampler;

impl<S: Scalar> Sampler<Cpm<S>> for CpmSampler {
    fn object(&self, _: &Cpm<S>, rng: &mut SampleRng, bound: usize) -> usize {
        rng.gen_range(1..=bound.max(1))
    }

    fn morphism(&self, _: &Cpm<S>, rng: &mut SampleRng, a: &usize, b: &usize) -> CpmMap<S> {
        let k = rng.gen_range(1..=2);
        let kraus: Vec<Mat<S>> = (0..k).map(|_| Mat::sample(rng, *b, *a)).collect();
        from_kraus(*a, *b, &kraus).expect("shapes agree")
    }
}
