use rand::Rng;

use super::{cpm_compose, cpm_discard, dbl, from_kraus, unvec, Cpm, CpmMap};
use crate::catcore::{SampleRng, Sampler};
use crate::error::{Error, Result};
use crate::linalg::{self, eigh};
use crate::matrix::Mat;
use crate::scalars::FloatScalar;

/// Smallest eigenvalue of the Choi matrix.
pub fn min_eigenvalue<S: FloatScalar>(f: &CpmMap<S>) -> f64 {
    if f.choi.rows() == 0 {
        return 0.0;
    }
    eigh(&f.choi).0[0]
}

/// Kraus operators `√λ · unvec(v)` from the eigendecomposition of the Choi
/// matrix, dropping eigenvalues below `tol · λ_max`.
pub fn kraus_from_choi<S: FloatScalar>(f: &CpmMap<S>, tol: f64) -> Result<Vec<Mat<S>>> {
    let (n, m) = (f.in_dim, f.out_dim);
    if f.choi.rows() == 0 {
        return Ok(Vec::new());
    }
    let (vals, vecs) = eigh(&f.choi);
    let scale = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if vals[0] < -tol * scale.max(1.0) {
        return Err(Error::NotCompletelyPositive { min_eigenvalue: vals[0] });
    }
    let lmax = *vals.last().expect("nonempty");
    if lmax <= f64::MIN_POSITIVE {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (idx, &l) in vals.iter().enumerate().rev() {
        if l < tol * lmax {
            break;
        }
        let root = S::from_f64(l.sqrt());
        let v: Vec<S> = vecs.col(idx).iter().map(|x| x.mul(&root)).collect();
        out.push(unvec(&v, m, n));
    }
    Ok(out)
}

/// Rank-one Choi matrix: `λ₂ / λ₁ ≤ tol`.
pub fn is_pure<S: FloatScalar>(f: &CpmMap<S>, tol: f64) -> bool {
    if f.choi.rows() < 2 {
        return true;
    }
    let (vals, _) = eigh(&f.choi);
    let k = vals.len();
    let l1 = vals[k - 1];
    l1 <= f64::MIN_POSITIVE || vals[k - 2].max(0.0) / l1 <= tol
}

/// A matrix `f` with `Dbl(f)` equal to the given pure map.
pub fn pure_witness<S: FloatScalar>(f: &CpmMap<S>, tol: f64) -> Option<Mat<S>> {
    if !is_pure(f, tol) {
        return None;
    }
    let ks = kraus_from_choi(f, tol).ok()?;
    Some(ks.into_iter().next().unwrap_or_else(|| Mat::zeros(f.out_dim, f.in_dim)))
}

/// Stinespring dilation `Dbl(V)` with `V : n → m·k`, `V[(a·k + e), i] =
/// K_e[a, i]` and `k` the Kraus rank (at least one).
pub fn purify<S: FloatScalar>(f: &CpmMap<S>, tol: f64) -> Result<(CpmMap<S>, usize)> {
    let (n, m) = (f.in_dim, f.out_dim);
    let ks = kraus_from_choi(f, tol)?;
    let k = ks.len().max(1);
    let v = Mat::from_fn(m * k, n, |r, i| {
        let (a, e) = (r / k, r % k);
        ks.get(e).map(|ke| *ke.get(a, i)).unwrap_or_else(S::zero)
    });
    Ok((dbl(&v), k))
}

/// Environment unitary relating two purifications.
#[derive(Clone, Debug)]
pub struct EuWitness<S> {
    pub unitary: Mat<S>,
    /// `‖(id ⊗ U) V_f − V_g‖` after the best global phase.
    pub residual: f64,
}

/// Rows of `V : n → m·k` regrouped as `X[e, (a, i)] = V[(a·k + e), i]`.
fn environment_rows<S: FloatScalar>(v: &Mat<S>, m: usize, k: usize, pad: usize) -> Mat<S> {
    let n = v.cols();
    Mat::from_fn(pad, m * n, |e, c| {
        let (a, i) = (c / n, c % n);
        if e < k {
            *v.get(a * k + e, i)
        } else {
            S::zero()
        }
    })
}

/// For pure `f : n → m·k_f` and `g : n → m·k_g` with equal `m`-marginals,
/// a unitary `U` on the padded environment with `(id_m ⊗ U) ∘ f = g`.
///
/// The unitary solves the orthogonal Procrustes problem for the overlap of
/// the Kraus witnesses; the smaller environment is padded with zeros.
pub fn essential_uniqueness_witness<S: FloatScalar>(
    f: &CpmMap<S>,
    g: &CpmMap<S>,
    m: usize,
    tol: f64,
) -> Result<EuWitness<S>> {
    if f.in_dim != g.in_dim || m == 0 || f.out_dim % m != 0 || g.out_dim % m != 0 {
        return Err(Error::TypeMismatch("purifications must share input and system output".into()));
    }
    let (kf, kg) = (f.out_dim / m, g.out_dim / m);
    let mf = super::discard_last(f, m, kf)?;
    let mg = super::discard_last(g, m, kg)?;
    let dev = mf.choi.relative_deviation(&mg.choi);
    if dev > tol {
        return Err(Error::Precondition(format!("marginals differ by {dev:e}")));
    }
    let vf = pure_witness(f, tol).ok_or_else(|| Error::Precondition("first map is not pure".into()))?;
    let vg = pure_witness(g, tol).ok_or_else(|| Error::Precondition("second map is not pure".into()))?;
    let k = kf.max(kg);
    let xf = environment_rows(&vf, m, kf, k);
    let xg = environment_rows(&vg, m, kg, k);
    let overlap = xg.mul_unchecked(&xf.dagger());
    let u = linalg::polar_unitary(&overlap);
    let residual = u.mul_unchecked(&xf).distance_fro(&xg);
    let scale = 1.0 + xf.frobenius().max(xg.frobenius());
    if residual > tol.sqrt() * scale {
        return Err(Error::Precondition(format!(
            "no environment unitary relates the purifications (residual {residual:e})"
        )));
    }
    Ok(EuWitness { unitary: u, residual })
}

/// `(discard ∘ Dbl(f) = discard ∘ Dbl(g), f†f = g†g)`.
pub fn cp_axiom_check<S: FloatScalar>(f: &Mat<S>, g: &Mat<S>, tol: f64) -> Result<(bool, bool)> {
    if f.cols() != g.cols() {
        return Err(Error::TypeMismatch("CP axiom needs a common source".into()));
    }
    let lhs_f = cpm_compose(&cpm_discard(f.rows()), &dbl(f))?;
    let lhs_g = cpm_compose(&cpm_discard(g.rows()), &dbl(g))?;
    let lhs = lhs_f.choi.approx_eq(&lhs_g.choi, tol);
    let rhs = f.dagger().mul_unchecked(f).approx_eq(&g.dagger().mul_unchecked(g), tol);
    Ok((lhs, rhs))
}

/// `Dbl(k)` for the isometry `k` onto the kernel of the induced effect
/// `discard ∘ f`; returns the isometry.
pub fn cpm_kernel<S: FloatScalar>(f: &CpmMap<S>, tol: f64) -> Mat<S> {
    // the effect discard ∘ f is the positive operator Tr_out(C)ᵀ
    let effect = f.output_trace().transpose();
    linalg::null_isometry(&effect, tol).0
}

/// A causal channel `n → m` with Kraus rank `k` from a Haar isometry;
/// needs `m · k ≥ n`.
pub fn random_channel<S: FloatScalar, R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, k: usize) -> CpmMap<S> {
    let v: Mat<S> = linalg::random_isometry(rng, m * k, n);
    let kraus: Vec<Mat<S>> = (0..k)
        .map(|e| Mat::from_fn(m, n, |a, i| *v.get(a * k + e, i)))
        .collect();
    from_kraus(n, m, &kraus).expect("shapes agree")
}

/// A CP map with Gaussian Kraus operators.
pub fn random_cpm<S: FloatScalar, R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, k: usize) -> CpmMap<S> {
    let kraus: Vec<Mat<S>> = (0..k).map(|_| Mat::gaussian(rng, m, n)).collect();
    from_kraus(n, m, &kraus).expect("shapes agree")
}

/// Gaussian Kraus families of rank one or two.
#[derive(Clone, Copy, Debug, Default)]
pub struct FloatCpmSampler;

impl<S: FloatScalar> Sampler<Cpm<S>> for FloatCpmSampler {
    fn object(&self, _: &Cpm<S>, rng: &mut SampleRng, bound: usize) -> usize {
        rng.gen_range(1..=bound.max(1))
    }

    fn morphism(&self, _: &Cpm<S>, rng: &mut SampleRng, a: &usize, b: &usize) -> CpmMap<S> {
        let k = rng.gen_range(1..=2);
        random_cpm(rng, *a, *b, k)
    }
}
