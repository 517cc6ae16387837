use std::marker::PhantomData;

use rand::Rng;

use super::{KernelBackend, KernelForm, KernelRep};
use crate::backends::rel::inclusion;
use crate::catcore::SampleRng;
use crate::error::{Error, Result};
use crate::linalg::{self, numerical_rank_floor};
use crate::matrix::Mat;
use crate::scalars::{BackendKind, Field, FloatScalar, DEFAULT_TOL};

/// Isometry-form kernels with SVD rank decisions.
///
/// Singular values below `tol · max(σ_max, 1)` count as zero: morphisms
/// built from isometries have norm at most one, so rounding noise on a
/// theoretically zero composite is not mistaken for rank.
#[derive(Clone, Copy, Debug)]
pub struct FloatKernels<S> {
    tol: f64,
    _scalar: PhantomData<fn() -> S>,
}

impl<S: FloatScalar> Default for FloatKernels<S> {
    fn default() -> Self {
        Self::new(DEFAULT_TOL)
    }
}

impl<S: FloatScalar> FloatKernels<S> {
    pub fn new(tol: f64) -> Self {
        FloatKernels {
            tol,
            _scalar: PhantomData,
        }
    }

    fn isometry(&self, ambient: usize, k: Mat<S>, heuristic: bool) -> KernelRep<S> {
        KernelRep {
            ambient,
            rank: k.cols(),
            form: KernelForm::Isometry(k),
            heuristic,
        }
    }
}

impl<S: FloatScalar> KernelBackend for FloatKernels<S> {
    type S = S;

    fn name(&self) -> String {
        format!("kernels_{}", S::KIND.name())
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }

    fn kernel(&self, f: &Mat<S>) -> KernelRep<S> {
        let (rows, cols) = f.shape();
        if rows == 0 || cols == 0 {
            return self.isometry(cols, Mat::identity(cols), false);
        }
        let padded = if rows < cols {
            f.vstack(&Mat::zeros(cols - rows, cols)).expect("same width")
        } else {
            f.clone()
        };
        let d = linalg::svd(&padded);
        let (r, flagged) = numerical_rank_floor(&d.sigma, self.tol, 1.0);
        let idx: Vec<usize> = (r..cols).collect();
        self.isometry(cols, d.v.select_cols(&idx), flagged)
    }

    fn image(&self, f: &Mat<S>) -> KernelRep<S> {
        let (rows, cols) = f.shape();
        if rows == 0 || cols == 0 {
            return self.isometry(rows, Mat::zeros(rows, 0), false);
        }
        let d = linalg::svd(f);
        let (r, flagged) = numerical_rank_floor(&d.sigma, self.tol, 1.0);
        let idx: Vec<usize> = (0..r).collect();
        self.isometry(rows, d.u.select_cols(&idx), flagged)
    }

    fn complement(&self, k: &KernelRep<S>) -> KernelRep<S> {
        let mut c = self.kernel(&self.mono(k).dagger());
        c.heuristic |= k.heuristic;
        c
    }

    fn mono(&self, k: &KernelRep<S>) -> Mat<S> {
        match &k.form {
            KernelForm::Isometry(m) => m.clone(),
            KernelForm::Projection(p) => self.image(p).mono_matrix(),
        }
    }

    fn retraction(&self, k: &KernelRep<S>) -> Mat<S> {
        self.mono(k).dagger()
    }

    fn projection(&self, k: &KernelRep<S>) -> Mat<S> {
        match &k.form {
            KernelForm::Isometry(m) => m.mul_unchecked(&m.dagger()),
            KernelForm::Projection(p) => p.clone(),
        }
    }

    fn random_morphism(&self, rng: &mut SampleRng, rows: usize, cols: usize) -> Mat<S> {
        Mat::gaussian(rng, rows, cols)
    }
}

impl<S: FloatScalar> KernelRep<S> {
    fn mono_matrix(self) -> Mat<S> {
        match self.form {
            KernelForm::Isometry(m) => m,
            KernelForm::Projection(_) => unreachable!("float images are isometries"),
        }
    }
}

/// Projection-form kernels over an exact field whose involution makes
/// `N†N` invertible for independent columns (`ℚ`, `ℚ[i]`).
#[derive(Clone, Copy, Debug)]
pub struct ExactKernels<S> {
    _scalar: PhantomData<fn() -> S>,
}

impl<S: Field> ExactKernels<S> {
    pub fn new() -> Result<Self> {
        match S::KIND {
            BackendKind::Rat | BackendKind::GaussRat => Ok(ExactKernels { _scalar: PhantomData }),
            kind => Err(Error::unsupported("dagger kernels", kind.name())),
        }
    }

    fn projection_rep(&self, basis: &Mat<S>) -> KernelRep<S> {
        KernelRep {
            ambient: basis.rows(),
            rank: basis.cols(),
            form: KernelForm::Projection(linalg::projection_onto(basis)),
            heuristic: false,
        }
    }
}

impl<S: Field> KernelBackend for ExactKernels<S> {
    type S = S;

    fn name(&self) -> String {
        format!("kernels_{}", S::KIND.name())
    }

    fn tolerance(&self) -> f64 {
        0.0
    }

    fn kernel(&self, f: &Mat<S>) -> KernelRep<S> {
        self.projection_rep(&linalg::nullspace(f))
    }

    fn image(&self, f: &Mat<S>) -> KernelRep<S> {
        self.projection_rep(&linalg::column_basis(f))
    }

    fn complement(&self, k: &KernelRep<S>) -> KernelRep<S> {
        let p = self.projection(k);
        KernelRep {
            ambient: k.ambient,
            rank: k.ambient - k.rank,
            form: KernelForm::Projection(Mat::identity(k.ambient).sub(&p).expect("square")),
            heuristic: false,
        }
    }

    fn mono(&self, k: &KernelRep<S>) -> Mat<S> {
        match &k.form {
            KernelForm::Projection(p) => linalg::column_basis(p),
            KernelForm::Isometry(m) => m.clone(),
        }
    }

    fn retraction(&self, k: &KernelRep<S>) -> Mat<S> {
        let b = self.mono(k);
        let gram = b.dagger().mul_unchecked(&b);
        let inv = linalg::inverse(&gram).expect("Gram matrix of independent vectors is invertible");
        inv.mul_unchecked(&b.dagger())
    }

    fn projection(&self, k: &KernelRep<S>) -> Mat<S> {
        match &k.form {
            KernelForm::Projection(p) => p.clone(),
            KernelForm::Isometry(m) => linalg::projection_onto(m),
        }
    }

    fn random_morphism(&self, rng: &mut SampleRng, rows: usize, cols: usize) -> Mat<S> {
        Mat::sample(rng, rows, cols)
    }

    fn deviation(&self, f: &Mat<S>, g: &Mat<S>) -> f64 {
        f.relative_deviation(g)
    }
}

/// Kernels in `Rel`: subsets, represented by diagonal projections.
#[derive(Clone, Copy, Debug, Default)]
pub struct RelKernels;

impl RelKernels {
    fn subset(&self, n: usize, members: impl Fn(usize) -> bool) -> KernelRep<bool> {
        let d: Vec<bool> = (0..n).map(members).collect();
        KernelRep {
            ambient: n,
            rank: d.iter().filter(|&&x| x).count(),
            form: KernelForm::Projection(Mat::diag(&d)),
            heuristic: false,
        }
    }

    pub fn elements(&self, k: &KernelRep<bool>) -> Vec<usize> {
        let p = self.projection(k);
        (0..k.ambient).filter(|&i| *p.get(i, i)).collect()
    }

    pub fn from_subset(&self, n: usize, elems: &[usize]) -> KernelRep<bool> {
        self.subset(n, |i| elems.contains(&i))
    }
}

impl KernelBackend for RelKernels {
    type S = bool;

    fn name(&self) -> String {
        "kernels_rel".into()
    }

    fn tolerance(&self) -> f64 {
        0.0
    }

    /// `{a | no b with R(a, b)}`.
    fn kernel(&self, f: &Mat<bool>) -> KernelRep<bool> {
        self.subset(f.cols(), |a| (0..f.rows()).all(|b| !*f.get(b, a)))
    }

    /// `{b | some a with R(a, b)}`.
    fn image(&self, f: &Mat<bool>) -> KernelRep<bool> {
        self.subset(f.rows(), |b| (0..f.cols()).any(|a| *f.get(b, a)))
    }

    fn complement(&self, k: &KernelRep<bool>) -> KernelRep<bool> {
        let p = self.projection(k);
        self.subset(k.ambient, |i| !*p.get(i, i))
    }

    fn mono(&self, k: &KernelRep<bool>) -> Mat<bool> {
        inclusion(k.ambient, &self.elements(k))
    }

    fn retraction(&self, k: &KernelRep<bool>) -> Mat<bool> {
        self.mono(k).transpose()
    }

    fn projection(&self, k: &KernelRep<bool>) -> Mat<bool> {
        match &k.form {
            KernelForm::Projection(p) => p.clone(),
            KernelForm::Isometry(m) => m.mul_unchecked(&m.transpose()),
        }
    }

    fn random_morphism(&self, rng: &mut SampleRng, rows: usize, cols: usize) -> Mat<bool> {
        Mat::from_fn(rows, cols, |_, _| rng.gen_bool(0.3))
    }

    fn deviation(&self, f: &Mat<bool>, g: &Mat<bool>) -> f64 {
        f.relative_deviation(g)
    }
}
