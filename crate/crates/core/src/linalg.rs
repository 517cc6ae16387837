//! Linear algebra used by kernels, CPM and the audits.
//!
//! Exact fields get Gaussian elimination; float backends get SVD and
//! Hermitian eigendecompositions (via nalgebra) with a uniform rank policy:
//! singular values below `tol · σ_max` are zero.

use rand::Rng;

use crate::matrix::Mat;
use crate::scalars::{Field, FloatScalar};

/// Reduced row echelon form and pivot columns.
pub fn rref<S: Field>(m: &Mat<S>) -> (Mat<S>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let (x, y) = (a.get(p, j).clone(), a.get(r, j).clone());
                a.set(p, j, y);
                a.set(r, j, x);
            }
        }
        let inv = a.get(r, c).inv().expect("pivot is nonzero");
        for j in 0..cols {
            let v = a.get(r, j).mul(&inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in 0..cols {
                let v = a.get(i, j).sub(&factor.mul(a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<S: Field>(m: &Mat<S>) -> usize {
    rref(m).1.len()
}

/// Basis of `{x | m x = 0}` as the columns of a `cols × k` matrix.
pub fn nullspace<S: Field>(m: &Mat<S>) -> Mat<S> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Mat::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis.set(f, k, S::one());
        for (row, &p) in pivots.iter().enumerate() {
            basis.set(p, k, r.get(row, f).neg());
        }
    }
    basis
}

/// Linearly independent columns of `m` spanning its column space.
pub fn column_basis<S: Field>(m: &Mat<S>) -> Mat<S> {
    let (_, pivots) = rref(m);
    m.select_cols(&pivots)
}

pub fn inverse<S: Field>(m: &Mat<S>) -> Option<Mat<S>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let aug = m.hstack(&Mat::identity(n)).ok()?;
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
        return None;
    }
    Some(r.submatrix(0, n, n, n))
}

/// Some `x` with `a x = b`, if one exists.
pub fn solve<S: Field>(a: &Mat<S>, b: &Mat<S>) -> Option<Mat<S>> {
    let n = a.cols();
    let aug = a.hstack(b).ok()?;
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = Mat::zeros(n, b.cols());
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, r.get(row, n + j).clone());
        }
    }
    Some(x)
}

/// Orthogonal projection onto the span of the independent columns of `basis`:
/// `N (N†N)⁻¹ N†`.
pub fn projection_onto<S: Field>(basis: &Mat<S>) -> Mat<S> {
    let n = basis.rows();
    if basis.cols() == 0 {
        return Mat::zeros(n, n);
    }
    let gram = basis.dagger().mul_unchecked(basis);
    let inv = inverse(&gram).expect("Gram matrix of independent vectors is invertible");
    basis.mul_unchecked(&inv).mul_unchecked(&basis.dagger())
}

/// Thin singular value decomposition `m = U diag(σ) V†`.
#[derive(Clone, Debug)]
pub struct Svd<S> {
    pub u: Mat<S>,
    pub sigma: Vec<f64>,
    pub v: Mat<S>,
}

pub fn svd<S: FloatScalar>(m: &Mat<S>) -> Svd<S> {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    let (u, sigma, v) = S::svd_raw(rows, cols, m.data());
    Svd {
        u: Mat::from_vec(rows, k, u).expect("svd shape"),
        sigma,
        v: Mat::from_vec(cols, k, v).expect("svd shape"),
    }
}

/// Numerical rank of a decreasing singular spectrum.
///
/// Values inside `[cut/10, 10·cut]` with `cut = tol · σ_max` make the
/// decision ambiguous; the cut then goes at the largest relative gap and the
/// second component reports that the heuristic fired.
pub fn numerical_rank(sigma: &[f64], tol: f64) -> (usize, bool) {
    numerical_rank_floor(sigma, tol, 0.0)
}

/// As [`numerical_rank`] with `cut = tol · max(σ_max, floor)`, so spectra of
/// morphisms much smaller than `floor` count as zero.
pub fn numerical_rank_floor(sigma: &[f64], tol: f64, floor: f64) -> (usize, bool) {
    let Some(&max) = sigma.first() else {
        return (0, false);
    };
    if max <= f64::MIN_POSITIVE {
        return (0, false);
    }
    let cut = tol * max.max(floor);
    let plain = sigma.iter().take_while(|&&s| s > cut).count();
    let ambiguous = sigma.iter().any(|&s| s > cut / 10.0 && s < cut * 10.0);
    if !ambiguous {
        return (plain, false);
    }
    let lo = sigma.iter().take_while(|&&s| s >= cut * 10.0).count();
    let hi = sigma.iter().take_while(|&&s| s > cut / 10.0).count();
    let mut best = (plain, 0.0);
    for r in lo.max(1)..=hi {
        let next = sigma.get(r).copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        let gap = sigma[r - 1] / next;
        if gap > best.1 {
            best = (r, gap);
        }
    }
    (best.0, true)
}

/// Isometry onto the column space of `m`.
pub fn range_isometry<S: FloatScalar>(m: &Mat<S>, tol: f64) -> (Mat<S>, bool) {
    let d = svd(m);
    let (r, flagged) = numerical_rank(&d.sigma, tol);
    let idx: Vec<usize> = (0..r).collect();
    (d.u.select_cols(&idx), flagged)
}

/// Isometry onto the nullspace of `m`.
pub fn null_isometry<S: FloatScalar>(m: &Mat<S>, tol: f64) -> (Mat<S>, bool) {
    let (rows, cols) = m.shape();
    // pad with zero rows so the thin SVD returns a full V
    let padded = if rows < cols {
        m.vstack(&Mat::zeros(cols - rows, cols)).expect("same width")
    } else {
        m.clone()
    };
    let d = svd(&padded);
    let (r, flagged) = numerical_rank(&d.sigma, tol);
    let idx: Vec<usize> = (r..cols).collect();
    (d.v.select_cols(&idx), flagged)
}

/// Orthonormal complement of the columns of an isometry.
pub fn complement_isometry<S: FloatScalar>(k: &Mat<S>, tol: f64) -> Mat<S> {
    null_isometry(&k.dagger(), tol).0
}

/// Moore–Penrose pseudo-inverse with the same cutoff as the rank policy.
pub fn pinv<S: FloatScalar>(m: &Mat<S>, tol: f64) -> Mat<S> {
    let d = svd(m);
    let (r, _) = numerical_rank(&d.sigma, tol);
    let mut out = Mat::<S>::zeros(m.cols(), m.rows());
    for k in 0..r {
        let inv = S::from_f64(1.0 / d.sigma[k]);
        for i in 0..m.cols() {
            let vi = d.v.get(i, k).mul(&inv);
            for j in 0..m.rows() {
                let cur = out.get(i, j).add(&vi.mul(&d.u.get(j, k).conj()));
                out.set(i, j, cur);
            }
        }
    }
    out
}

/// Least-squares solution of `a x = b` and its residual `‖a x - b‖_F`.
pub fn least_squares<S: FloatScalar>(a: &Mat<S>, b: &Mat<S>, tol: f64) -> (Mat<S>, f64) {
    let x = pinv(a, tol).mul_unchecked(b);
    let residual = a.mul_unchecked(&x).distance_fro(b);
    (x, residual)
}

/// Eigenvalues ascending and eigenvector columns of a Hermitian matrix.
pub fn eigh<S: FloatScalar>(m: &Mat<S>) -> (Vec<f64>, Mat<S>) {
    let n = m.rows();
    let (vals, vecs) = S::eigh_raw(n, m.data());
    (vals, Mat::from_vec(n, n, vecs).expect("eigh shape"))
}

/// Positive square root of a positive semidefinite matrix.
pub fn psd_sqrt<S: FloatScalar>(m: &Mat<S>) -> Mat<S> {
    let (vals, vecs) = eigh(m);
    let roots: Vec<S> = vals.iter().map(|&l| S::from_f64(l.max(0.0).sqrt())).collect();
    vecs.mul_unchecked(&Mat::diag(&roots)).mul_unchecked(&vecs.dagger())
}

/// Unitary factor `W V†` of the polar decomposition of a square matrix.
pub fn polar_unitary<S: FloatScalar>(m: &Mat<S>) -> Mat<S> {
    let d = svd(m);
    d.u.mul_unchecked(&d.v.dagger())
}

/// Haar-distributed isometry `rows × cols` (`rows ≥ cols`).
pub fn random_isometry<S: FloatScalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat<S> {
    assert!(rows >= cols, "isometry {rows}x{cols} cannot exist");
    if cols == 0 {
        return Mat::zeros(rows, 0);
    }
    polar_unitary_thin(&Mat::gaussian(rng, rows, cols))
}

pub fn random_unitary<S: FloatScalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat<S> {
    random_isometry(rng, n, n)
}

fn polar_unitary_thin<S: FloatScalar>(m: &Mat<S>) -> Mat<S> {
    let d = svd(m);
    d.u.mul_unchecked(&d.v.dagger())
}

/// `‖k†k - id‖` as a relative deviation.
pub fn isometry_defect<S: FloatScalar>(k: &Mat<S>) -> f64 {
    k.dagger()
        .mul_unchecked(k)
        .deviation(&Mat::identity(k.cols()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Complex64, GaussRat, Rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(rows: usize, cols: usize, xs: &[i64]) -> Mat<Rat> {
        Mat::from_vec(rows, cols, xs.iter().map(|&x| Rat::frac(x, 1)).collect()).unwrap()
    }

    #[test]
    fn exact_nullspace_annihilates() {
        let m = q(2, 4, &[1, 2, 0, 1, 2, 4, 1, 0]);
        let n = nullspace(&m);
        assert_eq!(n.cols(), 2);
        assert!(m.compose(&n).unwrap().is_zero());
        assert_eq!(rank(&n), 2);
    }

    #[test]
    fn exact_inverse_and_solve() {
        let m = q(2, 2, &[2, 1, 1, 1]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.compose(&inv).unwrap(), Mat::identity(2));
        assert!(inverse(&q(2, 2, &[1, 2, 2, 4])).is_none());
        let b = q(2, 1, &[3, 2]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.compose(&x).unwrap(), b);
        assert!(solve(&q(2, 1, &[1, 2]), &q(2, 1, &[1, 0])).is_none());
    }

    #[test]
    fn exact_projection_is_idempotent_over_gaussian_rationals() {
        let basis = Mat::column(vec![GaussRat::from_ints(1, 0), GaussRat::from_ints(0, 1), GaussRat::from_ints(1, 1)]);
        let p = projection_onto(&basis);
        assert_eq!(p.compose(&p).unwrap(), p);
        assert_eq!(p.dagger(), p);
        assert_eq!(p.trace(), GaussRat::from_ints(1, 0));
    }

    #[test]
    fn float_null_isometry_of_bra_zero() {
        let bra0 = Mat::row(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let (k, _) = null_isometry(&bra0, 1e-9);
        assert_eq!(k.shape(), (2, 1));
        assert!(k.get(0, 0).norm() < 1e-12);
        assert!((k.get(1, 0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_isometries_are_isometric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (r, c) in [(4, 2), (3, 3), (5, 1)] {
            let v: Mat<Complex64> = random_isometry(&mut rng, r, c);
            assert!(isometry_defect(&v) < 1e-12);
        }
    }

    #[test]
    fn rank_heuristic_fires_only_near_the_cut() {
        assert_eq!(numerical_rank(&[1.0, 0.5, 1e-14], 1e-9), (2, false));
        let (r, flagged) = numerical_rank(&[1.0, 0.5, 2e-9, 1e-15], 1e-9);
        assert!(flagged);
        assert_eq!(r, 2);
        assert_eq!(numerical_rank(&[], 1e-9), (0, false));
        assert_eq!(numerical_rank(&[0.0, 0.0], 1e-9), (0, false));
    }

    #[test]
    fn pinv_solves_consistent_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a: Mat<f64> = Mat::gaussian(&mut rng, 4, 2);
        let x: Mat<f64> = Mat::gaussian(&mut rng, 2, 3);
        let b = a.mul_unchecked(&x);
        let (sol, res) = least_squares(&a, &b, 1e-12);
        assert!(res < 1e-10);
        assert!(sol.distance_fro(&x) < 1e-10);
    }
}
