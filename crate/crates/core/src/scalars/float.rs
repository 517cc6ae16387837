use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};

use super::{BackendKind, Field, Ring, Scalar};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Float backends: `f64` hosts real quantum theory, `Complex64` the complex one.
///
/// The raw decompositions work on row-major slices so that this trait does
/// not drag nalgebra's numeric traits into generic code (their method names
/// collide with [`Scalar`]'s).
pub trait FloatScalar: Field + Copy {
    fn from_f64(x: f64) -> Self;
    /// Real part for the real backend.
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(self) -> Complex64;
    fn re(self) -> f64;
    fn modulus(self) -> f64;
    fn sqrt_real(x: f64) -> Self {
        Self::from_f64(x.sqrt())
    }
    /// Standard normal sample (complex normal with unit variance per part).
    fn normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Uniform element of the unit circle (`±1` for reals).
    fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Thin SVD of a row-major `rows × cols` matrix: `(U, σ, V)` with `U` of
    /// shape `rows × k`, `V` of shape `cols × k`, `k = min(rows, cols)`,
    /// singular values in decreasing order.
    fn svd_raw(rows: usize, cols: usize, data: &[Self]) -> (Vec<Self>, Vec<f64>, Vec<Self>);
    /// Eigendecomposition of a Hermitian matrix: eigenvalues ascending and the
    /// row-major `n × n` matrix whose columns are the eigenvectors.
    fn eigh_raw(n: usize, data: &[Self]) -> (Vec<f64>, Vec<Self>);
}

/// `s = r · u` with `r > 0` real and `u† u = 1`.
pub fn polar_decompose<S: FloatScalar>(s: S) -> Result<(S, S)> {
    let r = s.modulus();
    if r == 0.0 {
        return Err(Error::Invalid("polar decomposition of zero".into()));
    }
    Ok((S::from_f64(r), s.mul(&S::from_f64(1.0 / r))))
}

mod nalg {
    use nalgebra::{ComplexField, DMatrix};

    pub fn to_dmatrix<T: ComplexField>(rows: usize, cols: usize, data: &[T]) -> DMatrix<T> {
        DMatrix::from_row_slice(rows, cols, data)
    }

    fn row_major<T: ComplexField>(m: &DMatrix<T>) -> Vec<T> {
        let mut out = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.push(m[(i, j)].clone());
            }
        }
        out
    }

    pub fn svd<T: ComplexField<RealField = f64>>(
        rows: usize,
        cols: usize,
        data: &[T],
    ) -> (Vec<T>, Vec<f64>, Vec<T>) {
        let k = rows.min(cols);
        if k == 0 {
            return (Vec::new(), Vec::new(), Vec::new());
        }
        let m = to_dmatrix(rows, cols, data);
        let svd = m.svd(true, true);
        let u = svd.u.expect("requested U");
        let v_t = svd.v_t.expect("requested V^T");
        let s: Vec<f64> = svd.singular_values.iter().copied().collect();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap_or(std::cmp::Ordering::Equal));
        let mut u_sorted = DMatrix::<T>::zeros(rows, k);
        let mut v_sorted = DMatrix::<T>::zeros(cols, k);
        let mut s_sorted = Vec::with_capacity(k);
        for (new, &old) in order.iter().enumerate() {
            s_sorted.push(s[old]);
            for i in 0..rows {
                u_sorted[(i, new)] = u[(i, old)].clone();
            }
            for j in 0..cols {
                v_sorted[(j, new)] = v_t[(old, j)].clone().conjugate();
            }
        }
        (row_major(&u_sorted), s_sorted, row_major(&v_sorted))
    }

    pub fn eigh<T: ComplexField<RealField = f64>>(n: usize, data: &[T]) -> (Vec<f64>, Vec<T>) {
        if n == 0 {
            return (Vec::new(), Vec::new());
        }
        let m = to_dmatrix(n, n, data);
        // symmetrise to remove rounding asymmetry before the Hermitian solver
        let h = (&m + m.adjoint()) * T::from_real(0.5);
        let eig = h.symmetric_eigen();
        let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap_or(std::cmp::Ordering::Equal));
        let mut vecs = DMatrix::<T>::zeros(n, n);
        let mut sorted = Vec::with_capacity(n);
        for (new, &old) in order.iter().enumerate() {
            sorted.push(vals[old]);
            for i in 0..n {
                vecs[(i, new)] = eig.eigenvectors[(i, old)].clone();
            }
        }
        (sorted, row_major(&vecs))
    }
}

fn normal_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    // Box–Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

impl Scalar for f64 {
    const KIND: BackendKind = BackendKind::FloatReal;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn magnitude(&self) -> f64 {
        f64::abs(*self)
    }
    fn distance(&self, other: &Self) -> f64 {
        f64::abs(self - other)
    }
    fn is_positive(&self, tol: f64) -> bool {
        *self >= -tol
    }
    fn to_json(&self) -> Value {
        json!(*self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| Error::Json(format!("expected number, got {v}")))
    }
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen_range(-1.0..1.0)
    }
}

impl Ring for f64 {
    fn neg(&self) -> Self {
        -*self
    }
}

impl Field for f64 {
    fn inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / *self)
    }
}

impl FloatScalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_c64(z: Complex64) -> Self {
        z.re
    }
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn re(self) -> f64 {
        self
    }
    fn modulus(self) -> f64 {
        f64::abs(self)
    }
    fn normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        normal_pair(rng).0
    }
    fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.gen_bool(0.5) {
            1.0
        } else {
            -1.0
        }
    }
    fn svd_raw(rows: usize, cols: usize, data: &[Self]) -> (Vec<Self>, Vec<f64>, Vec<Self>) {
        nalg::svd(rows, cols, data)
    }
    fn eigh_raw(n: usize, data: &[Self]) -> (Vec<f64>, Vec<Self>) {
        nalg::eigh(n, data)
    }
}

impl Scalar for Complex64 {
    const KIND: BackendKind = BackendKind::FloatComplex;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_u64(n: u64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
    fn is_positive(&self, tol: f64) -> bool {
        self.im.abs() <= tol && self.re >= -tol
    }
    fn to_json(&self) -> Value {
        json!({"re": self.re, "im": self.im})
    }
    fn from_json(v: &Value) -> Result<Self> {
        let part = |k: &str| {
            v.get(k)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Json(format!("complex needs numeric `{k}`: {v}")))
        };
        Ok(Complex64::new(part("re")?, part("im")?))
    }
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }
}

impl Ring for Complex64 {
    fn neg(&self) -> Self {
        -*self
    }
}

impl Field for Complex64 {
    fn inv(&self) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| Complex64::new(1.0, 0.0) / *self)
    }
}

impl FloatScalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn to_c64(self) -> Complex64 {
        self
    }
    fn re(self) -> f64 {
        self.re
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let (a, b) = normal_pair(rng);
        Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }
    fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
    }
    fn svd_raw(rows: usize, cols: usize, data: &[Self]) -> (Vec<Self>, Vec<f64>, Vec<Self>) {
        nalg::svd(rows, cols, data)
    }
    fn eigh_raw(n: usize, data: &[Self]) -> (Vec<f64>, Vec<Self>) {
        nalg::eigh(n, data)
    }
}
