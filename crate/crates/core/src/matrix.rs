//! Dense matrices over a scalar backend.
//!
//! A morphism `n → m` in `Mat_S` is an `m × n` matrix; column `j` is the image
//! of basis state `j`. Storage is row-major.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalars::{Field, FloatScalar, Ring, Scalar};

#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Mat<S> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diag(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { S::zero() })
    }

    /// Column vector `|i⟩` in dimension `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        Self::from_fn(n, 1, |r, _| if r == i { S::one() } else { S::zero() })
    }

    pub fn column(entries: Vec<S>) -> Self {
        Mat {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    pub fn row(entries: Vec<S>) -> Self {
        Mat {
            rows: 1,
            cols: entries.len(),
            data: entries,
        }
    }

    pub fn scalar(s: S) -> Self {
        Mat {
            rows: 1,
            cols: 1,
            data: vec![s],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// `self ∘ other`, i.e. the matrix product `self · other`.
    pub fn compose(&self, other: &Mat<S>) -> Result<Mat<S>> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Mat<S>) -> Mat<S> {
        let mut out = vec![S::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    let slot = &mut out[i * other.cols + j];
                    *slot = slot.add(&a.mul(b));
                }
            }
        }
        Mat {
            rows: self.rows,
            cols: other.cols,
            data: out,
        }
    }

    /// Kronecker product; the left factor indexes the outer block.
    pub fn kron(&self, other: &Mat<S>) -> Mat<S> {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Mat::from_fn(r, c, |i, j| {
            let (i1, i2) = (i / other.rows, i % other.rows);
            let (j1, j2) = (j / other.cols, j % other.cols);
            self.get(i1, j1).mul(other.get(i2, j2))
        })
    }

    pub fn transpose(&self) -> Mat<S> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Mat<S> {
        self.map(|x| x.conj())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Mat<S> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Mat<S>) -> Result<Mat<S>> {
        self.same_shape(other, "add")?;
        Ok(self.zip(other, |a, b| a.add(b)))
    }

    pub fn scale(&self, s: &S) -> Mat<S> {
        self.map(|x| s.mul(x))
    }

    pub(crate) fn zip(&self, other: &Mat<S>, f: impl Fn(&S, &S) -> S) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn same_shape(&self, other: &Mat<S>, op: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::shape(format!(
                "{op}: {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Block diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Mat<S>) -> Mat<S> {
        let mut out = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    pub fn paste(&mut self, r0: usize, c0: usize, block: &Mat<S>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat<S> {
        Mat::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat<S> {
        Mat::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn hstack(&self, other: &Mat<S>) -> Result<Mat<S>> {
        if self.rows != other.rows {
            return Err(Error::shape("hstack row mismatch"));
        }
        Ok(Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, other: &Mat<S>) -> Result<Mat<S>> {
        if self.cols != other.cols {
            return Err(Error::shape("vstack column mismatch"));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Symmetry `σ_{a,b} : a ⊗ b → b ⊗ a`.
    pub fn swap(a: usize, b: usize) -> Mat<S> {
        let n = a * b;
        Mat::from_fn(n, n, |row, col| {
            let (i, j) = (col / b, col % b);
            if row == j * a + i {
                S::one()
            } else {
                S::zero()
            }
        })
    }

    /// Permutation matrix sending basis state `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Mat<S> {
        let n = perm.len();
        Mat::from_fn(n, n, |i, j| if perm[j] == i { S::one() } else { S::zero() })
    }

    /// The all-ones row `n → 1`.
    pub fn discard(n: usize) -> Mat<S> {
        Mat::row(vec![S::one(); n])
    }

    /// `Σ_i |ii⟩ : 1 → n²`.
    pub fn cup(n: usize) -> Mat<S> {
        Mat::from_fn(n * n, 1, |r, _| if r / n == r % n { S::one() } else { S::zero() })
    }

    /// `Σ_i ⟨ii| : n² → 1`.
    pub fn cap(n: usize) -> Mat<S> {
        Mat::cup(n).transpose()
    }

    /// Largest entrywise distance; infinite on shape mismatch.
    pub fn deviation(&self, other: &Mat<S>) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Exact equality on exact backends; relative-plus-absolute on floats.
    pub fn approx_eq(&self, other: &Mat<S>, tol: f64) -> bool {
        if self.shape() != other.shape() {
            return false;
        }
        if !S::KIND.is_float() {
            return self == other;
        }
        let scale = 1.0 + self.max_magnitude().max(other.max_magnitude());
        self.deviation(other) <= tol * scale
    }

    /// Deviation divided by `1 + max magnitude`, matching [`Mat::approx_eq`].
    pub fn relative_deviation(&self, other: &Mat<S>) -> f64 {
        if !S::KIND.is_float() {
            return if self == other { 0.0 } else { f64::INFINITY };
        }
        self.deviation(other) / (1.0 + self.max_magnitude().max(other.max_magnitude()))
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.dagger(), tol)
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat<S> {
        Mat::from_fn(rows, cols, |_, _| S::sample(rng))
    }

    /// `{"rows", "cols", "entries": [[...], ...]}` with scalars in their JSON encoding.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.rows)
            .map(|i| Value::Array((0..self.cols).map(|j| self.get(i, j).to_json()).collect()))
            .collect();
        json!({"rows": self.rows, "cols": self.cols, "entries": entries})
    }

    pub fn from_json(v: &Value) -> Result<Mat<S>> {
        let dim = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Json(format!("matrix needs `{k}`")))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("matrix needs `entries`".into()))?;
        let mut data = Vec::with_capacity(rows * cols);
        for row in entries {
            for x in row.as_array().ok_or_else(|| Error::Json("row is not an array".into()))? {
                data.push(S::from_json(x)?);
            }
        }
        Mat::from_vec(rows, cols, data)
    }
}

impl<S: Ring> Mat<S> {
    pub fn sub(&self, other: &Mat<S>) -> Result<Mat<S>> {
        self.same_shape(other, "sub")?;
        Ok(self.zip(other, |a, b| a.sub(b)))
    }

    pub fn neg(&self) -> Mat<S> {
        self.map(|x| x.neg())
    }
}

impl<S: Field> Mat<S> {
    pub fn scale_div(&self, s: &S) -> Option<Mat<S>> {
        let inv = s.inv()?;
        Some(self.scale(&inv))
    }
}

impl<S: FloatScalar> Mat<S> {
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt()
    }

    /// Entries i.i.d. standard normal.
    pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat<S> {
        Mat::from_fn(rows, cols, |_, _| S::normal(rng))
    }

    pub fn to_c64(&self) -> Mat<crate::scalars::Complex64> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_c64()).collect(),
        }
    }

    pub fn from_c64(m: &Mat<crate::scalars::Complex64>) -> Mat<S> {
        Mat {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| S::from_c64(*z)).collect(),
        }
    }

    /// `‖self - other‖_F`.
    pub fn distance_fro(&self, other: &Mat<S>) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.sub(b).modulus().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rat;

    fn q(rows: usize, cols: usize, xs: &[i64]) -> Mat<Rat> {
        Mat::from_vec(rows, cols, xs.iter().map(|&x| Rat::frac(x, 1)).collect()).unwrap()
    }

    #[test]
    fn compose_example() {
        let g = q(2, 2, &[1, 0, 0, 2]);
        let f = q(2, 1, &[1, 1]);
        assert_eq!(g.compose(&f).unwrap(), q(2, 1, &[1, 2]));
        assert!(f.compose(&g).is_err());
    }

    #[test]
    fn kron_of_identities_and_scalars() {
        assert_eq!(Mat::<Rat>::identity(2).kron(&Mat::identity(3)), Mat::identity(6));
        let s = q(1, 1, &[2]).kron(&q(1, 1, &[3]));
        assert_eq!(s, q(1, 1, &[6]));
    }

    #[test]
    fn cup_and_snake() {
        assert_eq!(Mat::<Rat>::cup(2), q(4, 1, &[1, 0, 0, 1]));
        assert_eq!(Mat::<Rat>::cup(1), q(1, 1, &[1]));
        let n = 3;
        let id = Mat::<Rat>::identity(n);
        let lhs = id
            .kron(&Mat::cap(n))
            .compose(&Mat::cup(n).kron(&id))
            .unwrap();
        assert_eq!(lhs, id);
    }

    #[test]
    fn swap_is_involutive_and_moves_kron_factors() {
        let s = Mat::<Rat>::swap(2, 3);
        assert_eq!(Mat::<Rat>::swap(3, 2).compose(&s).unwrap(), Mat::identity(6));
        let a = q(2, 1, &[1, 2]);
        let b = q(3, 1, &[3, 4, 5]);
        assert_eq!(s.compose(&a.kron(&b)).unwrap(), b.kron(&a));
    }

    #[test]
    fn json_roundtrip() {
        let m = q(2, 3, &[1, -2, 3, 0, 5, 7]);
        assert_eq!(Mat::<Rat>::from_json(&m.to_json()).unwrap(), m);
    }
}
