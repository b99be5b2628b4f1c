//! Small dense linear algebra: vectors, symmetric and diagonal matrices.
//!
//! Problems handled by this crate are a few dozen dimensions at most, so
//! everything is dense and row-major.

use std::fmt;
use std::ops::{Deref, Index};

use crate::error::{check_dim, Result};

/// Dense vector of `f64` with a fixed dimension.
#[derive(Clone, PartialEq, Default)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(elements: Vec<f64>) -> Self {
        Vector(elements)
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    pub fn filled(n: usize, value: f64) -> Self {
        Vector(vec![value; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn set(&mut self, i: usize, value: f64) {
        self.0[i] = value;
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn inf_norm(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn scale(&self, factor: f64) -> Vector {
        self.map(|v| v * factor)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vector {
        Vector(self.0.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Vector, f: impl Fn(f64, f64) -> f64) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.zip_map(other, |a, b| a - b)
    }

    /// `self + alpha * dir`
    pub fn axpy(&self, alpha: f64, dir: &Vector) -> Vector {
        self.zip_map(dir, |a, d| a + alpha * d)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl From<&[f64]> for Vector {
    fn from(v: &[f64]) -> Self {
        Vector(v.to_vec())
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(v: [f64; N]) -> Self {
        Vector(v.to_vec())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// General dense square matrix, row-major. Used for rank-one terms and
/// products that are not symmetric in general.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.n, other.n)?;
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.n, other.n)?;
        Ok(Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

/// `(outer(u, v))_ij = u_i v_j`.
pub fn outer(u: &Vector, v: &Vector) -> Result<Matrix> {
    check_dim(u.dim(), v.dim())?;
    let n = u.dim();
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.data[i * n + j] = u[i] * v[j];
        }
    }
    Ok(m)
}

/// Symmetric dense matrix. Every mutation writes both triangles, so the
/// stored matrix is exactly symmetric.
#[derive(Clone, PartialEq, Debug)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, scale: f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = scale;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = SymMatrix::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds from row slices. The upper triangle is authoritative and is
    /// mirrored into the lower one.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut m = SymMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            check_dim(n, row.len())?;
            for j in i..n {
                m.set(i, j, row[j]);
            }
        }
        Ok(m)
    }

    /// Builds from a generator evaluated on the upper triangle (`i <= j`).
    pub fn from_upper_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Symmetrizes a general matrix as `(M + Mᵀ) / 2`.
    pub fn symmetrize(m: &Matrix) -> Self {
        Self::from_upper_fn(m.dim(), |i, j| 0.5 * (m.get(i, j) + m.get(j, i)))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diagonal(&self) -> Vector {
        (0..self.n).map(|i| self.get(i, i)).collect::<Vec<_>>().into()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix { n: self.n, data: self.data.clone() }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, factor: f64) -> SymMatrix {
        SymMatrix { n: self.n, data: self.data.iter().map(|v| v * factor).collect() }
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        check_dim(self.n, other.n)?;
        Ok(SymMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.add(&other.scale(-1.0))
    }

    pub fn matvec(&self, v: &Vector) -> Result<Vector> {
        check_dim(self.n, v.dim())?;
        Ok((0..self.n)
            .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
            .collect::<Vec<f64>>()
            .into())
    }

    /// `vᵀ M v`
    pub fn quad_form(&self, v: &Vector) -> Result<f64> {
        Ok(v.dot(&self.matvec(v)?))
    }

    /// Adds `alpha * u uᵀ`.
    pub fn add_outer(&mut self, alpha: f64, u: &Vector) -> Result<()> {
        check_dim(self.n, u.dim())?;
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.get(i, j) + alpha * u[i] * u[j];
                self.set(i, j, v);
            }
        }
        Ok(())
    }

    /// Adds `alpha * (u vᵀ + v uᵀ)`.
    pub fn add_sym_outer(&mut self, alpha: f64, u: &Vector, v: &Vector) -> Result<()> {
        check_dim(self.n, u.dim())?;
        check_dim(self.n, v.dim())?;
        for i in 0..self.n {
            for j in i..self.n {
                let w = self.get(i, j) + alpha * (u[i] * v[j] + v[i] * u[j]);
                self.set(i, j, w);
            }
        }
        Ok(())
    }

    /// True iff a Cholesky factorization succeeds with every pivot > 0.
    pub fn is_spd(&self) -> bool {
        self.cholesky().is_some()
    }

    /// Lower-triangular Cholesky factor, row-major, or `None` when a pivot
    /// is not strictly positive.
    pub fn cholesky(&self) -> Option<Vec<f64>> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Some(l)
    }

    /// Positive semi-definiteness via a diagonally shifted Cholesky; the
    /// shift is relative to the matrix scale.
    pub fn is_psd(&self, rel_tol: f64) -> bool {
        let scale = self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut shifted = self.clone();
        for i in 0..self.n {
            let v = shifted.get(i, i) + rel_tol * scale;
            shifted.set(i, i, v);
        }
        shifted.is_spd()
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

/// Loewner ordering test: `A ≤ B` iff `B − A` is positive semi-definite.
pub fn is_loewner_leq(a: &SymMatrix, b: &SymMatrix) -> Result<bool> {
    Ok(b.sub(a)?.is_psd(1e-12))
}

/// Diagonal matrix stored as its entries.
#[derive(Clone, PartialEq, Debug)]
pub struct DiagMatrix(Vec<f64>);

impl DiagMatrix {
    pub fn new(entries: Vec<f64>) -> Self {
        DiagMatrix(entries)
    }

    pub fn identity(n: usize) -> Self {
        DiagMatrix(vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn matvec(&self, v: &Vector) -> Result<Vector> {
        check_dim(self.dim(), v.dim())?;
        Ok(self.0.iter().zip(v.iter()).map(|(d, x)| d * x).collect::<Vec<f64>>().into())
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl FromIterator<f64> for Vector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}
