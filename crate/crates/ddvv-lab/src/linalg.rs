//! Dense row-major matrices and the handful of decompositions the
//! laboratory needs.
//!
//! Three types carry all numerical data in this crate:
//!
//! * [`Matrix`] — a general rectangular matrix of finite `f64` entries.
//! * [`SymMatrix`] — a square matrix kept *exactly* symmetric: mirrored
//!   entries are bitwise equal by construction, so identities that depend
//!   on symmetry (antisymmetry of commutators, reality of spectra) hold to
//!   the last ulp rather than "up to rounding".
//! * [`MatrixTuple`] — a nonempty list of symmetric matrices of a common
//!   size, the basic object both commutator inequalities quantify over.
//!
//! Eigendecomposition and SVD are delegated to `nalgebra`, then
//! post-processed into a deterministic normal form: values sorted in
//! descending order (stable under ties) and each eigenvector scaled so its
//! first component of magnitude above `1e-12` is positive. Determinants are
//! computed by a local partially-pivoted LU so that determinant identities
//! can be cross-checked against closed forms without sharing code paths.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Magnitude below which a leading eigenvector component is considered
/// zero when fixing signs.
const SIGN_EPS: f64 = 1e-12;

/// A dense rectangular matrix with row-major storage and finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from a row-major buffer, validating length and
    /// finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// The `rows x cols` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// The `n x n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)` at every position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows, validating that they are
    /// rectangular and finite.
    pub fn from_nested(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyMatrix {
                rows: rows.len(),
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        let cols = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::invalid(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), cols, data)
    }

    /// The matrix as nested rows, the shape used in JSON files.
    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major view of the underlying buffer.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Copy of column `j` as a plain vector. Panics if `j` is out of range.
    pub fn column(&self, j: usize) -> Vec<f64> {
        assert!(j < self.cols, "column {j} of a {}-column matrix", self.cols);
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Sum of diagonal entries. Panics if the matrix is not square.
    pub fn trace(&self) -> f64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Squared Frobenius norm.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest entry magnitude over *all* entries.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| s * v).collect(),
        }
    }

    /// Frobenius inner product `sum_ij a_ij b_ij`.
    pub fn frobenius_inner(&self, other: &Matrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.shape_mismatch("frobenius inner product", other));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Matrix product with a fixed summation order: entry `(i, j)`
    /// accumulates `a[i][k] * b[k][j]` for `k` ascending. The fixed order is
    /// what makes commutators of symmetric matrices antisymmetric *exactly*,
    /// not just up to rounding.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(self.shape_mismatch("matrix product", other));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0.0;
                for k in 0..self.cols {
                    acc += self.data[i * self.cols + k] * other.data[k * other.cols + j];
                }
                out.data[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// Commutator `[a, b] = ab - ba`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "commutator",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        Ok(&ab - &ba)
    }

    /// Determinant by partially-pivoted Gaussian elimination.
    ///
    /// Deliberately *not* routed through `nalgebra` or through any spectral
    /// decomposition: determinant identities elsewhere in the crate are
    /// verified by comparing this elimination against closed-form products,
    /// and the comparison is only meaningful if the two sides share nothing.
    pub fn determinant(&self) -> f64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_abs = a[k * n + k].abs();
            for i in (k + 1)..n {
                let v = a[i * n + k].abs();
                if v > pivot_abs {
                    pivot_abs = v;
                    pivot_row = i;
                }
            }
            if pivot_abs == 0.0 {
                return 0.0;
            }
            if pivot_row != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            for i in (k + 1)..n {
                let factor = a[i * n + k] / pivot;
                for j in k..n {
                    a[i * n + j] -= factor * a[k * n + j];
                }
            }
        }
        det
    }

    /// Singular value decomposition `self = u * diag(s) * vt` with singular
    /// values sorted in descending order and a deterministic sign choice:
    /// the first component of each left singular vector with magnitude above
    /// `1e-12` is positive (the matching row of `vt` is flipped with it).
    pub fn svd(&self) -> Result<Svd> {
        let dm = DMatrix::from_row_slice(self.rows, self.cols, &self.data);
        let svd = dm.svd(true, true);
        let u_na = svd.u.expect("svd requested u");
        let vt_na = svd.v_t.expect("svd requested v_t");
        let k = svd.singular_values.len();

        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| {
            svd.singular_values[b]
                .partial_cmp(&svd.singular_values[a])
                .expect("singular values are finite")
        });

        let mut singular_values = Vec::with_capacity(k);
        let mut u = Matrix::zeros(self.rows, k);
        let mut vt = Matrix::zeros(k, self.cols);
        for (new, &old) in order.iter().enumerate() {
            singular_values.push(svd.singular_values[old]);
            let col: Vec<f64> = (0..self.rows).map(|r| u_na[(r, old)]).collect();
            let flip = sign_fix(&col);
            for r in 0..self.rows {
                u[(r, new)] = flip * col[r];
            }
            for c in 0..self.cols {
                vt[(new, c)] = flip * vt_na[(old, c)];
            }
        }
        Ok(Svd {
            u,
            singular_values,
            vt,
        })
    }

    fn shape_mismatch(&self, op: &'static str, other: &Matrix) -> Error {
        Error::ShapeMismatch {
            op,
            left: format!("{}x{}", self.rows, self.cols),
            right: format!("{}x{}", other.rows, other.cols),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "matrix addition shape mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "matrix subtraction shape mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    /// Panicking convenience wrapper around [`Matrix::matmul`] for code that
    /// has already validated shapes.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>12.6}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Result of [`Matrix::svd`].
#[derive(Clone, Debug)]
pub struct Svd {
    /// Left singular vectors, one per column.
    pub u: Matrix,
    /// Singular values in descending order.
    pub singular_values: Vec<f64>,
    /// Right singular vectors, one per *row*.
    pub vt: Matrix,
}

impl Svd {
    /// Recomposes `u * diag(s) * vt`, mostly for residual checks.
    pub fn reconstruct(&self) -> Matrix {
        let k = self.singular_values.len();
        let mut us = Matrix::zeros(self.u.n_rows(), k);
        for j in 0..k {
            for i in 0..self.u.n_rows() {
                us[(i, j)] = self.u[(i, j)] * self.singular_values[j];
            }
        }
        &us * &self.vt
    }
}

/// A square matrix that is symmetric *exactly*: the entry at `(i, j)` and
/// the entry at `(j, i)` are bitwise equal.
///
/// Construction symmetrizes its input by averaging mirrored entries and
/// writing the same value to both positions, so downstream algebra can rely
/// on `a[(i, j)] == a[(j, i)]` as an identity of floats, not an
/// approximation.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    inner: Matrix,
}

impl SymMatrix {
    /// Symmetrizes a square matrix: each mirrored pair is replaced by its
    /// average, stored identically on both sides of the diagonal.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                op: "symmetric matrix",
                rows: m.n_rows(),
                cols: m.n_cols(),
            });
        }
        let n = m.n_rows();
        let mut inner = m.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (inner[(i, j)] + inner[(j, i)]);
                inner[(i, j)] = avg;
                inner[(j, i)] = avg;
            }
        }
        Ok(Self { inner })
    }

    /// Builds from a row-major buffer (validated, then symmetrized).
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        let m = Matrix::new(n, n, data)?;
        Self::from_matrix(&m)
    }

    /// Builds from nested rows (validated, then symmetrized).
    pub fn from_nested(rows: &[Vec<f64>]) -> Result<Self> {
        let m = Matrix::from_nested(rows)?;
        Self::from_matrix(&m)
    }

    /// Diagonal matrix with the given entries.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::NonFinite { row: i, col: i });
            }
            m[(i, i)] = d;
        }
        Ok(Self { inner: m })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: Matrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.n_rows()
    }

    /// Read-only view as a general matrix.
    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix {
        self.inner
    }

    pub fn data(&self) -> &[f64] {
        self.inner.data()
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        self.inner.to_nested()
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner.norm_sq()
    }

    pub fn norm(&self) -> f64 {
        self.inner.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.inner[(i, i)]).collect()
    }

    /// Largest magnitude among strictly off-diagonal entries.
    pub fn max_off_diagonal_abs(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc = acc.max(self.inner[(i, j)].abs());
                }
            }
        }
        acc
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix {
            inner: self.inner.scale(s),
        }
    }

    /// In-place `self += coeff * other`. Preserves exact symmetry because
    /// mirrored entries undergo identical arithmetic.
    pub(crate) fn add_scaled(&mut self, coeff: f64, other: &SymMatrix) {
        debug_assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                self.inner[(i, j)] += coeff * other.inner[(i, j)];
            }
        }
    }

    pub fn frobenius_inner(&self, other: &SymMatrix) -> Result<f64> {
        self.inner.frobenius_inner(&other.inner)
    }

    /// Commutator `[a, b]` of two symmetric matrices. The result is
    /// antisymmetric exactly (entry `(j, i)` equals `-` entry `(i, j)` as
    /// floats) because the two products traverse bitwise-identical terms.
    pub fn commutator(&self, other: &SymMatrix) -> Result<Matrix> {
        self.inner.commutator(&other.inner)
    }

    /// Removes the trace: `self - (tr(self)/n) * I`.
    pub fn traceless_project(&self) -> SymMatrix {
        let n = self.dim();
        let shift = self.trace() / n as f64;
        let mut out = self.clone();
        for i in 0..n {
            out.inner[(i, i)] -= shift;
        }
        out
    }

    /// The matrix with its diagonal zeroed out.
    pub fn off_diagonal_part(&self) -> SymMatrix {
        let mut out = self.clone();
        for i in 0..self.dim() {
            out.inner[(i, i)] = 0.0;
        }
        out
    }

    /// Strictly upper-triangular entries in lexicographic order
    /// `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
    pub fn off_diagonal_vector(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    /// Eigendecomposition `self = v * diag(values) * v^T` with eigenvalues
    /// in descending order (stable under ties) and each eigenvector's first
    /// component of magnitude above `1e-12` made positive.
    pub fn eigh(&self) -> SymEigen {
        let n = self.dim();
        let dm = DMatrix::from_row_slice(n, n, self.data());
        let se = dm.symmetric_eigen();

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            se.eigenvalues[b]
                .partial_cmp(&se.eigenvalues[a])
                .expect("eigenvalues of a finite symmetric matrix are finite")
        });

        let mut values = Vec::with_capacity(n);
        let mut vectors = Matrix::zeros(n, n);
        for (new, &old) in order.iter().enumerate() {
            values.push(se.eigenvalues[old]);
            let col: Vec<f64> = (0..n).map(|r| se.eigenvectors[(r, old)]).collect();
            let flip = sign_fix(&col);
            for r in 0..n {
                vectors[(r, new)] = flip * col[r];
            }
        }
        SymEigen { values, vectors }
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.inner[idx]
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;

    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;

    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

/// Result of [`SymMatrix::eigh`].
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, one per column, aligned with `values`.
    pub vectors: Matrix,
}

/// A nonempty tuple `(A_1, ..., A_m)` of symmetric matrices sharing one
/// dimension — the configuration space of the commutator inequalities.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    matrices: Vec<SymMatrix>,
}

impl MatrixTuple {
    /// Validates that the list is nonempty and the dimensions agree.
    pub fn new(matrices: Vec<SymMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::invalid("a matrix tuple must contain at least one matrix"));
        };
        let n = first.dim();
        for (r, a) in matrices.iter().enumerate() {
            if a.dim() != n {
                return Err(Error::ShapeMismatch {
                    op: "matrix tuple",
                    left: format!("matrix 0 is {n}x{n}"),
                    right: format!("matrix {r} is {0}x{0}", a.dim()),
                });
            }
        }
        Ok(Self { matrices })
    }

    /// Common matrix dimension `n`.
    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    /// Number of matrices `m`.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    /// Always false; kept for interface completeness.
    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[SymMatrix] {
        &self.matrices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SymMatrix> {
        self.matrices.iter()
    }

    /// `sum_r ||A_r||^2`, the left side of the tuple inequality before
    /// squaring.
    pub fn total_norm_sq(&self) -> f64 {
        self.matrices.iter().map(SymMatrix::norm_sq).sum()
    }

    pub fn scale(&self, s: f64) -> MatrixTuple {
        MatrixTuple {
            matrices: self.matrices.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        self.matrices.iter().map(SymMatrix::to_nested).collect()
    }
}

impl Index<usize> for MatrixTuple {
    type Output = SymMatrix;

    fn index(&self, r: usize) -> &SymMatrix {
        &self.matrices[r]
    }
}

impl<'a> IntoIterator for &'a MatrixTuple {
    type Item = &'a SymMatrix;
    type IntoIter = std::slice::Iter<'a, SymMatrix>;

    fn into_iter(self) -> Self::IntoIter {
        self.matrices.iter()
    }
}

/// `+1` or `-1` so that the first component with magnitude above
/// [`SIGN_EPS`] becomes positive; `+1` for the (near-)zero vector.
fn sign_fix(col: &[f64]) -> f64 {
    for &v in col {
        if v.abs() > SIGN_EPS {
            return if v < 0.0 { -1.0 } else { 1.0 };
        }
    }
    1.0
}
