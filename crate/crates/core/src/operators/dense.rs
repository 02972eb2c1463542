//! Dense complex matrices and rank-revealing decompositions.
//!
//! Every numerical rank decision in the crate goes through [`rank_of`]: a
//! singular value counts when it exceeds `tol * sigma_max` (or `tol` for the
//! zero matrix). Kernel and cokernel bases use the same cut so that their
//! column counts always agree with the rank.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

use serde::{Serialize, Serializer};

pub const DEFAULT_TOL: f64 = 1e-9;

/// A dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

// Rows of `[re, im]` pairs.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl ComplexMatrix {
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(ComplexMatrix(m))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(rows.len(), cols, &flat)
    }

    /// Real matrix literal, mostly for tests and examples.
    ///
    /// Panics on ragged or non-finite input.
    pub fn real(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows).expect("well-formed real matrix literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        ComplexMatrix(m)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn entries_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols() != rhs.rows() {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(ComplexMatrix(&self.0 * &rhs.0))
    }

    pub fn scale(&self, c: Complex64) -> ComplexMatrix {
        ComplexMatrix(self.0.map(|z| z * c))
    }

    /// `self - lambda * I`; requires a square matrix.
    pub fn shifted(&self, lambda: Complex64) -> ComplexMatrix {
        debug_assert!(self.is_square());
        let mut m = self.0.clone();
        for i in 0..m.nrows().min(m.ncols()) {
            m[(i, i)] -= lambda;
        }
        ComplexMatrix(m)
    }

    /// Leading `cols` columns.
    pub fn leading_columns(&self, cols: usize) -> ComplexMatrix {
        ComplexMatrix(self.0.columns(0, cols.min(self.cols())).into_owned())
    }

    /// Spectral norm.
    pub fn norm(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl From<DMatrix<Complex64>> for ComplexMatrix {
    fn from(m: DMatrix<Complex64>) -> Self {
        ComplexMatrix(m)
    }
}

fn check_tol(tol: f64) {
    assert!(tol > 0.0 && tol.is_finite(), "rank tolerance must be positive, got {tol}");
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.0.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Smallest singular value over the column space: `min ||Mx|| / ||x||`.
///
/// Zero when the matrix has more columns than rows.
pub fn sigma_min(m: &ComplexMatrix) -> f64 {
    if m.cols() == 0 {
        return f64::INFINITY;
    }
    if m.rows() < m.cols() {
        return 0.0;
    }
    singular_values(m).last().copied().unwrap_or(0.0)
}

fn rank_threshold(sigma_max: f64, tol: f64) -> f64 {
    if sigma_max > 0.0 {
        tol * sigma_max
    } else {
        tol
    }
}

/// Number of singular values strictly above `tol * sigma_max`.
///
/// Panics if `tol` is not a positive finite number.
pub fn rank_of(m: &ComplexMatrix, tol: f64) -> usize {
    check_tol(tol);
    let sv = singular_values(m);
    let cut = rank_threshold(sv.first().copied().unwrap_or(0.0), tol);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Orthonormal basis of the numerical kernel, one vector per column.
///
/// Column count is `cols(m) - rank_of(m, tol)`. Column order and phases are
/// not part of the contract.
pub fn kernel_basis(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    check_tol(tol);
    let (rows, cols) = m.shape();
    if cols == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    if rows == 0 {
        return ComplexMatrix::identity(cols);
    }
    // Pad with zero rows so the SVD returns a full right factor.
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(&m.0);
        p
    } else {
        m.0.clone()
    };
    let svd = padded.svd(false, true);
    let v = svd.v_t.expect("right singular vectors requested").adjoint();
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rank_threshold(sigma_max, tol);
    select_columns(&v, svd.singular_values.iter().map(|&s| s <= cut))
}

/// Orthonormal basis of the orthogonal complement of the numerical range.
///
/// Column count is `rows(m) - rank_of(m, tol)`.
pub fn cokernel_basis(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    check_tol(tol);
    let (rows, cols) = m.shape();
    if rows == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    if cols == 0 {
        return ComplexMatrix::identity(rows);
    }
    // Pad with zero columns so the SVD returns a full left factor.
    let padded = if cols < rows {
        let mut p = DMatrix::zeros(rows, rows);
        p.view_mut((0, 0), (rows, cols)).copy_from(&m.0);
        p
    } else {
        m.0.clone()
    };
    let svd = padded.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rank_threshold(sigma_max, tol);
    select_columns(&u, svd.singular_values.iter().map(|&s| s <= cut))
}

fn select_columns(basis: &DMatrix<Complex64>, keep: impl Iterator<Item = bool>) -> ComplexMatrix {
    let picked: Vec<usize> = keep.enumerate().filter(|(_, k)| *k).map(|(i, _)| i).collect();
    let mut out = DMatrix::zeros(basis.nrows(), picked.len());
    for (dst, &src) in picked.iter().enumerate() {
        out.set_column(dst, &basis.column(src));
    }
    ComplexMatrix(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn orthonormality_error(q: &ComplexMatrix) -> f64 {
        let gram = q.adjoint().matmul(q).unwrap();
        gram.max_abs_diff(&ComplexMatrix::identity(q.cols()))
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of(&ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-9), 1);
        assert_eq!(rank_of(&ComplexMatrix::zeros(3, 3), 1e-9), 0);
        // second row is twice the first: every 2x2 minor vanishes
        let m = ComplexMatrix::real(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let minor = m.get(0, a) * m.get(1, b) - m.get(0, b) * m.get(1, a);
            assert!(minor.norm() < 1e-15);
        }
        assert_eq!(rank_of(&m, 1e-9), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-9);
        assert_eq!(k.shape(), (2, 1));
        assert!(k.get(0, 0).norm() < 1e-12);
        assert!((k.get(1, 0).norm() - 1.0).abs() < 1e-12);

        assert_eq!(kernel_basis(&ComplexMatrix::identity(3), 1e-9).shape(), (3, 0));

        // [[1,1],[1,1]] v = 0 forces v_0 = -v_1.
        let k = kernel_basis(&ComplexMatrix::real(&[&[1.0, 1.0], &[1.0, 1.0]]), 1e-9);
        assert_eq!(k.shape(), (2, 1));
        let phase = k.get(0, 0) / k.get(0, 0).norm();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((k.get(0, 0) / phase - c(s, 0.0)).norm() < 1e-12);
        assert!((k.get(1, 0) / phase - c(-s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cokernel_examples() {
        let q = cokernel_basis(&ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-9);
        assert_eq!(q.shape(), (2, 1));
        assert!((q.get(1, 0).norm() - 1.0).abs() < 1e-12);

        assert_eq!(cokernel_basis(&ComplexMatrix::identity(2), 1e-9).shape(), (2, 0));

        // range of [[0,0],[1,0]] is span{e_1}; complement is span{e_0}
        let q = cokernel_basis(&ComplexMatrix::real(&[&[0.0, 0.0], &[1.0, 0.0]]), 1e-9);
        assert_eq!(q.shape(), (2, 1));
        assert!((q.get(0, 0).norm() - 1.0).abs() < 1e-12);
        assert!(q.get(1, 0).norm() < 1e-12);
    }

    #[test]
    fn rectangular_bases_have_consistent_counts() {
        let wide = ComplexMatrix::real(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
        let k = kernel_basis(&wide, 1e-9);
        let q = cokernel_basis(&wide, 1e-9);
        assert_eq!(k.shape(), (3, 2));
        assert_eq!(q.shape(), (2, 1));
        assert!(orthonormality_error(&k) < 1e-12);
        assert!(wide.matmul(&k).unwrap().frobenius_norm() < 1e-12);
        assert!(wide.adjoint().matmul(&q).unwrap().frobenius_norm() < 1e-12);

        let tall = wide.adjoint();
        assert_eq!(kernel_basis(&tall, 1e-9).shape(), (2, 1));
        assert_eq!(cokernel_basis(&tall, 1e-9).shape(), (3, 2));
    }

    #[test]
    fn empty_shapes() {
        assert_eq!(rank_of(&ComplexMatrix::zeros(0, 3), 1e-9), 0);
        assert_eq!(kernel_basis(&ComplexMatrix::zeros(0, 3), 1e-9).shape(), (3, 3));
        assert_eq!(cokernel_basis(&ComplexMatrix::zeros(0, 3), 1e-9).shape(), (0, 0));
        assert_eq!(kernel_basis(&ComplexMatrix::zeros(2, 0), 1e-9).shape(), (0, 0));
        assert_eq!(cokernel_basis(&ComplexMatrix::zeros(2, 0), 1e-9).shape(), (2, 2));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let bad = ComplexMatrix::from_row_major(1, 1, &[c(f64::NAN, 0.0)]);
        assert!(matches!(bad, Err(Error::InvalidInput(_))));
        let ragged = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![]]);
        assert!(matches!(ragged, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn sigma_min_of_wide_matrix_is_zero() {
        assert_eq!(sigma_min(&ComplexMatrix::identity(2).leading_columns(2)), 1.0);
        assert_eq!(sigma_min(&ComplexMatrix::zeros(1, 2)), 0.0);
    }

    #[test]
    #[should_panic(expected = "rank tolerance must be positive")]
    fn zero_tolerance_panics() {
        rank_of(&ComplexMatrix::identity(2), 0.0);
    }
}
