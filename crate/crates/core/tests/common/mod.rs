//! Reference computations that avoid the library's SVD-based routines.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use trion_core::{CompletionTuple, ComplexMatrix, DiagonalTuple};

pub const TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Rank from the diagonal of a column-pivoted QR factorization.
pub fn qr_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let r = m.clone().col_piv_qr().r();
    let diag: Vec<f64> = (0..r.nrows().min(r.ncols())).map(|i| r[(i, i)].norm()).collect();
    let lead = diag.iter().cloned().fold(0.0, f64::max);
    if lead == 0.0 {
        return 0;
    }
    diag.iter().filter(|&&x| x > tol * lead).count()
}

/// `(nullity, deficiency)` of a matrix.
pub fn defects(m: &DMatrix<Complex64>) -> (usize, usize) {
    let r = qr_rank(m, TOL);
    (m.ncols() - r, m.nrows() - r)
}

pub fn dense_blocks(d: &DiagonalTuple) -> Vec<DMatrix<Complex64>> {
    d.entries().iter().map(|h| h.as_dense().expect("dense tuple").as_dmatrix().clone()).collect()
}

/// Block upper triangular matrix placed entry by entry.
pub fn assemble_by_hand(d: &DiagonalTuple, a: &CompletionTuple) -> DMatrix<Complex64> {
    let blocks = dense_blocks(d);
    let mut off = vec![0];
    for b in &blocks {
        off.push(off.last().unwrap() + b.nrows());
    }
    let total = *off.last().unwrap();
    let mut t = DMatrix::zeros(total, total);
    for (k, b) in blocks.iter().enumerate() {
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                t[(off[k] + i, off[k] + j)] = b[(i, j)];
            }
        }
    }
    for ((bi, bj), m) in a.blocks() {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                t[(off[bi - 1] + i, off[bj - 1] + j)] = m.get(i, j);
            }
        }
    }
    t
}

pub fn shift(m: &DMatrix<Complex64>, lambda: Complex64) -> DMatrix<Complex64> {
    let mut out = m.clone();
    for i in 0..m.nrows().min(m.ncols()) {
        out[(i, i)] -= lambda;
    }
    out
}

pub fn shifted_tuple(d: &DiagonalTuple, lambda: Complex64) -> DiagonalTuple {
    DiagonalTuple::dense(dense_blocks(d).iter().map(|b| ComplexMatrix::from(shift(b, lambda))).collect()).unwrap()
}

/// Smallest singular value from the Hermitian eigenproblem of `T^H T`.
pub fn gram_sigma_min(t: &DMatrix<Complex64>) -> f64 {
    let g = t.adjoint() * t;
    g.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0).sqrt()
}

/// Singular at `tol` relative to the largest pivot.
pub fn is_singular(t: &DMatrix<Complex64>) -> bool {
    qr_rank(t, TOL) < t.ncols().max(t.nrows())
}
