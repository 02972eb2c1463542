//! Diagonal tuples, completions and the superdiagonal construction.
//!
//! Block indices are 1-based throughout: block `(i, j)` with `i < j` sits in
//! block row `i` and block column `j` of the assembled matrix.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extmath::ExtCard;
use crate::operators::{cokernel_basis, kernel_basis, rank_of, ComplexMatrix, OperatorHandle};

/// The prescribed diagonal `D_1, ..., D_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalTuple {
    entries: Vec<OperatorHandle>,
}

impl DiagonalTuple {
    /// Requires `n >= 2` entries sharing one backend.
    pub fn new(entries: Vec<OperatorHandle>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a diagonal tuple needs at least 2 entries, got {}",
                entries.len()
            )));
        }
        let dense = entries[0].is_dense();
        if entries.iter().any(|h| h.is_dense() != dense) {
            return Err(Error::InvalidInput("diagonal entries must all be dense or all structured".into()));
        }
        Ok(DiagonalTuple { entries })
    }

    /// Convenience constructor from square matrices.
    pub fn dense(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(blocks.into_iter().map(OperatorHandle::dense).collect::<Result<_>>()?)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_dense(&self) -> bool {
        self.entries[0].is_dense()
    }

    pub fn entries(&self) -> &[OperatorHandle] {
        &self.entries
    }

    /// Entry `k`, 1-based.
    pub fn entry(&self, k: usize) -> &OperatorHandle {
        &self.entries[k - 1]
    }

    pub fn dims(&self) -> Vec<ExtCard> {
        self.entries.iter().map(OperatorHandle::space_dim).collect()
    }

    /// The adjoint tuple in reverse order, the diagonal of the adjoint
    /// matrix after reordering the blocks.
    pub fn reversed_adjoint(&self) -> DiagonalTuple {
        DiagonalTuple { entries: self.entries.iter().rev().map(crate::operators::adjoint).collect() }
    }

    pub(crate) fn dense_blocks(&self) -> Result<Vec<&ComplexMatrix>> {
        self.entries.iter().map(|h| h.as_dense().ok_or(Error::NotDense)).collect()
    }

    fn dense_sizes(&self) -> Result<Vec<usize>> {
        Ok(self.dense_blocks()?.iter().map(|m| m.rows()).collect())
    }
}

/// The free blocks `A_ij`, `i < j`; absent blocks are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompletionTuple {
    blocks: BTreeMap<(usize, usize), ComplexMatrix>,
}

#[derive(Serialize)]
struct BlockEntry<'a> {
    row: usize,
    col: usize,
    matrix: &'a ComplexMatrix,
}

// A list of `{row, col, matrix}` records in block order.
impl Serialize for CompletionTuple {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.blocks.iter().map(|(&(row, col), matrix)| BlockEntry { row, col, matrix }))
    }
}

impl CompletionTuple {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets block `(i, j)`; requires `1 <= i < j`.
    pub fn insert(&mut self, i: usize, j: usize, block: ComplexMatrix) -> Result<()> {
        if i == 0 || i >= j {
            return Err(Error::InvalidInput(format!("block ({i}, {j}) is not strictly upper triangular")));
        }
        self.blocks.insert((i, j), block);
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&ComplexMatrix> {
        self.blocks.get(&(i, j))
    }

    pub fn blocks(&self) -> impl Iterator<Item = ((usize, usize), &ComplexMatrix)> {
        self.blocks.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Every present block sits at `(i, i + 1)`.
    pub fn is_superdiagonal(&self) -> bool {
        self.blocks.keys().all(|&(i, j)| j == i + 1)
    }

    /// Checks block positions and shapes against a dense tuple.
    pub fn validate(&self, d: &DiagonalTuple) -> Result<()> {
        let sizes = d.dense_sizes()?;
        for (&(i, j), m) in &self.blocks {
            if j > sizes.len() {
                return Err(Error::ShapeMismatch(format!("block ({i}, {j}) outside an n = {} tuple", sizes.len())));
            }
            let want = (sizes[i - 1], sizes[j - 1]);
            if m.shape() != want {
                return Err(Error::ShapeMismatch(format!(
                    "block ({i}, {j}) is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(())
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    out.push(0);
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

/// The block upper triangular matrix with `d` on the diagonal and `a` above.
pub fn assemble(d: &DiagonalTuple, a: &CompletionTuple) -> Result<ComplexMatrix> {
    a.validate(d)?;
    let blocks = d.dense_blocks()?;
    let sizes: Vec<usize> = blocks.iter().map(|m| m.rows()).collect();
    let off = offsets(&sizes);
    let total = off[sizes.len()];
    let mut t = DMatrix::<Complex64>::zeros(total, total);
    for (k, m) in blocks.iter().enumerate() {
        t.view_mut((off[k], off[k]), (sizes[k], sizes[k])).copy_from(m.as_dmatrix());
    }
    for ((i, j), m) in a.blocks() {
        t.view_mut((off[i - 1], off[j - 1]), m.shape()).copy_from(m.as_dmatrix());
    }
    Ok(t.into())
}

/// Nullity and deficiency of each dense diagonal entry at `tol`.
pub fn dense_defects(d: &DiagonalTuple, tol: f64) -> Result<Vec<(usize, usize)>> {
    Ok(d.dense_blocks()?
        .iter()
        .map(|m| {
            let r = rank_of(m, tol);
            (m.cols() - r, m.rows() - r)
        })
        .collect())
}

/// Pairs `basis` columns with `partner` columns: returns `left * right^H`.
fn pairing(left: &ComplexMatrix, right: &ComplexMatrix) -> ComplexMatrix {
    debug_assert_eq!(left.cols(), right.cols());
    ComplexMatrix::from(left.as_dmatrix() * right.as_dmatrix().adjoint())
}

enum Mode {
    Left,
    Right,
    Invertible,
}

fn superdiagonal(d: &DiagonalTuple, tol: f64, mode: Mode) -> Result<CompletionTuple> {
    let blocks = d.dense_blocks()?;
    let defects = dense_defects(d, tol)?;
    for i in 1..blocks.len() {
        let beta_i = defects[i - 1].1;
        let alpha_next = defects[i].0;
        let (violated, index) = match mode {
            Mode::Left => (alpha_next > beta_i, i + 1),
            Mode::Right => (beta_i > alpha_next, i),
            Mode::Invertible => (alpha_next != beta_i, i),
        };
        if violated {
            return Err(Error::HypothesisViolated {
                index,
                alpha_index: i + 1,
                alpha: alpha_next.into(),
                beta_index: i,
                beta: beta_i.into(),
            });
        }
    }
    let mut out = CompletionTuple::new();
    for i in 1..blocks.len() {
        let cok = cokernel_basis(blocks[i - 1], tol);
        let ker = kernel_basis(blocks[i], tol);
        let width = match mode {
            Mode::Left => ker.cols(),
            Mode::Right | Mode::Invertible => cok.cols(),
        };
        if width == 0 {
            continue;
        }
        let block = pairing(&cok.leading_columns(width), &ker.leading_columns(width));
        out.insert(i, i + 1, block)?;
    }
    Ok(out)
}

/// Superdiagonal completion pairing each kernel of `D_{i+1}` isometrically
/// into the range complement of `D_i`.
///
/// The assembled matrix then has the nullity of `D_1`.
pub fn complete_left(d: &DiagonalTuple, tol: f64) -> Result<CompletionTuple> {
    superdiagonal(d, tol, Mode::Left)
}

/// Superdiagonal completion covering each range complement of `D_i` by part
/// of the kernel of `D_{i+1}`.
///
/// The assembled matrix then has the deficiency of `D_n`.
pub fn complete_right(d: &DiagonalTuple, tol: f64) -> Result<CompletionTuple> {
    superdiagonal(d, tol, Mode::Right)
}

/// Superdiagonal completion with unitary pairings; requires
/// `alpha(D_{i+1}) = beta(D_i)` for every `i`.
pub fn complete_invertible(d: &DiagonalTuple, tol: f64) -> Result<CompletionTuple> {
    superdiagonal(d, tol, Mode::Invertible)
}

/// Compression of the free blocks between range complements and kernels.
///
/// Block rows follow the range complements of `D_1 .. D_{n-1}`, block columns
/// the kernels of `D_2 .. D_n`. Block `(i, j - 1)` is `C_i^H A_ij K_j`.
/// Whenever the assembled matrix is injective, so is this one.
pub fn corner_block(d: &DiagonalTuple, a: &CompletionTuple, tol: f64) -> Result<ComplexMatrix> {
    a.validate(d)?;
    let blocks = d.dense_blocks()?;
    let n = blocks.len();
    let coks: Vec<ComplexMatrix> = blocks[..n - 1].iter().map(|m| cokernel_basis(m, tol)).collect();
    let kers: Vec<ComplexMatrix> = blocks[1..].iter().map(|m| kernel_basis(m, tol)).collect();
    let row_off = offsets(&coks.iter().map(ComplexMatrix::cols).collect::<Vec<_>>());
    let col_off = offsets(&kers.iter().map(ComplexMatrix::cols).collect::<Vec<_>>());
    let mut out = DMatrix::<Complex64>::zeros(row_off[n - 1], col_off[n - 1]);
    for ((i, j), m) in a.blocks() {
        let c = &coks[i - 1];
        let k = &kers[j - 2];
        if c.cols() == 0 || k.cols() == 0 {
            continue;
        }
        let piece = c.as_dmatrix().adjoint() * m.as_dmatrix() * k.as_dmatrix();
        out.view_mut((row_off[i - 1], col_off[j - 2]), piece.shape()).copy_from(&piece);
    }
    Ok(out.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::real(rows)
    }

    fn nullity(t: &ComplexMatrix) -> usize {
        t.cols() - rank_of(t, 1e-9)
    }

    fn deficiency(t: &ComplexMatrix) -> usize {
        t.rows() - rank_of(t, 1e-9)
    }

    #[test]
    fn assemble_examples() {
        let d = DiagonalTuple::dense(vec![m(&[&[1.0]]), m(&[&[2.0]])]).unwrap();
        let mut a = CompletionTuple::new();
        a.insert(1, 2, m(&[&[3.0]])).unwrap();
        assert_eq!(assemble(&d, &a).unwrap(), m(&[&[1.0, 3.0], &[0.0, 2.0]]));
        assert_eq!(assemble(&d, &CompletionTuple::new()).unwrap(), m(&[&[1.0, 0.0], &[0.0, 2.0]]));

        let d = DiagonalTuple::dense(vec![m(&[&[1.0]]), m(&[&[2.0]]), m(&[&[3.0]])]).unwrap();
        let mut a = CompletionTuple::new();
        a.insert(1, 3, m(&[&[7.0]])).unwrap();
        assert_eq!(
            assemble(&d, &a).unwrap(),
            m(&[&[1.0, 0.0, 7.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0]])
        );
    }

    #[test]
    fn assemble_rejects_bad_shapes() {
        let d = DiagonalTuple::dense(vec![m(&[&[1.0]]), ComplexMatrix::identity(2)]).unwrap();
        let mut a = CompletionTuple::new();
        a.insert(1, 2, ComplexMatrix::zeros(2, 1)).unwrap();
        assert!(matches!(assemble(&d, &a), Err(Error::ShapeMismatch(_))));
        assert!(a.insert(2, 2, ComplexMatrix::zeros(1, 1)).is_err());
    }

    #[test]
    fn complete_left_examples() {
        let d = DiagonalTuple::dense(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2)]).unwrap();
        let a = complete_left(&d, 1e-9).unwrap();
        assert!(a.is_empty());
        assert_eq!(nullity(&assemble(&d, &a).unwrap()), 0);

        let p = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let d = DiagonalTuple::dense(vec![p.clone(), p]).unwrap();
        let a = complete_left(&d, 1e-9).unwrap();
        let blk = a.get(1, 2).unwrap();
        assert!((blk.get(1, 1).norm() - 1.0).abs() < 1e-12);
        assert!(blk.get(0, 0).norm() < 1e-12 && blk.get(0, 1).norm() < 1e-12 && blk.get(1, 0).norm() < 1e-12);
        let t = assemble(&d, &a).unwrap();
        assert_eq!(rank_of(&t, 1e-9), 3);

        let z = m(&[&[0.0]]);
        let d = DiagonalTuple::dense(vec![z.clone(), z.clone(), z]).unwrap();
        let a = complete_left(&d, 1e-9).unwrap();
        assert_eq!(a.len(), 2);
        assert!(a.is_superdiagonal());
        let t = assemble(&d, &a).unwrap();
        assert_eq!(rank_of(&t, 1e-9), 2);
        assert_eq!(nullity(&t), 1);
    }

    #[test]
    fn complete_left_reports_violation() {
        let d = DiagonalTuple::dense(vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(2, 2)]).unwrap();
        match complete_left(&d, 1e-9) {
            Err(Error::HypothesisViolated { index, alpha, beta, .. }) => {
                assert_eq!(index, 2);
                assert_eq!(alpha, 2u64.into());
                assert_eq!(beta, ExtCard::ZERO);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn complete_right_examples() {
        let d = DiagonalTuple::dense(vec![m(&[&[1.0, 0.0], &[0.0, 0.0]]), m(&[&[0.0, 0.0], &[0.0, 1.0]])]).unwrap();
        let t = assemble(&d, &complete_right(&d, 1e-9).unwrap()).unwrap();
        assert_eq!(deficiency(&t), 1);

        let z = m(&[&[0.0]]);
        let d = DiagonalTuple::dense(vec![z.clone(), z]).unwrap();
        let a = complete_right(&d, 1e-9).unwrap();
        assert!((a.get(1, 2).unwrap().get(0, 0).norm() - 1.0).abs() < 1e-12);
        let t = assemble(&d, &a).unwrap();
        assert_eq!(deficiency(&t), 1);
    }

    #[test]
    fn complete_invertible_examples() {
        let d = DiagonalTuple::dense(vec![m(&[&[1.0, 0.0], &[0.0, 0.0]]), m(&[&[0.0, 0.0], &[0.0, 1.0]])]).unwrap();
        let t = assemble(&d, &complete_invertible(&d, 1e-9).unwrap()).unwrap();
        assert_eq!((nullity(&t), deficiency(&t)), (1, 1));

        let d = DiagonalTuple::dense(vec![m(&[&[2.0]]), m(&[&[3.0]])]).unwrap();
        assert!(complete_invertible(&d, 1e-9).unwrap().is_empty());

        let d = DiagonalTuple::dense(vec![m(&[&[1.0]]), m(&[&[0.0]])]).unwrap();
        assert!(matches!(complete_invertible(&d, 1e-9), Err(Error::HypothesisViolated { index: 1, .. })));
    }

    #[test]
    fn corner_block_examples() {
        let d = DiagonalTuple::dense(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]).unwrap();
        assert_eq!(corner_block(&d, &CompletionTuple::new(), 1e-9).unwrap().shape(), (0, 0));

        let p = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let d = DiagonalTuple::dense(vec![p.clone(), p]).unwrap();
        let mut a = CompletionTuple::new();
        a.insert(1, 2, m(&[&[0.0, 0.0], &[0.0, 1.0]])).unwrap();
        let cb = corner_block(&d, &a, 1e-9).unwrap();
        assert_eq!(cb.shape(), (1, 1));
        assert!((cb.get(0, 0).norm() - 1.0).abs() < 1e-12);

        let d = DiagonalTuple::dense(vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(2, 2)]).unwrap();
        assert_eq!(corner_block(&d, &CompletionTuple::new(), 1e-9).unwrap().shape(), (0, 2));
    }

    #[test]
    fn rejects_mixed_or_short_tuples() {
        use crate::operators::StructuredOperator;
        assert!(DiagonalTuple::dense(vec![ComplexMatrix::identity(1)]).is_err());
        let mixed = vec![
            OperatorHandle::dense(ComplexMatrix::identity(1)).unwrap(),
            StructuredOperator::unilateral_shift().into(),
        ];
        assert!(DiagonalTuple::new(mixed).is_err());
        let s = DiagonalTuple::new(vec![
            StructuredOperator::unilateral_shift().into(),
            StructuredOperator::backward_shift().into(),
        ])
        .unwrap();
        assert!(matches!(complete_left(&s, 1e-9), Err(Error::NotDense)));
    }
}
