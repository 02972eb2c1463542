//! Seeded random dense tuples for property checks and batch verification.
//!
//! Every entry is `U diag(s) V^H` with Haar-like unitary factors taken from
//! the SVD of a complex Gaussian matrix and kept singular values drawn from
//! `[0.5, 2]`, so ranks are unambiguous at any tolerance far below one.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::completion::DiagonalTuple;
use crate::operators::ComplexMatrix;

pub const MAX_DIM: usize = 6;
const MAX_DEFECT: usize = 3;

/// Which superdiagonal hypothesis a generated tuple satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    /// Nullities never increase along the diagonal.
    Left,
    /// Nullities never decrease along the diagonal.
    Right,
    /// All nullities equal.
    Invertible,
    Unconstrained,
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<Complex64> {
    gaussian(rng, dim, dim).svd(true, false).u.expect("requested U")
}

/// Square matrix of size `dim` and exact rank `rank`.
pub fn random_rank_matrix(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> ComplexMatrix {
    assert!(rank <= dim, "rank {rank} exceeds dimension {dim}");
    let u = random_unitary(rng, dim);
    let v = random_unitary(rng, dim);
    let s = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j && i < rank {
            Complex64::new(rng.random_range(0.5..2.0), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    (u * s * v.adjoint()).into()
}

/// Normal matrix `Q diag(eigenvalues) Q^H` with a random unitary `Q`.
pub fn normal_matrix(rng: &mut ChaCha8Rng, eigenvalues: &[Complex64]) -> ComplexMatrix {
    let q = random_unitary(rng, eigenvalues.len());
    let diag = DMatrix::from_fn(eigenvalues.len(), eigenvalues.len(), |i, j| {
        if i == j {
            eigenvalues[i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    (&q * diag * q.adjoint()).into()
}

fn defects(rng: &mut ChaCha8Rng, kind: CorpusKind, n: usize) -> Vec<Option<usize>> {
    match kind {
        CorpusKind::Unconstrained => vec![None; n],
        CorpusKind::Invertible => vec![Some(rng.random_range(0..=MAX_DEFECT)); n],
        CorpusKind::Left | CorpusKind::Right => {
            let mut out = Vec::with_capacity(n);
            let mut cur = rng.random_range(0..=MAX_DEFECT);
            for _ in 0..n {
                out.push(Some(cur));
                cur = rng.random_range(0..=cur);
            }
            if kind == CorpusKind::Right {
                out.reverse();
            }
            out
        }
    }
}

/// One random tuple of length 2 to 4 with entry sizes at most [`MAX_DIM`].
pub fn random_tuple(rng: &mut ChaCha8Rng, kind: CorpusKind) -> DiagonalTuple {
    let n = rng.random_range(2..=4);
    let blocks = defects(rng, kind, n)
        .into_iter()
        .map(|def| {
            let (dim, rank) = match def {
                Some(def) => {
                    let dim = rng.random_range(def.max(1)..=MAX_DIM);
                    (dim, dim - def)
                }
                None => {
                    let dim = rng.random_range(1..=MAX_DIM);
                    (dim, rng.random_range(0..=dim))
                }
            };
            random_rank_matrix(rng, dim, rank)
        })
        .collect();
    DiagonalTuple::dense(blocks).expect("generated blocks are square and nonempty")
}

/// `count` tuples drawn from a single seeded stream.
pub fn corpus(kind: CorpusKind, count: usize, seed: u64) -> Vec<DiagonalTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_tuple(&mut rng, kind)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::dense_defects;
    use crate::operators::{rank_of, singular_values};

    #[test]
    fn exact_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in 1..=MAX_DIM {
            for rank in 0..=dim {
                let m = random_rank_matrix(&mut rng, dim, rank);
                assert_eq!(rank_of(&m, 1e-9), rank);
            }
        }
    }

    #[test]
    fn preconditions_hold() {
        for (kind, ok) in [
            (CorpusKind::Left, (|a: usize, b: usize| b <= a) as fn(usize, usize) -> bool),
            (CorpusKind::Right, |a, b| a <= b),
            (CorpusKind::Invertible, |a, b| a == b),
        ] {
            for d in corpus(kind, 100, 11) {
                let defs = dense_defects(&d, 1e-9).unwrap();
                assert!((2..=4).contains(&d.len()));
                assert!(defs.windows(2).all(|w| ok(w[0].0, w[1].0)), "{kind:?}: {defs:?}");
            }
        }
    }

    #[test]
    fn seeded_corpus_repeats() {
        let a = corpus(CorpusKind::Unconstrained, 5, 9);
        let b = corpus(CorpusKind::Unconstrained, 5, 9);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.dims(), y.dims());
        }
    }

    #[test]
    fn normal_matrix_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let eig = [Complex64::new(3.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
        let s = singular_values(&normal_matrix(&mut rng, &eig));
        for (got, want) in s.iter().zip([3.0, 1.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
