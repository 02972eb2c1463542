//! Diagonal-entry operators and their local Fredholm data.
//!
//! An [`OperatorHandle`] is either a finite square matrix or one of the
//! infinite-dimensional model kinds in [`structured`]. Both answer the same
//! question at a spectral point: nullity, deficiency and whether the range of
//! `D - lambda` is closed.

pub mod dense;
pub mod structured;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extmath::{ExtCard, INF};

pub use dense::{cokernel_basis, kernel_basis, rank_of, sigma_min, singular_values, ComplexMatrix, DEFAULT_TOL};
pub use structured::{Atom, LambdaSupport, StructuredKind, StructuredOperator};

/// Nullity, deficiency and range-closedness of `D - lambda`.
///
/// A finite deficiency forces a closed range, so that combination is
/// rejected at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LocalData {
    alpha: ExtCard,
    beta: ExtCard,
    range_closed: bool,
}

impl LocalData {
    pub fn new(alpha: ExtCard, beta: ExtCard, range_closed: bool) -> Result<Self> {
        if beta.is_finite() && !range_closed {
            return Err(Error::InvalidInput(format!(
                "a range of finite codimension {beta} is closed"
            )));
        }
        Ok(LocalData { alpha, beta, range_closed })
    }

    pub fn alpha(&self) -> ExtCard {
        self.alpha
    }

    pub fn beta(&self) -> ExtCard {
        self.beta
    }

    pub fn range_closed(&self) -> bool {
        self.range_closed
    }

    /// Injective with closed range.
    pub fn left_invertible(&self) -> bool {
        self.alpha.is_zero() && self.range_closed
    }

    pub fn right_invertible(&self) -> bool {
        self.beta.is_zero()
    }

    pub fn left_fredholm(&self) -> bool {
        self.alpha.is_finite() && self.range_closed
    }

    pub fn right_fredholm(&self) -> bool {
        self.beta.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Backend {
    Dense(ComplexMatrix),
    Structured(StructuredOperator),
}

/// A diagonal entry `D_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorHandle {
    backend: Backend,
}

impl OperatorHandle {
    /// Wraps a square matrix.
    pub fn dense(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "diagonal entry must be square and nonempty, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(OperatorHandle { backend: Backend::Dense(m) })
    }

    pub fn structured(op: StructuredOperator) -> Self {
        OperatorHandle { backend: Backend::Structured(op) }
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn as_dense(&self) -> Option<&ComplexMatrix> {
        match &self.backend {
            Backend::Dense(m) => Some(m),
            Backend::Structured(_) => None,
        }
    }

    pub fn as_structured(&self) -> Option<&StructuredOperator> {
        match &self.backend {
            Backend::Dense(_) => None,
            Backend::Structured(s) => Some(s),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.backend, Backend::Dense(_))
    }

    pub fn space_dim(&self) -> ExtCard {
        match &self.backend {
            Backend::Dense(m) => m.rows().into(),
            Backend::Structured(_) => INF,
        }
    }
}

impl From<StructuredOperator> for OperatorHandle {
    fn from(op: StructuredOperator) -> Self {
        OperatorHandle::structured(op)
    }
}

pub fn adjoint(h: &OperatorHandle) -> OperatorHandle {
    match &h.backend {
        Backend::Dense(m) => OperatorHandle { backend: Backend::Dense(m.adjoint()) },
        Backend::Structured(s) => OperatorHandle::structured(s.adjoint()),
    }
}

/// Local data of `h - lambda`; structured kinds use `tol` as their band.
pub fn local_data(h: &OperatorHandle, lambda: Complex64, tol: f64) -> Result<LocalData> {
    local_data_within(h, lambda, tol, tol)
}

/// Like [`local_data`], with an explicit closeness band for structured kinds.
///
/// Dense handles ignore `band`; their decisions come from the rank cut.
pub fn local_data_within(h: &OperatorHandle, lambda: Complex64, tol: f64, band: f64) -> Result<LocalData> {
    match &h.backend {
        Backend::Dense(m) => {
            let n = m.rows();
            let r = rank_of(&m.shifted(lambda), tol);
            LocalData::new((n - r).into(), (n - r).into(), true)
        }
        Backend::Structured(s) => s.local_data(lambda, band),
    }
}

/// Codimension of the closure of the range of `h - lambda`.
///
/// Equals the deficiency when the range is closed; otherwise it is the
/// nullity of the adjoint at the conjugate point.
pub fn closure_codim(h: &OperatorHandle, lambda: Complex64, tol: f64, band: f64) -> Result<ExtCard> {
    let here = local_data_within(h, lambda, tol, band)?;
    if here.range_closed() {
        return Ok(here.beta());
    }
    Ok(local_data_within(&adjoint(h), lambda.conj(), tol, band)?.alpha())
}

/// Finite section of a structured handle; dense handles return their leading columns.
pub fn realize_section(h: &OperatorHandle, n_cols: usize) -> Result<ComplexMatrix> {
    match &h.backend {
        Backend::Dense(m) => {
            if n_cols == 0 || n_cols > m.cols() {
                return Err(Error::ShapeMismatch(format!(
                    "cannot take {n_cols} columns of a {}x{} matrix",
                    m.rows(),
                    m.cols()
                )));
            }
            Ok(m.leading_columns(n_cols))
        }
        Backend::Structured(s) => s.section(n_cols),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn finite_codimension_rule() {
        assert!(LocalData::new(ExtCard::ZERO, 1u64.into(), false).is_err());
        assert!(LocalData::new(ExtCard::ZERO, INF, false).is_ok());
    }

    #[test]
    fn dense_local_data() {
        let h = OperatorHandle::dense(ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]])).unwrap();
        let d = local_data(&h, c(0.0, 0.0), DEFAULT_TOL).unwrap();
        assert_eq!((d.alpha(), d.beta(), d.range_closed()), (1u64.into(), 1u64.into(), true));
        let d = local_data(&h, c(0.3, 0.0), DEFAULT_TOL).unwrap();
        assert!(d.left_invertible() && d.right_invertible());
    }

    #[test]
    fn dense_adjoint() {
        let h = OperatorHandle::dense(ComplexMatrix::real(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap();
        assert_eq!(adjoint(&h).as_dense().unwrap(), &ComplexMatrix::real(&[&[0.0, 0.0], &[1.0, 0.0]]));
        assert_eq!(adjoint(&adjoint(&h)), h);
    }

    #[test]
    fn structured_adjoint_examples() {
        let s = OperatorHandle::from(StructuredOperator::unilateral_shift());
        assert_eq!(adjoint(&s), OperatorHandle::from(StructuredOperator::backward_shift()));

        let d = StructuredOperator::diagonal(vec![Atom { value: c(0.0, 1.0), multiplicity: 1u64.into() }], vec![])
            .unwrap();
        let expect = StructuredOperator::diagonal(vec![Atom { value: c(0.0, -1.0), multiplicity: 1u64.into() }], vec![])
            .unwrap();
        assert_eq!(d.adjoint(), expect);
    }

    #[test]
    fn shift_adjoint_pairing_on_basis() {
        // <S e_k, e_j> = <e_k, S* e_j>
        let n = 6;
        let s = StructuredOperator::unilateral_shift().section(n).unwrap();
        let b = StructuredOperator::backward_shift().section(n + 1).unwrap();
        for k in 0..n {
            for j in 0..=n {
                assert_eq!(s.get(j, k), b.get(k, j).conj());
            }
        }
    }

    #[test]
    fn closure_codim_of_dense_range() {
        let s = OperatorHandle::from(StructuredOperator::unilateral_shift());
        assert_eq!(closure_codim(&s, c(1.0, 0.0), DEFAULT_TOL, DEFAULT_TOL).unwrap(), ExtCard::ZERO);
        assert_eq!(closure_codim(&s, c(0.0, 0.0), DEFAULT_TOL, DEFAULT_TOL).unwrap(), 1u64.into());
    }

    #[test]
    fn non_square_dense_rejected() {
        let m = ComplexMatrix::zeros(3, 2);
        assert!(matches!(OperatorHandle::dense(m), Err(Error::ShapeMismatch(_))));
    }
}
