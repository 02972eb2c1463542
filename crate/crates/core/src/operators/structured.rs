//! Infinite-dimensional model operators with exact local rules.
//!
//! Each kind carries closed-form nullity, deficiency and range-closedness for
//! `K - lambda`. A point counts as "on" a critical curve or atom when it lies
//! within `band` of it; callers pick the band (the rank tolerance by default,
//! the cell half-diagonal when scanning a grid).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extmath::{ExtCard, INF};

use super::dense::ComplexMatrix;
use super::LocalData;

/// A point mass of a diagonal operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub value: Complex64,
    pub multiplicity: ExtCard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StructuredKind {
    /// Isometry with the given deficiency; finite nonzero values act as a
    /// shift of that multiplicity.
    Isometry(ExtCard),
    /// Co-isometry with the given nullity; the adjoint of `Isometry`.
    CoIsometry(ExtCard),
    UnilateralShift,
    BackwardShift,
    Identity,
    Zero,
    ScalarMultiple(Complex64, Box<StructuredKind>),
    /// Normal diagonal operator: listed atoms plus a sequence of simple
    /// eigenvalues accumulating at each listed point.
    DiagonalOp {
        atoms: Vec<Atom>,
        accumulation_points: Vec<Complex64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaSupport {
    Full,
    OriginOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuredOperator {
    kind: StructuredKind,
}

impl StructuredOperator {
    pub fn new(kind: StructuredKind) -> Result<Self> {
        validate(&kind)?;
        Ok(StructuredOperator { kind })
    }

    pub fn unilateral_shift() -> Self {
        StructuredOperator { kind: StructuredKind::UnilateralShift }
    }

    pub fn backward_shift() -> Self {
        StructuredOperator { kind: StructuredKind::BackwardShift }
    }

    pub fn identity() -> Self {
        StructuredOperator { kind: StructuredKind::Identity }
    }

    pub fn zero() -> Self {
        StructuredOperator { kind: StructuredKind::Zero }
    }

    pub fn isometry(deficiency: ExtCard) -> Self {
        StructuredOperator { kind: StructuredKind::Isometry(deficiency) }
    }

    pub fn co_isometry(nullity: ExtCard) -> Self {
        StructuredOperator { kind: StructuredKind::CoIsometry(nullity) }
    }

    pub fn diagonal(atoms: Vec<Atom>, accumulation_points: Vec<Complex64>) -> Result<Self> {
        Self::new(StructuredKind::DiagonalOp { atoms, accumulation_points })
    }

    pub fn scalar_multiple(c: Complex64, inner: StructuredOperator) -> Result<Self> {
        Self::new(StructuredKind::ScalarMultiple(c, Box::new(inner.kind)))
    }

    pub fn kind(&self) -> &StructuredKind {
        &self.kind
    }

    pub fn lambda_support(&self) -> LambdaSupport {
        support_of(&self.kind)
    }

    pub fn adjoint(&self) -> Self {
        StructuredOperator { kind: adjoint_kind(&self.kind) }
    }

    /// Local data of `self - lambda` with `band` as the closeness radius.
    pub fn local_data(&self, lambda: Complex64, band: f64) -> Result<LocalData> {
        if self.lambda_support() == LambdaSupport::OriginOnly && lambda.norm() > band {
            return Err(Error::UnsupportedPoint { lambda });
        }
        Ok(local_rule(&self.kind, lambda, band))
    }

    /// Matrix of the operator restricted to the first `n_cols` basis vectors.
    pub fn section(&self, n_cols: usize) -> Result<ComplexMatrix> {
        if n_cols == 0 {
            return Err(Error::InvalidInput("section needs at least one column".into()));
        }
        section_of(&self.kind, n_cols)
    }
}

fn validate(kind: &StructuredKind) -> Result<()> {
    match kind {
        StructuredKind::ScalarMultiple(c, inner) => {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::InvalidInput("scalar multiple must be finite".into()));
            }
            validate(inner)
        }
        StructuredKind::DiagonalOp { atoms, accumulation_points } => {
            let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
            if !atoms.iter().all(|a| finite(&a.value)) || !accumulation_points.iter().all(finite) {
                return Err(Error::InvalidInput("diagonal values must be finite".into()));
            }
            for (i, a) in atoms.iter().enumerate() {
                if a.multiplicity.is_zero() {
                    return Err(Error::InvalidInput(format!("atom {i} has zero multiplicity")));
                }
                if atoms[..i].iter().any(|b| b.value == a.value) {
                    return Err(Error::InvalidInput(format!(
                        "atom value {} + {}i is repeated",
                        a.value.re, a.value.im
                    )));
                }
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn support_of(kind: &StructuredKind) -> LambdaSupport {
    match kind {
        StructuredKind::Isometry(d) | StructuredKind::CoIsometry(d) => match d {
            ExtCard::Finite(n) if *n > 0 => LambdaSupport::Full,
            _ => LambdaSupport::OriginOnly,
        },
        StructuredKind::ScalarMultiple(c, inner) if *c != Complex64::new(0.0, 0.0) => support_of(inner),
        _ => LambdaSupport::Full,
    }
}

fn adjoint_kind(kind: &StructuredKind) -> StructuredKind {
    match kind {
        StructuredKind::Isometry(d) => StructuredKind::CoIsometry(*d),
        StructuredKind::CoIsometry(d) => StructuredKind::Isometry(*d),
        StructuredKind::UnilateralShift => StructuredKind::BackwardShift,
        StructuredKind::BackwardShift => StructuredKind::UnilateralShift,
        StructuredKind::Identity => StructuredKind::Identity,
        StructuredKind::Zero => StructuredKind::Zero,
        StructuredKind::ScalarMultiple(c, inner) => {
            StructuredKind::ScalarMultiple(c.conj(), Box::new(adjoint_kind(inner)))
        }
        StructuredKind::DiagonalOp { atoms, accumulation_points } => StructuredKind::DiagonalOp {
            atoms: atoms
                .iter()
                .map(|a| Atom { value: a.value.conj(), multiplicity: a.multiplicity })
                .collect(),
            accumulation_points: accumulation_points.iter().map(|p| p.conj()).collect(),
        },
    }
}

fn ld(alpha: ExtCard, beta: ExtCard, closed: bool) -> LocalData {
    LocalData::new(alpha, beta, closed).expect("structured rules respect the finite-codimension rule")
}

/// Shift-like rule: injective with deficiency `inside` in the open disc,
/// dense non-closed range on the circle, invertible outside.
fn shift_rule(lambda: Complex64, band: f64, inside: ExtCard, adjoint: bool) -> LocalData {
    let r = lambda.norm();
    if (r - 1.0).abs() <= band {
        ld(ExtCard::ZERO, INF, false)
    } else if r < 1.0 {
        if adjoint {
            ld(inside, ExtCard::ZERO, true)
        } else {
            ld(ExtCard::ZERO, inside, true)
        }
    } else {
        ld(ExtCard::ZERO, ExtCard::ZERO, true)
    }
}

fn local_rule(kind: &StructuredKind, lambda: Complex64, band: f64) -> LocalData {
    let one = ExtCard::Finite(1);
    match kind {
        StructuredKind::UnilateralShift => shift_rule(lambda, band, one, false),
        StructuredKind::BackwardShift => shift_rule(lambda, band, one, true),
        StructuredKind::Isometry(d) => match d {
            ExtCard::Finite(n) if *n > 0 => shift_rule(lambda, band, *d, false),
            _ => ld(ExtCard::ZERO, *d, true),
        },
        StructuredKind::CoIsometry(d) => match d {
            ExtCard::Finite(n) if *n > 0 => shift_rule(lambda, band, *d, true),
            _ => ld(*d, ExtCard::ZERO, true),
        },
        StructuredKind::Identity => point_rule(lambda, Complex64::new(1.0, 0.0), band),
        StructuredKind::Zero => point_rule(lambda, Complex64::new(0.0, 0.0), band),
        StructuredKind::ScalarMultiple(c, inner) => {
            if *c == Complex64::new(0.0, 0.0) {
                point_rule(lambda, *c, band)
            } else {
                local_rule(inner, lambda / c, band / c.norm())
            }
        }
        StructuredKind::DiagonalOp { atoms, accumulation_points } => {
            let closed = !accumulation_points.iter().any(|p| (p - lambda).norm() <= band);
            let atom_hits: ExtCard = atoms
                .iter()
                .filter(|a| (a.value - lambda).norm() <= band)
                .map(|a| a.multiplicity)
                .sum();
            let sequence_hits: u64 = if closed {
                accumulation_points.iter().map(|&p| sequence_hits(lambda - p, band)).sum()
            } else {
                0
            };
            let alpha = atom_hits + ExtCard::Finite(sequence_hits);
            let beta = if closed { alpha } else { INF };
            ld(alpha, beta, closed)
        }
    }
}

/// Number of `r >= 1` with `|1/r - offset| <= band`, for `|offset| > band`.
fn sequence_hits(offset: Complex64, band: f64) -> u64 {
    if band < offset.im.abs() {
        return 0;
    }
    let h = (band * band - offset.im * offset.im).sqrt();
    let (lo, hi) = (offset.re - h, offset.re + h);
    // The disc misses the origin, so a hit interval lies on one side of it.
    if lo <= 0.0 {
        return 0;
    }
    let r_min = (1.0 / hi).ceil().max(1.0);
    let r_max = (1.0 / lo).floor();
    if r_max < r_min {
        0
    } else {
        (r_max - r_min) as u64 + 1
    }
}

fn point_rule(lambda: Complex64, at: Complex64, band: f64) -> LocalData {
    if (lambda - at).norm() <= band {
        ld(INF, INF, true)
    } else {
        ld(ExtCard::ZERO, ExtCard::ZERO, true)
    }
}

fn c1() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `e_k -> e_{k + step}` on the first `n` basis vectors.
fn forward_shift(n: usize, step: usize) -> ComplexMatrix {
    let mut m = nalgebra::DMatrix::zeros(n + step, n);
    for k in 0..n {
        m[(k + step, k)] = c1();
    }
    m.into()
}

/// `e_k -> e_{k - step}` (zero for `k < step`) on the first `n` basis vectors.
fn backward(n: usize, step: usize) -> ComplexMatrix {
    let mut m = nalgebra::DMatrix::zeros(n, n);
    for k in step..n {
        m[(k - step, k)] = c1();
    }
    m.into()
}

fn section_of(kind: &StructuredKind, n: usize) -> Result<ComplexMatrix> {
    Ok(match kind {
        StructuredKind::UnilateralShift => forward_shift(n, 1),
        StructuredKind::BackwardShift => backward(n, 1),
        StructuredKind::Isometry(ExtCard::Finite(d)) => forward_shift(n, *d as usize),
        // e_k -> e_{2k}: its range misses every odd basis vector
        StructuredKind::Isometry(ExtCard::Inf) => {
            let mut m = nalgebra::DMatrix::zeros(2 * n, n);
            for k in 0..n {
                m[(2 * k, k)] = c1();
            }
            m.into()
        }
        StructuredKind::CoIsometry(ExtCard::Finite(d)) => backward(n, *d as usize),
        // e_{2k} -> e_k, odd vectors span the kernel
        StructuredKind::CoIsometry(ExtCard::Inf) => {
            let mut m = nalgebra::DMatrix::zeros(n, n);
            for k in (0..n).step_by(2) {
                m[(k / 2, k)] = c1();
            }
            m.into()
        }
        StructuredKind::Identity => ComplexMatrix::identity(n),
        StructuredKind::Zero => ComplexMatrix::zeros(n, n),
        StructuredKind::ScalarMultiple(c, inner) => section_of(inner, n)?.scale(*c),
        StructuredKind::DiagonalOp { atoms, accumulation_points } => {
            ComplexMatrix::diagonal(&diagonal_sequence(atoms, accumulation_points, n)?)
        }
    })
}

/// Canonical enumeration of a diagonal operator's entries.
///
/// Finite-multiplicity atoms come first, repeated in list order. After that
/// the entries cycle in rounds `r = 1, 2, ...`: one copy of every
/// infinite-multiplicity atom, then `p + 1/r` for every accumulation point `p`.
pub fn diagonal_sequence(
    atoms: &[Atom],
    accumulation_points: &[Complex64],
    len: usize,
) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(len);
    for a in atoms {
        if let ExtCard::Finite(m) = a.multiplicity {
            for _ in 0..m {
                if out.len() == len {
                    return Ok(out);
                }
                out.push(a.value);
            }
        }
    }
    let tail: Vec<&Atom> = atoms.iter().filter(|a| a.multiplicity.is_infinite()).collect();
    if out.len() < len && tail.is_empty() && accumulation_points.is_empty() {
        return Err(Error::UnsupportedKind(format!(
            "diagonal operator has only {} entries, {len} requested",
            out.len()
        )));
    }
    let mut round = 1.0_f64;
    while out.len() < len {
        for a in &tail {
            out.push(a.value);
        }
        for p in accumulation_points {
            out.push(p + Complex64::new(1.0 / round, 0.0));
        }
        round += 1.0;
    }
    out.truncate(len);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::dense::{sigma_min, DEFAULT_TOL};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn triple(op: &StructuredOperator, lambda: Complex64) -> (ExtCard, ExtCard, bool) {
        let d = op.local_data(lambda, DEFAULT_TOL).unwrap();
        (d.alpha(), d.beta(), d.range_closed())
    }

    #[test]
    fn shift_rules() {
        let s = StructuredOperator::unilateral_shift();
        assert_eq!(triple(&s, c(0.0, 0.0)), (ExtCard::ZERO, 1u64.into(), true));
        assert_eq!(triple(&s, c(0.0, 1.0)), (ExtCard::ZERO, INF, false));
        assert_eq!(triple(&s, c(2.0, 0.0)), (ExtCard::ZERO, ExtCard::ZERO, true));

        let b = StructuredOperator::backward_shift();
        assert_eq!(triple(&b, c(0.5, 0.0)), (1u64.into(), ExtCard::ZERO, true));
        assert_eq!(triple(&b, c(-1.0, 0.0)), (ExtCard::ZERO, INF, false));
    }

    #[test]
    fn shift_section_facts() {
        // S*S = I on the section: columns orthonormal, so alpha = 0 and range closed
        let s = StructuredOperator::unilateral_shift().section(5).unwrap();
        let gram = s.adjoint().matmul(&s).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-15);
        // e_0 is orthogonal to every column, so beta >= 1
        assert!((0..5).all(|k| s.get(0, k).norm() == 0.0));
    }

    #[test]
    fn boundary_sections_lose_lower_bound() {
        // sections of S - lambda on the circle: sigma_min decays like 1/n
        let lambda = c(0.0, 1.0);
        let mut last = f64::INFINITY;
        for n in [4, 16, 64] {
            let s = StructuredOperator::unilateral_shift().section(n).unwrap();
            let mut shifted = s.into_dmatrix();
            for k in 0..n {
                shifted[(k, k)] -= lambda;
            }
            let smin = sigma_min(&shifted.into());
            assert!(smin > 0.0 && smin < last);
            last = smin;
        }
        assert!(last < 0.1);
    }

    #[test]
    fn diagonal_with_accumulation_at_origin() {
        let d = StructuredOperator::diagonal(vec![], vec![c(0.0, 0.0)]).unwrap();
        assert_eq!(triple(&d, c(0.0, 0.0)), (ExtCard::ZERO, INF, false));
        assert_eq!(triple(&d, c(0.75, 0.0)), (ExtCard::ZERO, ExtCard::ZERO, true));
        assert_eq!(triple(&d, c(0.5, 0.0)), (ExtCard::Finite(1), ExtCard::Finite(1), true));
        let seq = diagonal_sequence(&[], &[c(0.0, 0.0)], 4).unwrap();
        assert_eq!(seq, vec![c(1.0, 0.0), c(0.5, 0.0), c(1.0 / 3.0, 0.0), c(0.25, 0.0)]);
    }

    #[test]
    fn diagonal_enumeration_order() {
        let atoms = vec![
            Atom { value: c(2.0, 0.0), multiplicity: INF },
            Atom { value: c(5.0, 0.0), multiplicity: 2u64.into() },
        ];
        let seq = diagonal_sequence(&atoms, &[], 5).unwrap();
        assert_eq!(seq, vec![c(5.0, 0.0), c(5.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)]);

        let finite = [Atom { value: c(1.0, 0.0), multiplicity: 1u64.into() }];
        assert!(matches!(diagonal_sequence(&finite, &[], 2), Err(Error::UnsupportedKind(_))));
    }

    #[test]
    fn isometry_sections_are_isometric() {
        let m = StructuredOperator::isometry(2u64.into()).section(2).unwrap();
        assert_eq!(m.shape(), (4, 2));
        assert_eq!(sigma_min(&m), 1.0);
        for n in 1..10 {
            let m = StructuredOperator::isometry(INF).section(n).unwrap();
            assert_eq!(sigma_min(&m), 1.0);
        }
    }

    #[test]
    fn origin_only_kinds_reject_other_points() {
        let v = StructuredOperator::isometry(INF);
        assert_eq!(triple(&v, c(0.0, 0.0)), (ExtCard::ZERO, INF, true));
        assert!(matches!(
            v.local_data(c(0.5, 0.0), DEFAULT_TOL),
            Err(Error::UnsupportedPoint { .. })
        ));
        assert_eq!(v.lambda_support(), LambdaSupport::OriginOnly);
        assert_eq!(StructuredOperator::isometry(3u64.into()).lambda_support(), LambdaSupport::Full);
    }

    #[test]
    fn scalar_multiple_rescales() {
        let k = StructuredOperator::scalar_multiple(c(2.0, 0.0), StructuredOperator::unilateral_shift()).unwrap();
        // 2S - lambda = 2(S - lambda/2): the critical circle has radius 2
        assert_eq!(triple(&k, c(1.0, 0.0)), (ExtCard::ZERO, 1u64.into(), true));
        assert_eq!(triple(&k, c(0.0, 2.0)), (ExtCard::ZERO, INF, false));
        let z = StructuredOperator::scalar_multiple(c(0.0, 0.0), StructuredOperator::unilateral_shift()).unwrap();
        assert_eq!(triple(&z, c(0.0, 0.0)), (INF, INF, true));
    }

    #[test]
    fn rejects_repeated_atoms() {
        let atoms = vec![
            Atom { value: c(1.0, 0.0), multiplicity: 1u64.into() },
            Atom { value: c(1.0, 0.0), multiplicity: 2u64.into() },
        ];
        assert!(StructuredOperator::diagonal(atoms, vec![]).is_err());
    }

    #[test]
    fn accumulating_sequence_eigenvalues_count() {
        let d = StructuredOperator::diagonal(vec![], vec![Complex64::new(0.0, 0.0)]).unwrap();
        let at = |re: f64| d.local_data(Complex64::new(re, 0.0), 1e-9).unwrap();
        for re in [1.0, 0.5, 0.25] {
            assert_eq!(at(re), ld(ExtCard::Finite(1), ExtCard::Finite(1), true), "{re}");
        }
        assert_eq!(at(0.75), ld(ExtCard::ZERO, ExtCard::ZERO, true));
        assert_eq!(at(0.0), ld(ExtCard::ZERO, INF, false));
        assert_eq!(at(-1.0), ld(ExtCard::ZERO, ExtCard::ZERO, true));
        // A wide band around 0.6 catches 1/2 only.
        assert_eq!(d.local_data(Complex64::new(0.6, 0.05), 0.12).unwrap().alpha(), ExtCard::Finite(1));
        let seq = diagonal_sequence(&[], &[Complex64::new(0.0, 0.0)], 4).unwrap();
        assert_eq!(seq[1], Complex64::new(0.5, 0.0));
    }
}
