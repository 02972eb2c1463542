//! Randomized completion search and the implication verifier.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::completion::{assemble, complete_invertible, complete_left, complete_right, CompletionTuple, DiagonalTuple};
use crate::error::{Error, Result};
use crate::operators::{rank_of, ComplexMatrix, LocalData};

use super::{check_conditions, fredholm_flags, ConditionReport, TheoremFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchTarget {
    Injective,
    Surjective,
    Invertible,
    PhiLMinus,
    PhiRPlus,
    Phi,
    PhiL,
    PhiR,
}

/// Whether a square matrix has the target property at `tol`.
pub fn target_met(t: &ComplexMatrix, target: SearchTarget, tol: f64) -> bool {
    let r = rank_of(t, tol);
    let ld = LocalData::new((t.cols() - r).into(), (t.rows() - r).into(), true).expect("dense data is closed");
    let flags = fredholm_flags(&ld);
    match target {
        SearchTarget::Injective => ld.alpha().is_zero(),
        SearchTarget::Surjective => ld.beta().is_zero(),
        SearchTarget::Invertible => ld.alpha().is_zero() && ld.beta().is_zero(),
        SearchTarget::PhiLMinus => flags.in_phi_l_minus,
        SearchTarget::PhiRPlus => flags.in_phi_r_plus,
        SearchTarget::Phi => flags.in_phi,
        SearchTarget::PhiL => flags.in_phi_l,
        SearchTarget::PhiR => flags.in_phi_r,
    }
}

fn gaussian_block(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> ComplexMatrix {
    let s = scale / std::f64::consts::SQRT_2;
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            m[(i, j)] = Complex64::new(s * re, s * im);
        }
    }
    m.into()
}

/// Fills every block `(i, j)`, `i < j`, with complex Gaussian entries of
/// standard deviation `scale`.
pub fn random_completion(d: &DiagonalTuple, seed: u64, scale: f64) -> Result<CompletionTuple> {
    let sizes: Vec<usize> = d.dense_blocks()?.iter().map(|m| m.rows()).collect();
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::InvalidInput(format!("scale must be nonnegative, got {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CompletionTuple::new();
    for i in 1..=sizes.len() {
        for j in i + 1..=sizes.len() {
            out.insert(i, j, gaussian_block(&mut rng, sizes[i - 1], sizes[j - 1], scale))?;
        }
    }
    Ok(out)
}

/// Seed of the `trial`-th random completion drawn from `seed`.
pub(crate) fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchHit {
    pub completion: CompletionTuple,
    /// Found by the superdiagonal construction (or the zero completion)
    /// rather than by sampling.
    pub constructive: bool,
}

fn constructive_candidates(d: &DiagonalTuple, target: SearchTarget, tol: f64) -> Vec<CompletionTuple> {
    let mut out = Vec::new();
    let built = match target {
        SearchTarget::Injective | SearchTarget::PhiL | SearchTarget::PhiLMinus => complete_left(d, tol),
        SearchTarget::Surjective | SearchTarget::PhiR | SearchTarget::PhiRPlus => complete_right(d, tol),
        SearchTarget::Invertible | SearchTarget::Phi => complete_invertible(d, tol),
    };
    if let Ok(a) = built {
        out.push(a);
    }
    out.push(CompletionTuple::new());
    out
}

/// Looks for a completion whose assembled matrix meets `target`.
///
/// The superdiagonal construction and the zero completion are tried first,
/// then `trials` seeded Gaussian completions. `None` means nothing was found.
pub fn search_completion(
    d: &DiagonalTuple,
    target: SearchTarget,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Option<SearchHit>> {
    for a in constructive_candidates(d, target, tol) {
        if target_met(&assemble(d, &a)?, target, tol) {
            return Ok(Some(SearchHit { completion: a, constructive: true }));
        }
    }
    for t in 0..trials as u64 {
        let a = random_completion(d, trial_seed(seed, t), 1.0)?;
        if target_met(&assemble(d, &a)?, target, tol) {
            return Ok(Some(SearchHit { completion: a, constructive: false }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationReport {
    pub family: TheoremFamily,
    pub conditions: ConditionReport,
    pub holds_ii: bool,
    pub hit: Option<SearchHit>,
    /// Broken implications, e.g. `"(i) => (ii)"`; empty when consistent.
    pub violations: Vec<String>,
    /// (ii) without (i), or (iii) without (ii): allowed, recorded only.
    pub gap: bool,
}

impl ImplicationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `(i) => (ii) => (iii)` on a dense tuple, plus `(ii) => (i)` for
/// two-entry invertibility.
pub fn verify_implications(
    d: &DiagonalTuple,
    family: TheoremFamily,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ImplicationReport> {
    if !d.is_dense() {
        return Err(Error::NotDense);
    }
    let conditions = check_conditions(d, family, tol)?;
    let hit = search_completion(d, family.target(), trials, seed, tol)?;
    let holds_ii = hit.is_some();
    let mut violations = Vec::new();
    if conditions.holds_i && !holds_ii {
        violations.push("(i) => (ii)".to_string());
    }
    if holds_ii && !conditions.holds_iii {
        violations.push("(ii) => (iii)".to_string());
    }
    if family == TheoremFamily::Invertible && d.len() == 2 && holds_ii && !conditions.holds_i {
        violations.push("(ii) => (i)".to_string());
    }
    let gap = (holds_ii && !conditions.holds_i) || (conditions.holds_iii && !holds_ii);
    Ok(ImplicationReport { family, conditions, holds_ii, hit, violations, gap })
}
