//! Sufficient and necessary conditions for completability.
//!
//! For every family the check evaluates two condition sets over the local
//! data of the diagonal at `lambda = 0`:
//!
//! * condition (i), sufficient for some completion to land in the class;
//! * condition (iii), necessary for that.
//!
//! Each is a conjunction of an "a" part (about the corner entries) and a
//! "b" part (the counting clauses). Embedding clauses use dimension
//! comparisons, so everything reduces to [`ExtCard`] arithmetic.

mod certify;
mod search;

pub use certify::{certify_structured_example, CertifyReport, EXAMPLES};
pub use search::{
    random_completion, search_completion, target_met, verify_implications, ImplicationReport, SearchHit, SearchTarget,
};

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::completion::DiagonalTuple;
use crate::error::Result;
use crate::extmath::{embeds, essentially_embeds, ExtCard};
use crate::operators::{closure_codim, local_data_within, LocalData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremFamily {
    Left,
    Right,
    Invertible,
    LeftWeyl,
    RightWeyl,
    LeftFredholm,
    RightFredholm,
    Fredholm,
}

impl TheoremFamily {
    pub const ALL: [TheoremFamily; 8] = [
        TheoremFamily::Left,
        TheoremFamily::Right,
        TheoremFamily::Invertible,
        TheoremFamily::LeftWeyl,
        TheoremFamily::RightWeyl,
        TheoremFamily::LeftFredholm,
        TheoremFamily::RightFredholm,
        TheoremFamily::Fredholm,
    ];

    /// The property a completion must give the assembled matrix.
    pub fn target(self) -> SearchTarget {
        match self {
            TheoremFamily::Left => SearchTarget::Injective,
            TheoremFamily::Right => SearchTarget::Surjective,
            TheoremFamily::Invertible => SearchTarget::Invertible,
            TheoremFamily::LeftWeyl => SearchTarget::PhiLMinus,
            TheoremFamily::RightWeyl => SearchTarget::PhiRPlus,
            TheoremFamily::LeftFredholm => SearchTarget::PhiL,
            TheoremFamily::RightFredholm => SearchTarget::PhiR,
            TheoremFamily::Fredholm => SearchTarget::Phi,
        }
    }

    /// Mirror family under taking adjoints and reversing the diagonal.
    pub fn dual(self) -> TheoremFamily {
        match self {
            TheoremFamily::Left => TheoremFamily::Right,
            TheoremFamily::Right => TheoremFamily::Left,
            TheoremFamily::LeftWeyl => TheoremFamily::RightWeyl,
            TheoremFamily::RightWeyl => TheoremFamily::LeftWeyl,
            TheoremFamily::LeftFredholm => TheoremFamily::RightFredholm,
            TheoremFamily::RightFredholm => TheoremFamily::LeftFredholm,
            f => f,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TheoremFamily::Left => "left",
            TheoremFamily::Right => "right",
            TheoremFamily::Invertible => "invertible",
            TheoremFamily::LeftWeyl => "left_weyl",
            TheoremFamily::RightWeyl => "right_weyl",
            TheoremFamily::LeftFredholm => "left_fredholm",
            TheoremFamily::RightFredholm => "right_fredholm",
            TheoremFamily::Fredholm => "fredholm",
        }
    }
}

impl fmt::Display for TheoremFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Signed Fredholm index `alpha - beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FredholmIndex {
    Finite(i64),
    PlusInf,
    MinusInf,
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FredholmFlags {
    pub in_phi_l: bool,
    pub in_phi_r: bool,
    pub in_phi: bool,
    pub in_phi_l_minus: bool,
    pub in_phi_r_plus: bool,
    pub index: FredholmIndex,
}

pub fn fredholm_flags(ld: &LocalData) -> FredholmFlags {
    let (a, b) = (ld.alpha(), ld.beta());
    let in_phi_l = ld.left_fredholm();
    let in_phi_r = ld.right_fredholm();
    let index = match (a, b) {
        (ExtCard::Finite(x), ExtCard::Finite(y)) => FredholmIndex::Finite(x as i64 - y as i64),
        (ExtCard::Finite(_), ExtCard::Inf) => FredholmIndex::MinusInf,
        (ExtCard::Inf, ExtCard::Finite(_)) => FredholmIndex::PlusInf,
        (ExtCard::Inf, ExtCard::Inf) => FredholmIndex::Undefined,
    };
    FredholmFlags {
        in_phi_l,
        in_phi_r,
        in_phi: in_phi_l && in_phi_r,
        in_phi_l_minus: in_phi_l && (b.is_infinite() || a <= b),
        in_phi_r_plus: in_phi_r && (a.is_infinite() || a >= b),
        index,
    }
}

/// One failed clause.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// `"i.a"`, `"i.b"`, `"iii.a"` or `"iii.b"`.
    pub condition: &'static str,
    /// 1-based diagonal index the clause is about, 0 for whole-tuple clauses.
    pub index: usize,
    pub detail: String,
}

/// Dimension-count proof that no completion reaches the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `D_1` is not left invertible, so no completed matrix is.
    LeadingNotLeftInvertible,
    /// `D_n` is not right invertible, so no completed matrix is.
    TrailingNotRightInvertible,
    /// The kernel of `D_index` meets only `rows` corner rows but has `cols`
    /// dimensions, so every completion has nullity at least `cols - rows`.
    CornerBlockWide { index: usize, rows: ExtCard, cols: ExtCard },
    /// The range complement of `D_index` sees only `cols` corner columns but
    /// has `rows` dimensions, so every completion has deficiency at least
    /// `rows - cols`.
    CornerBlockTall { index: usize, rows: ExtCard, cols: ExtCard },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::LeadingNotLeftInvertible => f.write_str("D_1 is not left invertible"),
            Certificate::TrailingNotRightInvertible => f.write_str("D_n is not right invertible"),
            Certificate::CornerBlockWide { index, rows, cols } => write!(
                f,
                "corner block column {index}: {cols} kernel columns against {rows} complement rows"
            ),
            Certificate::CornerBlockTall { index, rows, cols } => write!(
                f,
                "corner block row {index}: {rows} complement rows against {cols} kernel columns"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub family: TheoremFamily,
    pub holds_i: bool,
    pub holds_iii: bool,
    pub witness_violations: Vec<Violation>,
    /// Obstructions proving that (ii) fails; empty unless (iii) fails for a
    /// family with a counting certificate.
    pub certificates: Vec<Certificate>,
    pub local_data: Vec<LocalData>,
}

/// Local data of one diagonal entry plus the codimension of the closure of
/// its range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntryData {
    pub local: LocalData,
    pub closure_codim: ExtCard,
}

pub fn entry_data(d: &DiagonalTuple, lambda: Complex64, tol: f64, band: f64) -> Result<Vec<EntryData>> {
    d.entries()
        .iter()
        .map(|h| {
            Ok(EntryData {
                local: local_data_within(h, lambda, tol, band)?,
                closure_codim: closure_codim(h, lambda, tol, band)?,
            })
        })
        .collect()
}

pub fn check_conditions(d: &DiagonalTuple, family: TheoremFamily, tol: f64) -> Result<ConditionReport> {
    let data = entry_data(d, Complex64::new(0.0, 0.0), tol, tol)?;
    Ok(evaluate(&data, family))
}

type Clause = (usize, bool, String);

struct Recorder {
    violations: Vec<Violation>,
}

impl Recorder {
    fn all(&mut self, id: &'static str, clauses: Vec<Clause>) -> bool {
        let mut ok = true;
        for (index, holds, detail) in clauses {
            if !holds {
                ok = false;
                self.violations.push(Violation { condition: id, index, detail });
            }
        }
        ok
    }

    fn any(&mut self, id: &'static str, branches: Vec<Vec<Clause>>) -> bool {
        if branches.iter().any(|b| b.iter().all(|c| c.1)) {
            return true;
        }
        for (k, branch) in branches.into_iter().enumerate() {
            if let Some((index, _, detail)) = branch.into_iter().find(|c| !c.1) {
                self.violations.push(Violation { condition: id, index, detail: format!("branch {}: {detail}", k + 1) });
            }
        }
        false
    }
}

fn sum(terms: impl Iterator<Item = ExtCard>) -> ExtCard {
    terms.sum()
}

/// Evaluates a family's conditions on precomputed entry data.
pub fn evaluate(data: &[EntryData], family: TheoremFamily) -> ConditionReport {
    let n = data.len();
    let a = |k: usize| data[k - 1].local.alpha();
    let b = |k: usize| data[k - 1].local.beta();
    let c = |k: usize| data[k - 1].local.range_closed();
    let phi_l = |k: usize| data[k - 1].local.left_fredholm();
    let phi_r = |k: usize| data[k - 1].local.right_fredholm();

    let closed = |s: usize| (s, c(s), format!("range of D_{s} is not closed"));
    let left_inv_1 = || (1, a(1).is_zero() && c(1), format!("D_1 is not left invertible (alpha = {}, closed = {})", a(1), c(1)));
    let right_inv_n =
        || (n, b(n).is_zero(), format!("D_{n} is not right invertible (beta = {})", b(n)));
    let phi_l_at = |s: usize| (s, phi_l(s), format!("D_{s} is not left Fredholm (alpha = {}, closed = {})", a(s), c(s)));
    let phi_r_at = |s: usize| (s, phi_r(s), format!("D_{s} is not right Fredholm (beta = {})", b(s)));
    let alpha_le_beta_prev = |i: usize| {
        (i, embeds(a(i), b(i - 1)), format!("alpha(D_{i}) = {} exceeds beta(D_{}) = {}", a(i), i - 1, b(i - 1)))
    };
    let beta_le_alpha_next = |i: usize| {
        (i, embeds(b(i), a(i + 1)), format!("beta(D_{i}) = {} exceeds alpha(D_{}) = {}", b(i), i + 1, a(i + 1)))
    };
    let alpha_le_prefix = |i: usize| {
        let s = sum((1..i).map(b));
        (i, a(i) <= s, format!("alpha(D_{i}) = {} exceeds the deficiency sum {s} of D_1..D_{}", a(i), i - 1))
    };
    let beta_le_suffix = |i: usize| {
        let s = sum((i + 1..=n).map(a));
        (i, b(i) <= s, format!("beta(D_{i}) = {} exceeds the nullity sum {s} of D_{}..D_{n}", b(i), i + 1))
    };
    let sum_a = sum((1..=n).map(a));
    let sum_b = sum((1..=n).map(b));

    let mut rec = Recorder { violations: Vec::new() };
    let (holds_i, holds_iii) = match family {
        TheoremFamily::Left => {
            let ia = rec.all("i.a", vec![left_inv_1()]);
            let mut ib: Vec<Clause> = (2..=n).map(closed).collect();
            ib.extend((2..=n).map(alpha_le_beta_prev));
            let ib = rec.all("i.b", ib);
            let iiia = rec.all("iii.a", vec![left_inv_1()]);
            let iiib = rec.all("iii.b", (2..=n).map(alpha_le_prefix).collect());
            (ia && ib, iiia && iiib)
        }
        TheoremFamily::Right => {
            let ia = rec.all("i.a", vec![right_inv_n()]);
            let mut ib: Vec<Clause> = (1..n).map(closed).collect();
            ib.extend((1..n).map(beta_le_alpha_next));
            let ib = rec.all("i.b", ib);
            let iiia = rec.all("iii.a", vec![right_inv_n()]);
            let iiib = rec.all("iii.b", (1..n).map(beta_le_suffix).collect());
            (ia && ib, iiia && iiib)
        }
        TheoremFamily::Invertible => {
            let ia = rec.all("i.a", vec![left_inv_1(), right_inv_n()]);
            let mut ib: Vec<Clause> = (2..n).map(closed).collect();
            ib.extend((1..n).map(|i| {
                (i, a(i + 1) == b(i), format!("alpha(D_{}) = {} differs from beta(D_{i}) = {}", i + 1, a(i + 1), b(i)))
            }));
            let ib = rec.all("i.b", ib);
            let iiia = rec.all("iii.a", vec![left_inv_1(), right_inv_n()]);
            let mut iiib: Vec<Clause> = (2..=n).map(alpha_le_prefix).collect();
            iiib.extend((1..n).map(beta_le_suffix));
            let iiib = rec.all("iii.b", iiib);
            (ia && ib, iiia && iiib)
        }
        TheoremFamily::LeftWeyl => {
            let ia = rec.all("i.a", vec![phi_l_at(1)]);
            let mut chain: Vec<Clause> = (2..=n).map(closed).collect();
            chain.extend((2..=n).map(alpha_le_beta_prev));
            let strict = (2..=n).any(|t| essentially_embeds(a(t), b(t - 1)));
            chain.push((
                n,
                b(n).is_infinite() || strict,
                format!("beta(D_{n}) = {} is finite and no kernel embeds essentially", b(n)),
            ));
            let mut total: Vec<Clause> = (2..=n).map(phi_l_at).collect();
            total.push((0, embeds(sum_a, sum_b), format!("total nullity {sum_a} exceeds total deficiency {sum_b}")));
            let ib = rec.any("i.b", vec![chain, total]);

            let iiia = rec.all("iii.a", vec![phi_l_at(1)]);
            let mut total: Vec<Clause> = (2..=n).map(phi_l_at).collect();
            total.push((
                0,
                !essentially_embeds(sum_b, sum_a),
                format!("total deficiency {sum_b} embeds essentially in total nullity {sum_a}"),
            ));
            let iiib = rec.any("iii.b", vec![vec![infinite_deficiency_left(data)], total]);
            (ia && ib, iiia && iiib)
        }
        TheoremFamily::RightWeyl => {
            let ia = rec.all("i.a", vec![phi_r_at(n)]);
            let mut chain: Vec<Clause> = (1..n).map(closed).collect();
            chain.extend((1..n).map(beta_le_alpha_next));
            let strict = (1..n).any(|t| essentially_embeds(b(t), a(t + 1)));
            chain.push((
                1,
                a(1).is_infinite() || strict,
                format!("alpha(D_1) = {} is finite and no complement embeds essentially", a(1)),
            ));
            let mut total: Vec<Clause> = (1..n).map(phi_r_at).collect();
            total.push((0, embeds(sum_b, sum_a), format!("total deficiency {sum_b} exceeds total nullity {sum_a}")));
            let ib = rec.any("i.b", vec![chain, total]);

            let iiia = rec.all("iii.a", vec![phi_r_at(n)]);
            let mut total: Vec<Clause> = (1..n).map(phi_r_at).collect();
            total.push((
                0,
                !essentially_embeds(sum_a, sum_b),
                format!("total nullity {sum_a} embeds essentially in total deficiency {sum_b}"),
            ));
            let iiib = rec.any("iii.b", vec![vec![infinite_nullity_right(data)], total]);
            (ia && ib, iiia && iiib)
        }
        TheoremFamily::LeftFredholm => {
            let ia = rec.all("i.a", vec![phi_l_at(1)]);
            let mut chain: Vec<Clause> = (2..=n).map(closed).collect();
            chain.extend((2..=n).map(alpha_le_beta_prev));
            let ib = rec.any("i.b", vec![chain, (2..=n).map(phi_l_at).collect()]);
            let iiia = rec.all("iii.a", vec![phi_l_at(1)]);
            let iiib = rec.any("iii.b", vec![vec![infinite_deficiency_left(data)], (2..=n).map(phi_l_at).collect()]);
            (ia && ib, iiia && iiib)
        }
        TheoremFamily::RightFredholm => {
            let ia = rec.all("i.a", vec![phi_r_at(n)]);
            let mut chain: Vec<Clause> = (1..n).map(closed).collect();
            chain.extend((1..n).map(beta_le_alpha_next));
            let ib = rec.any("i.b", vec![chain, (1..n).map(phi_r_at).collect()]);
            let iiia = rec.all("iii.a", vec![phi_r_at(n)]);
            let iiib = rec.any("iii.b", vec![vec![infinite_nullity_right(data)], (1..n).map(phi_r_at).collect()]);
            (ia && ib, iiia && iiib)
        }
        TheoremFamily::Fredholm => {
            let ia = rec.all("i.a", vec![phi_l_at(1), phi_r_at(n)]);
            let strong = vec![(0, false, "unsupported: strong embedding".to_string())];
            let mut both: Vec<Clause> = (2..=n).map(phi_l_at).collect();
            both.extend((1..n).map(phi_r_at));
            let ib = rec.any("i.b", vec![strong, both.clone()]);
            let iiia = rec.all("iii.a", vec![phi_l_at(1), phi_r_at(n)]);
            let iiib = rec.any("iii.b", vec![vec![infinite_pair(data)], both]);
            (ia && ib, iiia && iiib)
        }
    };

    let local: Vec<LocalData> = data.iter().map(|e| e.local).collect();
    let certificates = if holds_iii { Vec::new() } else { necessity_certificates(&local, family) };
    ConditionReport {
        family,
        holds_i,
        holds_iii,
        witness_violations: rec.violations,
        certificates,
        local_data: local,
    }
}

/// Some `beta(D_j)` is infinite, `j < n`, with finite nullities on `2..=j`.
fn infinite_deficiency_left(data: &[EntryData]) -> Clause {
    let n = data.len();
    let hit = (1..n).find(|&j| {
        data[j - 1].local.beta().is_infinite() && (2..=j).all(|s| data[s - 1].local.alpha().is_finite())
    });
    match hit {
        Some(j) => (j, true, String::new()),
        None => (0, false, "no D_j with j < n has infinite deficiency behind finite nullities".into()),
    }
}

/// Some `alpha(D_j)` is infinite, `j > 1`, with finite deficiencies on `j..n`.
fn infinite_nullity_right(data: &[EntryData]) -> Clause {
    let n = data.len();
    let hit = (2..=n).find(|&j| {
        data[j - 1].local.alpha().is_infinite() && (j..n).all(|s| data[s - 1].local.beta().is_finite())
    });
    match hit {
        Some(j) => (j, true, String::new()),
        None => (0, false, "no D_j with j > 1 has infinite nullity ahead of finite deficiencies".into()),
    }
}

/// Infinite deficiency at `j` and infinite nullity at `k > j`, each behind
/// the respective finiteness guards.
fn infinite_pair(data: &[EntryData]) -> Clause {
    let n = data.len();
    let a = |k: usize| data[k - 1].local.alpha();
    let b = |k: usize| data[k - 1].local.beta();
    for j in 1..n {
        if !(b(j).is_infinite() && (2..=j).all(|s| a(s).is_finite())) {
            continue;
        }
        for k in j + 1..=n {
            if a(k).is_infinite() && (k..n).all(|s| b(s).is_finite()) {
                return (j, true, String::new());
            }
        }
    }
    (0, false, "no infinite deficiency followed by an infinite nullity".into())
}

/// Counting obstructions for the invertibility families.
pub fn necessity_certificates(local: &[LocalData], family: TheoremFamily) -> Vec<Certificate> {
    let n = local.len();
    let a = |k: usize| local[k - 1].alpha();
    let b = |k: usize| local[k - 1].beta();
    let mut out = Vec::new();
    let left = matches!(family, TheoremFamily::Left | TheoremFamily::Invertible);
    let right = matches!(family, TheoremFamily::Right | TheoremFamily::Invertible);
    if left {
        if !local[0].left_invertible() {
            out.push(Certificate::LeadingNotLeftInvertible);
        }
        for j in 2..=n {
            let rows: ExtCard = (1..j).map(b).sum();
            if a(j) > rows {
                out.push(Certificate::CornerBlockWide { index: j, rows, cols: a(j) });
            }
        }
    }
    if right {
        if !local[n - 1].right_invertible() {
            out.push(Certificate::TrailingNotRightInvertible);
        }
        for i in 1..n {
            let cols: ExtCard = (i + 1..=n).map(a).sum();
            if b(i) > cols {
                out.push(Certificate::CornerBlockTall { index: i, rows: b(i), cols });
            }
        }
    }
    out
}
