use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::completion::DiagonalTuple;
use crate::corpus::{self, CorpusKind};
use crate::extmath::ExtCard;
use crate::operators::{Atom, ComplexMatrix, OperatorHandle, StructuredKind, StructuredOperator, DEFAULT_TOL};
use crate::spectra::{Region, SpectralFamily};
use crate::theorems::{SearchTarget, TheoremFamily, EXAMPLES};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Analyze,
    Complete,
    Verify,
    Certify,
    Scan,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Analyze => "analyze",
            Command::Complete => "complete",
            Command::Verify => "verify",
            Command::Certify => "certify",
            Command::Scan => "scan",
        };
        f.write_str(s)
    }
}

/// Structured kind by name, e.g. `{"kind": "isometry", "dim": "inf"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KindSpec {
    pub kind: String,
    /// Deficiency of an isometry or nullity of a co-isometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<ExtCard>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub of: Option<Box<KindSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub accumulation_points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub value: [f64; 2],
    pub multiplicity: ExtCard,
}

impl KindSpec {
    pub fn named(kind: &str) -> Self {
        KindSpec { kind: kind.into(), dim: None, scalar: None, of: None, atoms: vec![], accumulation_points: vec![] }
    }

    pub fn to_kind(&self) -> Result<StructuredKind, String> {
        let need_dim = || self.dim.ok_or_else(|| format!("kind `{}` needs `dim`", self.kind));
        Ok(match self.kind.as_str() {
            "unilateral_shift" => StructuredKind::UnilateralShift,
            "backward_shift" => StructuredKind::BackwardShift,
            "identity" => StructuredKind::Identity,
            "zero" => StructuredKind::Zero,
            "isometry" => StructuredKind::Isometry(need_dim()?),
            "co_isometry" => StructuredKind::CoIsometry(need_dim()?),
            "scalar_multiple" => {
                let c = self.scalar.ok_or("kind `scalar_multiple` needs `scalar`")?;
                let inner = self.of.as_ref().ok_or("kind `scalar_multiple` needs `of`")?;
                StructuredKind::ScalarMultiple(pair(c), Box::new(inner.to_kind()?))
            }
            "diagonal" => StructuredKind::DiagonalOp {
                atoms: self.atoms.iter().map(|a| Atom { value: pair(a.value), multiplicity: a.multiplicity }).collect(),
                accumulation_points: self.accumulation_points.iter().copied().map(pair).collect(),
            },
            other => return Err(format!("unknown structured kind `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case", deny_unknown_fields)]
pub enum EntrySpec {
    /// Rows of `[re, im]` pairs.
    Dense { matrix: Vec<Vec<[f64; 2]>> },
    Structured(KindSpec),
}

impl EntrySpec {
    pub fn dense(m: &ComplexMatrix) -> Self {
        EntrySpec::Dense { matrix: m.to_rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect() }
    }

    fn to_handle(&self, k: usize) -> Result<OperatorHandle, String> {
        match self {
            EntrySpec::Dense { matrix } => {
                let rows: Vec<Vec<Complex64>> = matrix.iter().map(|r| r.iter().copied().map(pair).collect()).collect();
                let m = ComplexMatrix::from_rows(&rows).map_err(|e| format!("entry {k}: {e}"))?;
                if !m.is_square() {
                    return Err(format!("entry {k}: diagonal entries must be square, got {}x{}", m.rows(), m.cols()));
                }
                OperatorHandle::dense(m).map_err(|e| format!("entry {k}: {e}"))
            }
            EntrySpec::Structured(spec) => {
                let kind = spec.to_kind().map_err(|e| format!("entry {k}: {e}"))?;
                Ok(StructuredOperator::new(kind).map_err(|e| format!("entry {k}: {e}"))?.into())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub count: usize,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_trials() -> usize {
    200
}
fn default_seed() -> u64 {
    42
}
fn default_resolution() -> [usize; 2] {
    [128, 128]
}
fn default_n_max() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SearchTarget>,
    /// `[re_min, re_max, im_min, im_max]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<[f64; 4]>,
    #[serde(default = "default_resolution")]
    pub resolution: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<CorpusSpec>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            tol: default_tol(),
            trials: default_trials(),
            seed: default_seed(),
            target: None,
            region: None,
            resolution: default_resolution(),
            example: None,
            n_max: default_n_max(),
            corpus: None,
        }
    }
}

/// One self-contained batch job.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub command: Command,
    /// A theorem family for analyze/complete/verify, a spectral family for scan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<Vec<EntrySpec>>,
    #[serde(default)]
    pub params: Params,
}

fn pair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn by_name<T: serde::de::DeserializeOwned>(name: &str) -> Option<T> {
    serde_json::from_value(serde_json::Value::String(name.to_string())).ok()
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

impl Scenario {
    pub fn theorem_family(&self) -> Result<TheoremFamily, CliError> {
        let name = self.family.as_deref().ok_or_else(|| invalid(format!("command `{}` needs `family`", self.command)))?;
        by_name(name).ok_or_else(|| invalid(format!("`{name}` is not a theorem family (command `{}`)", self.command)))
    }

    pub fn spectral_family(&self) -> Result<SpectralFamily, CliError> {
        let name = self.family.as_deref().ok_or_else(|| invalid("command `scan` needs `family`"))?;
        by_name(name).ok_or_else(|| invalid(format!("`{name}` is not a spectral family (command `scan`)")))
    }

    pub fn region(&self) -> Result<Region, CliError> {
        let r = self.params.region.ok_or_else(|| invalid("command `scan` needs `params.region`"))?;
        Region::new(r[0], r[1], r[2], r[3]).map_err(|e| invalid(e.to_string()))
    }

    pub fn tuple(&self) -> Result<DiagonalTuple, CliError> {
        let entries = self.tuple.as_ref().ok_or_else(|| invalid(format!("command `{}` needs `tuple`", self.command)))?;
        let handles = entries
            .iter()
            .enumerate()
            .map(|(k, e)| e.to_handle(k + 1))
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        DiagonalTuple::new(handles).map_err(|e| invalid(e.to_string()))
    }

    /// Tuples a verify run covers: the explicit tuple or a seeded corpus.
    pub fn tuples(&self) -> Result<Vec<DiagonalTuple>, CliError> {
        match (&self.tuple, self.params.corpus) {
            (Some(_), None) => Ok(vec![self.tuple()?]),
            (None, Some(c)) => Ok(corpus::corpus(c.kind, c.count, self.params.seed)),
            (Some(_), Some(_)) => Err(invalid("give either `tuple` or `params.corpus`, not both")),
            (None, None) => Err(invalid("command `verify` needs `tuple` or `params.corpus`")),
        }
    }

    /// Checks that the command, family and parameters fit together.
    pub fn validate(&self) -> Result<(), CliError> {
        let p = &self.params;
        if !(p.tol > 0.0 && p.tol.is_finite()) {
            return Err(invalid(format!("`params.tol` must be positive, got {}", p.tol)));
        }
        match self.command {
            Command::Analyze => {
                self.theorem_family()?;
                self.tuple()?;
            }
            Command::Complete => {
                let f = self.theorem_family()?;
                if !matches!(f, TheoremFamily::Left | TheoremFamily::Right | TheoremFamily::Invertible) {
                    return Err(invalid(format!("command `complete` supports left, right and invertible, not `{f}`")));
                }
                if !self.tuple()?.is_dense() {
                    return Err(invalid("command `complete` needs a dense tuple"));
                }
            }
            Command::Verify => {
                self.theorem_family()?;
                if self.tuples()?.iter().any(|d| !d.is_dense()) {
                    return Err(invalid("command `verify` needs dense tuples"));
                }
            }
            Command::Certify => {
                let ex = p.example.as_deref().ok_or_else(|| invalid("command `certify` needs `params.example`"))?;
                if !EXAMPLES.contains(&ex) {
                    return Err(invalid(format!("unknown example `{ex}`; known: {}", EXAMPLES.join(", "))));
                }
                if p.n_max == 0 {
                    return Err(invalid("`params.n_max` must be positive"));
                }
            }
            Command::Scan => {
                self.spectral_family()?;
                self.tuple()?;
                self.region()?;
                if p.resolution.contains(&0) {
                    return Err(invalid("`params.resolution` must be positive"));
                }
            }
        }
        Ok(())
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let s: Scenario = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    s.validate()?;
    Ok(s)
}

pub fn serialize_scenario(s: &Scenario) -> String {
    serde_json::to_string_pretty(s).expect("scenario documents always serialize")
}
