//! Scenario-driven batch front end behind the `trion` binary.
//!
//! Exit codes: 0 success, 1 I/O, 2 parse, 3 validation, 4 hypothesis
//! violated, 5 unsupported point, 6 verification failure.

mod samples;
mod scenario;

pub use samples::{sample_scenarios, scan_scenarios};
pub use scenario::{
    parse_scenario, serialize_scenario, AtomSpec, Command, CorpusSpec, EntrySpec, KindSpec, Params, Scenario,
};

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::completion::{assemble, CompletionTuple, complete_invertible, complete_left, complete_right, dense_defects};
use crate::error::Error;
use crate::operators::rank_of;
use crate::spectra::{scan_grid, write_csv, write_pgm};
use crate::theorems::{certify_structured_example, check_conditions, verify_implications, TheoremFamily};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{0}")]
    Hypothesis(Error),
    #[error("{0}")]
    Unsupported(Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse { .. } => 2,
            CliError::Validation(_) => 3,
            CliError::Hypothesis(_) => 4,
            CliError::Unsupported(_) => 5,
            CliError::Verification(_) => 6,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::HypothesisViolated { .. } => CliError::Hypothesis(e),
            Error::UnsupportedPoint { .. } => CliError::Unsupported(e),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Serialize)]
struct CompletionDoc<'a> {
    name: &'a str,
    family: TheoremFamily,
    blocks: &'a CompletionTuple,
    alpha: usize,
    beta: usize,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Runs a validated scenario, writing the text report to `out` and any
/// artifacts into `out_dir`.
pub fn run(s: &Scenario, out_dir: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let tol = s.params.tol;
    let mut report = format!("scenario: {}\ncommand: {}\n", s.name, s.command);
    let result = match s.command {
        Command::Analyze => analyze(s, tol, &mut report),
        Command::Complete => complete(s, tol, out_dir, &mut report),
        Command::Verify => verify(s, tol, &mut report),
        Command::Certify => certify(s, tol, &mut report),
        Command::Scan => scan(s, tol, out_dir, &mut report),
    };
    out.write_all(report.as_bytes())?;
    out.flush()?;
    result
}

fn analyze(s: &Scenario, tol: f64, w: &mut String) -> Result<(), CliError> {
    let family = s.theorem_family()?;
    let d = s.tuple()?;
    let r = check_conditions(&d, family, tol)?;
    let _ = writeln!(w, "family: {family}\n\n{:>3} {:>6} {:>6} {:>7}", "k", "alpha", "beta", "closed");
    for (k, ld) in r.local_data.iter().enumerate() {
        let _ = writeln!(w, "{:>3} {:>6} {:>6} {:>7}", k + 1, ld.alpha().to_string(), ld.beta().to_string(), yes(ld.range_closed()));
    }
    let _ = writeln!(w, "\nsufficient conditions (i): {}", yes(r.holds_i));
    let _ = writeln!(w, "necessary conditions (iii): {}", yes(r.holds_iii));
    for v in &r.witness_violations {
        let _ = writeln!(w, "  failed {} at {}: {}", v.condition, v.index, v.detail);
    }
    for c in &r.certificates {
        let _ = writeln!(w, "  certificate: {c}");
    }
    Ok(())
}

fn complete(s: &Scenario, tol: f64, out_dir: &Path, w: &mut String) -> Result<(), CliError> {
    let family = s.theorem_family()?;
    let d = s.tuple()?;
    let built = match family {
        TheoremFamily::Left => complete_left(&d, tol),
        TheoremFamily::Right => complete_right(&d, tol),
        _ => complete_invertible(&d, tol),
    };
    let a = match built {
        Ok(a) => a,
        Err(e @ Error::HypothesisViolated { .. }) => {
            let defects = dense_defects(&d, tol)?;
            let n = defects.len();
            let rows: usize = defects[..n - 1].iter().map(|x| x.1).sum();
            let cols: usize = defects[1..].iter().map(|x| x.0).sum();
            let _ = writeln!(w, "family: {family}\n{e}");
            let _ = writeln!(w, "corner block: {rows} complement rows x {cols} kernel columns");
            for c in check_conditions(&d, family, tol)?.certificates {
                let _ = writeln!(w, "certificate: {c}");
            }
            return Err(CliError::Hypothesis(e));
        }
        Err(e) => return Err(e.into()),
    };
    let t = assemble(&d, &a)?;
    let r = rank_of(&t, tol);
    let (alpha, beta) = (t.cols() - r, t.rows() - r);
    let doc = CompletionDoc {
        name: &s.name,
        family,
        blocks: &a,
        alpha,
        beta,
    };
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join("completion.json");
    fs::write(&path, serde_json::to_string_pretty(&doc).expect("completion documents serialize"))?;
    let _ = writeln!(w, "family: {family}\nblocks: {}\nassembled alpha: {alpha}\nassembled beta: {beta}", a.len());
    let _ = writeln!(w, "written: {}", path.display());
    Ok(())
}

fn verify(s: &Scenario, tol: f64, w: &mut String) -> Result<(), CliError> {
    let family = s.theorem_family()?;
    let tuples = s.tuples()?;
    let (mut broken, mut gaps, mut reached) = (0usize, 0usize, 0usize);
    for (idx, d) in tuples.iter().enumerate() {
        let r = verify_implications(d, family, s.params.trials, s.params.seed.wrapping_add(idx as u64), tol)?;
        reached += usize::from(r.holds_ii);
        gaps += usize::from(r.gap);
        if !r.ok() {
            broken += 1;
            let _ = writeln!(w, "tuple {idx}: broken {}", r.violations.join(", "));
        }
    }
    let _ = writeln!(
        w,
        "family: {family}\ntuples: {}\ncompletion found: {reached}\ngaps between conditions: {gaps}\nbroken implications: {broken}",
        tuples.len()
    );
    if broken > 0 {
        return Err(CliError::Verification(format!("{broken} tuple(s) broke an implication")));
    }
    Ok(())
}

fn certify(s: &Scenario, tol: f64, w: &mut String) -> Result<(), CliError> {
    let name = s.params.example.as_deref().unwrap_or_default();
    let r = certify_structured_example(name, s.params.n_max, tol)?;
    let _ = writeln!(w, "example: {}\nsections: 1..={}\nsmallest singular value: {:.12}", r.name, r.n_max, r.sigma_min);
    for (check, ok) in &r.checks {
        let _ = writeln!(w, "  [{}] {check}", if *ok { "ok" } else { "FAIL" });
    }
    if !r.passed {
        return Err(CliError::Verification(format!("example `{}` missed a bound", r.name)));
    }
    Ok(())
}

fn scan(s: &Scenario, tol: f64, out_dir: &Path, w: &mut String) -> Result<(), CliError> {
    let family = s.spectral_family()?;
    let d = s.tuple()?;
    let [nx, ny] = s.params.resolution;
    let raster = scan_grid(&d, family, s.region()?, (nx, ny), tol)?;
    fs::create_dir_all(out_dir)?;
    let csv = out_dir.join("scan.csv");
    let pgm = out_dir.join("scan.pgm");
    write_csv(&raster, BufWriter::new(File::create(&csv)?))?;
    write_pgm(&raster, BufWriter::new(File::create(&pgm)?))?;
    let lower = raster.verdicts.iter().filter(|v| v.in_lower).count();
    let upper = raster.verdicts.iter().filter(|v| v.in_upper).count();
    let _ = writeln!(w, "family: {family}\ncells: {}\nin lower bound: {lower}\nin upper bound: {upper}", nx * ny);
    if raster.verdicts.first().is_some_and(|v| !v.upper_available) {
        let _ = writeln!(w, "upper bound unavailable for this family; in_upper is reported as 1");
    }
    let _ = writeln!(w, "written: {}\nwritten: {}", csv.display(), pgm.display());
    Ok(())
}
