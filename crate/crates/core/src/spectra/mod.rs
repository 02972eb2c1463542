//! Inner and outer bounds for the intersection of spectra over all completions.
//!
//! For a spectral family (left, right, two-sided, and their essential and
//! Weyl variants) every point `lambda` is tested against two unions of sets
//! built from the local data of `D_k - lambda`:
//!
//! * the lower union, contained in the intersection of the spectra of all
//!   completions;
//! * the upper union, containing that intersection.
//!
//! Both are evaluated clause by clause and reported per set, so a raster can
//! show which condition put a point in.

mod export;

pub use export::{write_csv, write_pgm, PGM_BOTH, PGM_NEITHER, PGM_UPPER_ONLY};

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::completion::DiagonalTuple;
use crate::error::{Error, Result};
use crate::extmath::{embeds, essentially_embeds, ExtCard};
use crate::theorems::{entry_data, EntryData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralFamily {
    LeftSpec,
    RightSpec,
    Spec,
    LeftWeylSpec,
    RightWeylSpec,
    LeftEssSpec,
    RightEssSpec,
    EssSpec,
}

impl SpectralFamily {
    pub const ALL: [SpectralFamily; 8] = [
        SpectralFamily::LeftSpec,
        SpectralFamily::RightSpec,
        SpectralFamily::Spec,
        SpectralFamily::LeftWeylSpec,
        SpectralFamily::RightWeylSpec,
        SpectralFamily::LeftEssSpec,
        SpectralFamily::RightEssSpec,
        SpectralFamily::EssSpec,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpectralFamily::LeftSpec => "left_spec",
            SpectralFamily::RightSpec => "right_spec",
            SpectralFamily::Spec => "spec",
            SpectralFamily::LeftWeylSpec => "left_weyl_spec",
            SpectralFamily::RightWeylSpec => "right_weyl_spec",
            SpectralFamily::LeftEssSpec => "left_ess_spec",
            SpectralFamily::RightEssSpec => "right_ess_spec",
            SpectralFamily::EssSpec => "ess_spec",
        }
    }
}

impl fmt::Display for SpectralFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointVerdict {
    pub lambda: Complex64,
    pub in_lower: bool,
    pub in_upper: bool,
    /// Membership in each named set of either union.
    pub delta_detail: Vec<(String, bool)>,
    /// False when no outer bound is known; `in_upper` is then `true`.
    pub upper_available: bool,
}

/// Named sets making up the two unions of a family.
struct Bounds {
    sets: Vec<(String, bool)>,
    lower: Vec<usize>,
    upper: Vec<usize>,
    upper_available: bool,
}

impl Bounds {
    fn new() -> Self {
        Bounds { sets: Vec::new(), lower: Vec::new(), upper: Vec::new(), upper_available: true }
    }

    fn add(&mut self, name: String, member: bool, lower: bool, upper: bool) {
        let idx = self.sets.len();
        self.sets.push((name, member));
        if lower {
            self.lower.push(idx);
        }
        if upper {
            self.upper.push(idx);
        }
    }

    fn lower(&mut self, name: String, member: bool) {
        self.add(name, member, true, false);
    }

    fn upper(&mut self, name: String, member: bool) {
        self.add(name, member, false, true);
    }

    fn both(&mut self, name: String, member: bool) {
        self.add(name, member, true, true);
    }
}

fn bounds(data: &[EntryData], family: SpectralFamily) -> Bounds {
    let n = data.len();
    let a = |k: usize| data[k - 1].local.alpha();
    let b = |k: usize| data[k - 1].local.beta();
    let c = |k: usize| data[k - 1].local.range_closed();
    let q = |k: usize| data[k - 1].closure_codim;
    let sum = |it: &mut dyn Iterator<Item = ExtCard>| -> ExtCard { it.sum() };
    let prefix_b = |k: usize| sum(&mut (1..k).map(b));
    let suffix_a = |k: usize| sum(&mut (k + 1..=n).map(a));

    let sigma_l = !(a(1).is_zero() && c(1));
    let sigma_r = !b(n).is_zero();
    let sigma_le = !(a(1).is_finite() && c(1));
    let sigma_re = !b(n).is_finite();

    let mut out = Bounds::new();
    match family {
        SpectralFamily::LeftSpec => {
            out.both("sigma_l(D1)".into(), sigma_l);
            for k in 2..=n {
                out.lower(format!("delta_{k}"), a(k) > prefix_b(k));
            }
            for k in 2..=n {
                out.upper(format!("delta'_{k}"), a(k) > b(k - 1));
            }
            for k in 2..=n {
                out.upper(format!("delta''_{k}"), !c(k));
            }
        }
        SpectralFamily::RightSpec => {
            out.both(format!("sigma_r(D{n})"), sigma_r);
            for k in 1..n {
                out.lower(format!("delta_{k}"), b(k) > suffix_a(k));
            }
            for k in 1..n {
                out.upper(format!("delta'_{k}"), b(k) > a(k + 1));
            }
            for k in 1..n {
                out.upper(format!("delta''_{k}"), !c(k));
            }
        }
        SpectralFamily::Spec => {
            out.both("sigma_l(D1)".into(), sigma_l);
            out.both(format!("sigma_r(D{n})"), sigma_r);
            for k in 2..n {
                out.lower(format!("delta_{k}"), a(k) > prefix_b(k) || b(k) > suffix_a(k));
            }
            out.lower(format!("delta_{n}"), a(n) > prefix_b(n) || b(1) > suffix_a(1));
            for k in 1..n {
                out.upper(format!("delta'_{k}"), a(k + 1) != b(k));
            }
            for k in 2..n {
                out.upper(format!("delta''_{k}"), !c(k));
            }
        }
        SpectralFamily::LeftWeylSpec | SpectralFamily::LeftEssSpec => {
            out.both("sigma_le(D1)".into(), sigma_le);
            for k in 2..=n {
                out.lower(format!("delta_{k}"), a(k).is_infinite() && prefix_b(k).is_finite());
            }
            let sum_a = sum(&mut (1..=n).map(a));
            let sum_q = sum(&mut (1..=n).map(q));
            let weyl = family == SpectralFamily::LeftWeylSpec;
            if weyl {
                out.lower(format!("delta_{}", n + 1), essentially_embeds(sum_q, sum_a));
            }
            for k in 2..=n {
                out.upper(format!("delta'_{k}"), !embeds(a(k), q(k - 1)));
            }
            if weyl {
                out.upper(format!("delta'_{}", n + 1), !embeds(sum_a, sum_q));
                let tail_a = sum(&mut (2..=n).map(a));
                out.upper("delta'".into(), b(n).is_finite() && tail_a.is_infinite());
            }
            for k in 2..=n {
                out.upper(format!("delta''_{k}"), !c(k));
            }
        }
        SpectralFamily::RightWeylSpec | SpectralFamily::RightEssSpec => {
            out.both(format!("sigma_re(D{n})"), sigma_re);
            for k in 1..n {
                out.lower(format!("delta_{k}"), b(k).is_infinite() && suffix_a(k).is_finite());
            }
            let sum_a = sum(&mut (1..=n).map(a));
            let sum_q = sum(&mut (1..=n).map(q));
            let weyl = family == SpectralFamily::RightWeylSpec;
            if weyl {
                out.lower(format!("delta_{}", n + 1), essentially_embeds(sum_a, sum_q));
            }
            for k in 1..n {
                out.upper(format!("delta'_{k}"), !embeds(q(k), a(k + 1)));
            }
            if weyl {
                out.upper(format!("delta'_{}", n + 1), !embeds(sum_q, sum_a));
                let head_b = sum(&mut (1..n).map(b));
                out.upper("delta'".into(), a(1).is_finite() && head_b.is_infinite());
            }
            for k in 1..n {
                out.upper(format!("delta''_{k}"), !c(k));
            }
        }
        SpectralFamily::EssSpec => {
            out.lower("sigma_le(D1)".into(), sigma_le);
            out.lower(format!("sigma_re(D{n})"), sigma_re);
            let left_part = |k: usize| a(k).is_infinite() && prefix_b(k).is_finite();
            let right_part = |k: usize| b(k).is_infinite() && suffix_a(k).is_finite();
            for k in 2..n {
                out.lower(format!("delta_{k}"), left_part(k) || right_part(k));
            }
            out.lower(format!("delta_{n}"), left_part(n) || right_part(1));
            out.upper("upper_bound_unavailable".into(), true);
            out.upper_available = false;
        }
    }
    out
}

/// Classifies one point from precomputed entry data.
pub fn classify_data(data: &[EntryData], lambda: Complex64, family: SpectralFamily) -> PointVerdict {
    let b = bounds(data, family);
    let in_lower = b.lower.iter().any(|&i| b.sets[i].1);
    let in_upper = b.upper.iter().any(|&i| b.sets[i].1);
    debug_assert!(!in_lower || in_upper, "lower bound escaped the upper bound at {lambda}");
    PointVerdict { lambda, in_lower, in_upper, delta_detail: b.sets, upper_available: b.upper_available }
}

/// Names of the per-set columns for a family and tuple length.
pub fn detail_names(family: SpectralFamily, n: usize) -> Vec<String> {
    let data = vec![
        EntryData {
            local: crate::operators::LocalData::new(ExtCard::ZERO, ExtCard::ZERO, true).expect("valid"),
            closure_codim: ExtCard::ZERO,
        };
        n
    ];
    bounds(&data, family).sets.into_iter().map(|s| s.0).collect()
}

pub fn classify_point(d: &DiagonalTuple, lambda: Complex64, family: SpectralFamily, tol: f64) -> Result<PointVerdict> {
    classify_point_within(d, lambda, family, tol, tol)
}

/// Like [`classify_point`] with an explicit closeness band for structured entries.
pub fn classify_point_within(
    d: &DiagonalTuple,
    lambda: Complex64,
    family: SpectralFamily,
    tol: f64,
    band: f64,
) -> Result<PointVerdict> {
    Ok(classify_data(&entry_data(d, lambda, tol, band)?, lambda, family))
}

/// Membership in the intersection of spectra of all completions of a
/// two-entry tuple, which has a closed form.
pub fn exact_intersection_n2(d: &DiagonalTuple, lambda: Complex64, tol: f64) -> Result<bool> {
    if d.len() != 2 {
        return Err(Error::InvalidInput(format!("closed form needs n = 2, got n = {}", d.len())));
    }
    let data = entry_data(d, lambda, tol, tol)?;
    let (d1, d2) = (data[0].local, data[1].local);
    Ok(!d1.left_invertible() || !d2.right_invertible() || d2.alpha() != d1.beta())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let r = Region { re_min, re_max, im_min, im_max };
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) && re_min < re_max && im_min < im_max;
        if !ok {
            return Err(Error::InvalidInput(format!("degenerate region {r:?}")));
        }
        Ok(r)
    }

    /// Half the diagonal of one cell.
    pub fn half_diagonal(&self, nx: usize, ny: usize) -> f64 {
        let dx = (self.re_max - self.re_min) / nx as f64;
        let dy = (self.im_max - self.im_min) / ny as f64;
        0.5 * dx.hypot(dy)
    }

    /// Center of cell `(ix, iy)`; `iy` grows with the imaginary part.
    pub fn cell_center(&self, nx: usize, ny: usize, ix: usize, iy: usize) -> Complex64 {
        let dx = (self.re_max - self.re_min) / nx as f64;
        let dy = (self.im_max - self.im_min) / ny as f64;
        Complex64::new(self.re_min + (ix as f64 + 0.5) * dx, self.im_min + (iy as f64 + 0.5) * dy)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRaster {
    pub family: SpectralFamily,
    pub region: Region,
    pub resolution: (usize, usize),
    /// Closeness band used for structured entries.
    pub band: f64,
    /// Row-major, one row per imaginary-part step, lowest row first.
    pub verdicts: Vec<PointVerdict>,
}

impl GridRaster {
    pub fn at(&self, ix: usize, iy: usize) -> &PointVerdict {
        &self.verdicts[iy * self.resolution.0 + ix]
    }
}

/// Thread count requested through `TRION_THREADS`, if any.
pub fn requested_threads() -> Option<usize> {
    std::env::var("TRION_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Classifies every cell center of `region`.
///
/// Structured entries use the larger of `tol` and the cell half-diagonal as
/// their band, so critical curves show up as a band one cell wide. Results do
/// not depend on the number of threads.
pub fn scan_grid(
    d: &DiagonalTuple,
    family: SpectralFamily,
    region: Region,
    resolution: (usize, usize),
    tol: f64,
) -> Result<GridRaster> {
    let (nx, ny) = resolution;
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidInput("resolution must be positive".into()));
    }
    let band = if d.is_dense() { tol } else { tol.max(region.half_diagonal(nx, ny)) };
    let run = || -> Result<Vec<PointVerdict>> {
        (0..nx * ny)
            .into_par_iter()
            .map(|idx| {
                let lambda = region.cell_center(nx, ny, idx % nx, idx / nx);
                classify_point_within(d, lambda, family, tol, band)
            })
            .collect()
    };
    let verdicts = match requested_threads() {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(GridRaster { family, region, resolution, band, verdicts })
}
