//! C ABI over `trion-core`.
//!
//! Objects cross the boundary as opaque pointers created by `trion_*_new`
//! style constructors and released with the matching `trion_*_free`. Every
//! fallible call returns a [`TrionStatus`]; on failure a message is available
//! from [`trion_last_error_message`] on the same thread until the next call.
//! Complex inputs are interleaved `re, im` pairs of `double`. Infinite
//! cardinalities are encoded as [`TRION_INF`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex64;
use trion_core::completion::{complete_invertible, complete_left, complete_right, CompletionTuple, DiagonalTuple};
use trion_core::operators::{
    local_data, rank_of, Atom, ComplexMatrix, OperatorHandle, StructuredKind, StructuredOperator,
};
use trion_core::spectra::{classify_point, scan_grid, Region, SpectralFamily, PGM_BOTH, PGM_NEITHER, PGM_UPPER_ONLY};
use trion_core::theorems::{check_conditions, TheoremFamily};
use trion_core::{assemble, Error, ExtCard};

/// Encodes an infinite nullity, deficiency or multiplicity.
pub const TRION_INF: u64 = u64::MAX;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrionStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    ShapeMismatch = 3,
    HypothesisViolated = 4,
    UnsupportedPoint = 5,
    UnsupportedKind = 6,
    NotDense = 7,
    UnknownExample = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrionKind {
    UnilateralShift = 0,
    BackwardShift = 1,
    Identity = 2,
    Zero = 3,
    /// Parameter: deficiency.
    Isometry = 4,
    /// Parameter: nullity.
    CoIsometry = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrionTheoremFamily {
    Left = 0,
    Right = 1,
    Invertible = 2,
    LeftWeyl = 3,
    RightWeyl = 4,
    LeftFredholm = 5,
    RightFredholm = 6,
    Fredholm = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrionSpectralFamily {
    LeftSpec = 0,
    RightSpec = 1,
    Spec = 2,
    LeftWeylSpec = 3,
    RightWeylSpec = 4,
    LeftEssSpec = 5,
    RightEssSpec = 6,
    EssSpec = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrionLocalData {
    pub alpha: u64,
    pub beta: u64,
    pub range_closed: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrionConditions {
    pub holds_sufficient: bool,
    pub holds_necessary: bool,
    pub violation_count: usize,
    pub certificate_count: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrionVerdict {
    pub in_lower: bool,
    pub in_upper: bool,
    pub upper_available: bool,
}

/// Opaque diagonal entry.
pub struct TrionOperator(OperatorHandle);

/// Opaque diagonal tuple.
pub struct TrionTuple(DiagonalTuple);

/// Opaque set of free blocks.
pub struct TrionCompletion(CompletionTuple);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(TrionStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::UnsupportedPoint { .. } => TrionStatus::UnsupportedPoint,
            Error::UnsupportedKind(_) => TrionStatus::UnsupportedKind,
            Error::ShapeMismatch(_) => TrionStatus::ShapeMismatch,
            Error::HypothesisViolated { .. } => TrionStatus::HypothesisViolated,
            Error::NotDense => TrionStatus::NotDense,
            Error::InvalidInput(_) => TrionStatus::InvalidInput,
            Error::UnknownExample(_) => TrionStatus::UnknownExample,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TrionStatus::NullPointer, format!("`{what}` is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TrionStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TrionStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TrionStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn complex_slice(p: *const f64, count: usize, what: &str) -> Result<Vec<Complex64>, Failure> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(null(what));
    }
    let raw = slice::from_raw_parts(p, 2 * count);
    Ok(raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

fn card(v: u64) -> ExtCard {
    if v == TRION_INF {
        ExtCard::Inf
    } else {
        ExtCard::Finite(v)
    }
}

fn raw_card(c: ExtCard) -> u64 {
    match c {
        ExtCard::Finite(v) => v,
        ExtCard::Inf => TRION_INF,
    }
}

fn theorem_family(f: TrionTheoremFamily) -> TheoremFamily {
    match f {
        TrionTheoremFamily::Left => TheoremFamily::Left,
        TrionTheoremFamily::Right => TheoremFamily::Right,
        TrionTheoremFamily::Invertible => TheoremFamily::Invertible,
        TrionTheoremFamily::LeftWeyl => TheoremFamily::LeftWeyl,
        TrionTheoremFamily::RightWeyl => TheoremFamily::RightWeyl,
        TrionTheoremFamily::LeftFredholm => TheoremFamily::LeftFredholm,
        TrionTheoremFamily::RightFredholm => TheoremFamily::RightFredholm,
        TrionTheoremFamily::Fredholm => TheoremFamily::Fredholm,
    }
}

fn spectral_family(f: TrionSpectralFamily) -> SpectralFamily {
    match f {
        TrionSpectralFamily::LeftSpec => SpectralFamily::LeftSpec,
        TrionSpectralFamily::RightSpec => SpectralFamily::RightSpec,
        TrionSpectralFamily::Spec => SpectralFamily::Spec,
        TrionSpectralFamily::LeftWeylSpec => SpectralFamily::LeftWeylSpec,
        TrionSpectralFamily::RightWeylSpec => SpectralFamily::RightWeylSpec,
        TrionSpectralFamily::LeftEssSpec => SpectralFamily::LeftEssSpec,
        TrionSpectralFamily::RightEssSpec => SpectralFamily::RightEssSpec,
        TrionSpectralFamily::EssSpec => SpectralFamily::EssSpec,
    }
}

fn boxed<T>(out: &mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn trion_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call on this thread.
#[no_mangle]
pub extern "C" fn trion_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Square dense matrix from `dim * dim` interleaved entries in row-major order.
///
/// # Safety
/// `entries` must point to `2 * dim * dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trion_operator_dense(
    entries: *const f64,
    dim: usize,
    out: *mut *mut TrionOperator,
) -> TrionStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if dim == 0 {
            return Err(Failure(TrionStatus::InvalidInput, "dimension must be positive".into()));
        }
        let values = complex_slice(entries, dim * dim, "entries")?;
        let m = ComplexMatrix::from_row_major(dim, dim, &values)?;
        boxed(out, TrionOperator(OperatorHandle::dense(m)?));
        Ok(())
    })
}

/// Parameter-free or single-parameter model operator. `param` is the
/// deficiency of an isometry or the nullity of a co-isometry and is ignored
/// for other kinds.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trion_operator_structured(
    kind: TrionKind,
    param: u64,
    out: *mut *mut TrionOperator,
) -> TrionStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let op = match kind {
            TrionKind::UnilateralShift => StructuredOperator::unilateral_shift(),
            TrionKind::BackwardShift => StructuredOperator::backward_shift(),
            TrionKind::Identity => StructuredOperator::identity(),
            TrionKind::Zero => StructuredOperator::zero(),
            TrionKind::Isometry => StructuredOperator::isometry(card(param)),
            TrionKind::CoIsometry => StructuredOperator::co_isometry(card(param)),
        };
        boxed(out, TrionOperator(op.into()));
        Ok(())
    })
}

/// Diagonal operator with `atom_count` atoms (interleaved values and
/// multiplicities) and `acc_count` accumulation points.
///
/// # Safety
/// Array arguments must hold the stated number of elements; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn trion_operator_diagonal(
    atom_values: *const f64,
    atom_multiplicities: *const u64,
    atom_count: usize,
    accumulation_points: *const f64,
    acc_count: usize,
    out: *mut *mut TrionOperator,
) -> TrionStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let values = complex_slice(atom_values, atom_count, "atom_values")?;
        let mults: &[u64] = if atom_count == 0 {
            &[]
        } else if atom_multiplicities.is_null() {
            return Err(null("atom_multiplicities"));
        } else {
            slice::from_raw_parts(atom_multiplicities, atom_count)
        };
        let atoms = values.into_iter().zip(mults).map(|(value, &m)| Atom { value, multiplicity: card(m) }).collect();
        let acc = complex_slice(accumulation_points, acc_count, "accumulation_points")?;
        boxed(out, TrionOperator(StructuredOperator::diagonal(atoms, acc)?.into()));
        Ok(())
    })
}

/// `(re + im i) * inner` for a model operator `inner`.
///
/// # Safety
/// `inner` must be a live operator; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trion_operator_scaled(
    re: f64,
    im: f64,
    inner: *const TrionOperator,
    out: *mut *mut TrionOperator,
) -> TrionStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let inner = deref(inner, "inner")?;
        let op = inner
            .0
            .as_structured()
            .ok_or_else(|| Failure(TrionStatus::InvalidInput, "only model operators can be scaled".into()))?;
        let kind = StructuredKind::ScalarMultiple(Complex64::new(re, im), Box::new(op.kind().clone()));
        boxed(out, TrionOperator(StructuredOperator::new(kind)?.into()));
        Ok(())
    })
}

/// # Safety
/// `op` must come from a `trion_operator_*` constructor, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn trion_operator_free(op: *mut TrionOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Nullity, deficiency and range closedness of `op - lambda`.
///
/// # Safety
/// `op` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trion_local_data(
    op: *const TrionOperator,
    re: f64,
    im: f64,
    tol: f64,
    out: *mut TrionLocalData,
) -> TrionStatus {
    guard(|| {
        let op = deref(op, "op")?;
        let out = out_ref(out, "out")?;
        let ld = local_data(&op.0, Complex64::new(re, im), tol)?;
        *out = TrionLocalData { alpha: raw_card(ld.alpha()), beta: raw_card(ld.beta()), range_closed: ld.range_closed() };
        Ok(())
    })
}

/// Tuple of copies of `count` operators; the inputs stay owned by the caller.
///
/// # Safety
/// `ops` must point to `count` live operators; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trion_tuple_new(
    ops: *const *const TrionOperator,
    count: usize,
    out: *mut *mut TrionTuple,
) -> TrionStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if ops.is_null() {
            return Err(null("ops"));
        }
        let handles = slice::from_raw_parts(ops, count)
            .iter()
            .map(|&p| deref(p, "ops[k]").map(|op| op.0.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        boxed(out, TrionTuple(DiagonalTuple::new(handles)?));
        Ok(())
    })
}

/// # Safety
/// `tuple` must come from [`trion_tuple_new`], or be NULL.
#[no_mangle]
pub unsafe extern "C" fn trion_tuple_free(tuple: *mut TrionTuple) {
    if !tuple.is_null() {
        drop(Box::from_raw(tuple));
    }
}

/// Evaluates the sufficient and necessary conditions at the origin.
///
/// # Safety
/// `tuple` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trion_check_conditions(
    tuple: *const TrionTuple,
    family: TrionTheoremFamily,
    tol: f64,
    out: *mut TrionConditions,
) -> TrionStatus {
    guard(|| {
        let tuple = deref(tuple, "tuple")?;
        let out = out_ref(out, "out")?;
        let r = check_conditions(&tuple.0, theorem_family(family), tol)?;
        *out = TrionConditions {
            holds_sufficient: r.holds_i,
            holds_necessary: r.holds_iii,
            violation_count: r.witness_violations.len(),
            certificate_count: r.certificates.len(),
        };
        Ok(())
    })
}

/// # Safety
/// `tuple` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trion_classify_point(
    tuple: *const TrionTuple,
    re: f64,
    im: f64,
    family: TrionSpectralFamily,
    tol: f64,
    out: *mut TrionVerdict,
) -> TrionStatus {
    guard(|| {
        let tuple = deref(tuple, "tuple")?;
        let out = out_ref(out, "out")?;
        let v = classify_point(&tuple.0, Complex64::new(re, im), spectral_family(family), tol)?;
        *out = TrionVerdict { in_lower: v.in_lower, in_upper: v.in_upper, upper_available: v.upper_available };
        Ok(())
    })
}

/// Superdiagonal completion of a dense tuple for the left, right or
/// invertible family, with the nullity and deficiency of the assembled matrix.
///
/// # Safety
/// `tuple` must be live; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn trion_complete(
    tuple: *const TrionTuple,
    family: TrionTheoremFamily,
    tol: f64,
    out: *mut *mut TrionCompletion,
    out_alpha: *mut usize,
    out_beta: *mut usize,
) -> TrionStatus {
    guard(|| {
        let tuple = deref(tuple, "tuple")?;
        let out = out_ref(out, "out")?;
        let out_alpha = out_ref(out_alpha, "out_alpha")?;
        let out_beta = out_ref(out_beta, "out_beta")?;
        let a = match family {
            TrionTheoremFamily::Left => complete_left(&tuple.0, tol)?,
            TrionTheoremFamily::Right => complete_right(&tuple.0, tol)?,
            TrionTheoremFamily::Invertible => complete_invertible(&tuple.0, tol)?,
            _ => {
                return Err(Failure(
                    TrionStatus::InvalidInput,
                    "completions are built for the left, right and invertible families".into(),
                ))
            }
        };
        let t = assemble(&tuple.0, &a)?;
        let r = rank_of(&t, tol);
        *out_alpha = t.cols() - r;
        *out_beta = t.rows() - r;
        boxed(out, TrionCompletion(a));
        Ok(())
    })
}

/// Number of nonzero-width blocks in a completion.
///
/// # Safety
/// `completion` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn trion_completion_block_count(completion: *const TrionCompletion) -> usize {
    completion.as_ref().map_or(0, |c| c.0.len())
}

/// Copies block `(row, col)` (1-based, `row < col`) into `buf` as interleaved
/// row-major entries. Absent blocks report a `0 x 0` shape.
///
/// # Safety
/// `completion` must be live; `buf` must hold `buf_len` doubles; the shape
/// pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn trion_completion_block(
    completion: *const TrionCompletion,
    row: usize,
    col: usize,
    out_rows: *mut usize,
    out_cols: *mut usize,
    buf: *mut f64,
    buf_len: usize,
) -> TrionStatus {
    guard(|| {
        let c = deref(completion, "completion")?;
        let rows = out_ref(out_rows, "out_rows")?;
        let cols = out_ref(out_cols, "out_cols")?;
        let Some(block) = c.0.get(row, col) else {
            (*rows, *cols) = (0, 0);
            return Ok(());
        };
        (*rows, *cols) = block.shape();
        let entries = block.entries_row_major();
        if buf_len < 2 * entries.len() {
            return Err(Failure(TrionStatus::BufferTooSmall, format!("need {} doubles", 2 * entries.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let dst = slice::from_raw_parts_mut(buf, 2 * entries.len());
        for (pair, z) in dst.chunks_exact_mut(2).zip(entries) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// # Safety
/// `completion` must come from [`trion_complete`], or be NULL.
#[no_mangle]
pub unsafe extern "C" fn trion_completion_free(completion: *mut TrionCompletion) {
    if !completion.is_null() {
        drop(Box::from_raw(completion));
    }
}

/// Scans the cell centers of a region into `nx * ny` grey levels (0 outside,
/// 128 upper bound only, 255 lower bound), row-major with the imaginary part
/// growing by row.
///
/// # Safety
/// `tuple` must be live; `buf` must hold `buf_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn trion_scan_grid(
    tuple: *const TrionTuple,
    family: TrionSpectralFamily,
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    nx: usize,
    ny: usize,
    tol: f64,
    buf: *mut u8,
    buf_len: usize,
) -> TrionStatus {
    guard(|| {
        let tuple = deref(tuple, "tuple")?;
        let cells = nx.checked_mul(ny).ok_or_else(|| Failure(TrionStatus::InvalidInput, "grid too large".into()))?;
        if buf_len < cells {
            return Err(Failure(TrionStatus::BufferTooSmall, format!("need {cells} bytes")));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let region = Region::new(re_min, re_max, im_min, im_max)?;
        let raster = scan_grid(&tuple.0, spectral_family(family), region, (nx, ny), tol)?;
        let dst = slice::from_raw_parts_mut(buf, cells);
        for (px, v) in dst.iter_mut().zip(&raster.verdicts) {
            *px = match (v.in_lower, v.in_upper) {
                (true, _) => PGM_BOTH,
                (false, true) => PGM_UPPER_ONLY,
                (false, false) => PGM_NEITHER,
            };
        }
        Ok(())
    })
}
