//! Completions, necessity certificates and perturbation spectra for partial
//! upper triangular operator matrices
//!
//! ```text
//!        [ D_1  A_12  ...  A_1n ]
//!   T =  [  0   D_2   ...  A_2n ]
//!        [  .          .    .   ]
//!        [  0    0    ...  D_n  ]
//! ```
//!
//! The diagonal entries are fixed; the blocks above the diagonal are free.
//! The crate decides, from nullity and deficiency data of the `D_k`, whether
//! some choice of the free blocks makes `T` left/right invertible or
//! Fredholm, builds such a choice when the sufficient conditions hold, and
//! certifies impossibility when the necessary ones fail. Spectral points are
//! classified against inner and outer bounds of the intersection of spectra
//! over all completions.
//!
//! Diagonal entries are either dense complex matrices or infinite-dimensional
//! model operators with exact local rules (shifts, isometries, diagonal
//! operators). All subspaces are treated as complemented (Hilbert setting).

pub mod cli;
pub mod completion;
pub mod corpus;
pub mod error;
pub mod extmath;
pub mod operators;
pub mod spectra;
pub mod theorems;

pub use completion::{assemble, complete_invertible, complete_left, complete_right, corner_block, CompletionTuple, DiagonalTuple};
pub use error::{Error, Result};
pub use extmath::{embeds, essentially_embeds, ext_sum, ExtCard, INF};
pub use operators::{
    adjoint, cokernel_basis, kernel_basis, local_data, rank_of, realize_section, ComplexMatrix, LocalData,
    OperatorHandle, StructuredKind, StructuredOperator, DEFAULT_TOL,
};
pub use spectra::{classify_point, exact_intersection_n2, scan_grid, GridRaster, PointVerdict, Region, SpectralFamily};
pub use theorems::{
    certify_structured_example, check_conditions, fredholm_flags, random_completion, search_completion,
    verify_implications, ConditionReport, FredholmFlags, SearchTarget, TheoremFamily,
};
