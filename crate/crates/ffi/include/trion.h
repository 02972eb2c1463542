#ifndef TRION_H
#define TRION_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Encodes an infinite nullity, deficiency or multiplicity.
 */
#define TRION_INF UINT64_MAX

typedef enum TrionStatus {
  TRION_STATUS_OK = 0,
  TRION_STATUS_NULL_POINTER = 1,
  TRION_STATUS_INVALID_INPUT = 2,
  TRION_STATUS_SHAPE_MISMATCH = 3,
  TRION_STATUS_HYPOTHESIS_VIOLATED = 4,
  TRION_STATUS_UNSUPPORTED_POINT = 5,
  TRION_STATUS_UNSUPPORTED_KIND = 6,
  TRION_STATUS_NOT_DENSE = 7,
  TRION_STATUS_UNKNOWN_EXAMPLE = 8,
  TRION_STATUS_BUFFER_TOO_SMALL = 9,
  TRION_STATUS_PANIC = 10,
} TrionStatus;

typedef enum TrionKind {
  TRION_KIND_UNILATERAL_SHIFT = 0,
  TRION_KIND_BACKWARD_SHIFT = 1,
  TRION_KIND_IDENTITY = 2,
  TRION_KIND_ZERO = 3,
  /**
   * Parameter: deficiency.
   */
  TRION_KIND_ISOMETRY = 4,
  /**
   * Parameter: nullity.
   */
  TRION_KIND_CO_ISOMETRY = 5,
} TrionKind;

typedef enum TrionTheoremFamily {
  TRION_THEOREM_FAMILY_LEFT = 0,
  TRION_THEOREM_FAMILY_RIGHT = 1,
  TRION_THEOREM_FAMILY_INVERTIBLE = 2,
  TRION_THEOREM_FAMILY_LEFT_WEYL = 3,
  TRION_THEOREM_FAMILY_RIGHT_WEYL = 4,
  TRION_THEOREM_FAMILY_LEFT_FREDHOLM = 5,
  TRION_THEOREM_FAMILY_RIGHT_FREDHOLM = 6,
  TRION_THEOREM_FAMILY_FREDHOLM = 7,
} TrionTheoremFamily;

typedef enum TrionSpectralFamily {
  TRION_SPECTRAL_FAMILY_LEFT_SPEC = 0,
  TRION_SPECTRAL_FAMILY_RIGHT_SPEC = 1,
  TRION_SPECTRAL_FAMILY_SPEC = 2,
  TRION_SPECTRAL_FAMILY_LEFT_WEYL_SPEC = 3,
  TRION_SPECTRAL_FAMILY_RIGHT_WEYL_SPEC = 4,
  TRION_SPECTRAL_FAMILY_LEFT_ESS_SPEC = 5,
  TRION_SPECTRAL_FAMILY_RIGHT_ESS_SPEC = 6,
  TRION_SPECTRAL_FAMILY_ESS_SPEC = 7,
} TrionSpectralFamily;

/**
 * Opaque set of free blocks.
 */
typedef struct TrionCompletion TrionCompletion;

/**
 * Opaque diagonal entry.
 */
typedef struct TrionOperator TrionOperator;

/**
 * Opaque diagonal tuple.
 */
typedef struct TrionTuple TrionTuple;

typedef struct TrionLocalData {
  uint64_t alpha;
  uint64_t beta;
  bool range_closed;
} TrionLocalData;

typedef struct TrionConditions {
  bool holds_sufficient;
  bool holds_necessary;
  size_t violation_count;
  size_t certificate_count;
} TrionConditions;

typedef struct TrionVerdict {
  bool in_lower;
  bool in_upper;
  bool upper_available;
} TrionVerdict;

/**
 * Library version as a static NUL-terminated string.
 */
const char *trion_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call on this thread.
 */
const char *trion_last_error_message(void);

/**
 * Square dense matrix from `dim * dim` interleaved entries in row-major order.
 *
 * # Safety
 * `entries` must point to `2 * dim * dim` doubles; `out` must be writable.
 */
enum TrionStatus trion_operator_dense(const double *entries,
                                      size_t dim,
                                      struct TrionOperator **out);

/**
 * Parameter-free or single-parameter model operator. `param` is the
 * deficiency of an isometry or the nullity of a co-isometry and is ignored
 * for other kinds.
 *
 * # Safety
 * `out` must be writable.
 */
enum TrionStatus trion_operator_structured(enum TrionKind kind,
                                           uint64_t param,
                                           struct TrionOperator **out);

/**
 * Diagonal operator with `atom_count` atoms (interleaved values and
 * multiplicities) and `acc_count` accumulation points.
 *
 * # Safety
 * Array arguments must hold the stated number of elements; `out` must be
 * writable.
 */
enum TrionStatus trion_operator_diagonal(const double *atom_values,
                                         const uint64_t *atom_multiplicities,
                                         size_t atom_count,
                                         const double *accumulation_points,
                                         size_t acc_count,
                                         struct TrionOperator **out);

/**
 * `(re + im i) * inner` for a model operator `inner`.
 *
 * # Safety
 * `inner` must be a live operator; `out` must be writable.
 */
enum TrionStatus trion_operator_scaled(double re,
                                       double im,
                                       const struct TrionOperator *inner,
                                       struct TrionOperator **out);

/**
 * # Safety
 * `op` must come from a `trion_operator_*` constructor, or be NULL.
 */
void trion_operator_free(struct TrionOperator *op);

/**
 * Nullity, deficiency and range closedness of `op - lambda`.
 *
 * # Safety
 * `op` must be live; `out` must be writable.
 */
enum TrionStatus trion_local_data(const struct TrionOperator *op,
                                  double re,
                                  double im,
                                  double tol,
                                  struct TrionLocalData *out);

/**
 * Tuple of copies of `count` operators; the inputs stay owned by the caller.
 *
 * # Safety
 * `ops` must point to `count` live operators; `out` must be writable.
 */
enum TrionStatus trion_tuple_new(const struct TrionOperator *const *ops,
                                 size_t count,
                                 struct TrionTuple **out);

/**
 * # Safety
 * `tuple` must come from [`trion_tuple_new`], or be NULL.
 */
void trion_tuple_free(struct TrionTuple *tuple);

/**
 * Evaluates the sufficient and necessary conditions at the origin.
 *
 * # Safety
 * `tuple` must be live; `out` must be writable.
 */
enum TrionStatus trion_check_conditions(const struct TrionTuple *tuple,
                                        enum TrionTheoremFamily family,
                                        double tol,
                                        struct TrionConditions *out);

/**
 * # Safety
 * `tuple` must be live; `out` must be writable.
 */
enum TrionStatus trion_classify_point(const struct TrionTuple *tuple,
                                      double re,
                                      double im,
                                      enum TrionSpectralFamily family,
                                      double tol,
                                      struct TrionVerdict *out);

/**
 * Superdiagonal completion of a dense tuple for the left, right or
 * invertible family, with the nullity and deficiency of the assembled matrix.
 *
 * # Safety
 * `tuple` must be live; output pointers must be writable.
 */
enum TrionStatus trion_complete(const struct TrionTuple *tuple,
                                enum TrionTheoremFamily family,
                                double tol,
                                struct TrionCompletion **out,
                                size_t *out_alpha,
                                size_t *out_beta);

/**
 * Number of nonzero-width blocks in a completion.
 *
 * # Safety
 * `completion` must be live or NULL.
 */
size_t trion_completion_block_count(const struct TrionCompletion *completion);

/**
 * Copies block `(row, col)` (1-based, `row < col`) into `buf` as interleaved
 * row-major entries. Absent blocks report a `0 x 0` shape.
 *
 * # Safety
 * `completion` must be live; `buf` must hold `buf_len` doubles; the shape
 * pointers must be writable.
 */
enum TrionStatus trion_completion_block(const struct TrionCompletion *completion,
                                        size_t row,
                                        size_t col,
                                        size_t *out_rows,
                                        size_t *out_cols,
                                        double *buf,
                                        size_t buf_len);

/**
 * # Safety
 * `completion` must come from [`trion_complete`], or be NULL.
 */
void trion_completion_free(struct TrionCompletion *completion);

/**
 * Scans the cell centers of a region into `nx * ny` grey levels (0 outside,
 * 128 upper bound only, 255 lower bound), row-major with the imaginary part
 * growing by row.
 *
 * # Safety
 * `tuple` must be live; `buf` must hold `buf_len` bytes.
 */
enum TrionStatus trion_scan_grid(const struct TrionTuple *tuple,
                                 enum TrionSpectralFamily family,
                                 double re_min,
                                 double re_max,
                                 double im_min,
                                 double im_max,
                                 size_t nx,
                                 size_t ny,
                                 double tol,
                                 uint8_t *buf,
                                 size_t buf_len);

#endif  /* TRION_H */
