#ifndef WEILMIX_H
#define WEILMIX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WmFamily {
  WM_FAMILY_GL = 0,
  WM_FAMILY_GU = 1,
  WM_FAMILY_SP_ODD = 2,
  WM_FAMILY_SP_EVEN = 3,
} WmFamily;

// Which transvections are multiplied (the two classes only differ for odd-q symplectic groups).
typedef enum WmPairMode {
  WM_PAIR_MODE_C_PAIRS = 0,
  WM_PAIR_MODE_C_STAR_PAIRS = 1,
  WM_PAIR_MODE_ALL = 2,
} WmPairMode;

typedef enum WmStatus {
  WM_STATUS_OK = 0,
  WM_STATUS_NULL_POINTER = 1,
  WM_STATUS_INVALID_ARGUMENT = 2,
  WM_STATUS_LIMIT_EXCEEDED = 3,
  WM_STATUS_UNSUPPORTED = 4,
  WM_STATUS_INDEX_OUT_OF_RANGE = 5,
  WM_STATUS_VERIFY_FAILED = 6,
  WM_STATUS_INTERNAL = 7,
  WM_STATUS_PANIC = 8,
} WmStatus;

// Weil character choice; `Default` picks the natural one for the family.
typedef enum WmVariant {
  WM_VARIANT_DEFAULT = 0,
  WM_VARIANT_LINEAR = 1,
  WM_VARIANT_UNITARY = 2,
} WmVariant;

typedef struct WmBounds WmBounds;

// A seeded Monte-Carlo source for one group. Call `k` on a sampler uses the
// stream `derive_seed(seed, k)`, so a sequence of calls is reproducible.
typedef struct WmSampler WmSampler;

// An exact distribution: rows of (label, "p/q", approximate value).
typedef struct WmTable WmTable;

// One row of a bound profile. Missing bounds are NaN.
typedef struct WmBoundRow {
  uint64_t r;
  double upper_tv;
  double lower_tv;
  double upper_closed;
  double lower_closed;
  double chebyshev;
} WmBoundRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *wm_version(void);

// Message for the last failed call on this thread (empty after a success).
// Valid until the next `wm_*` call on the same thread.
const char *wm_last_error(void);

// Codimension distribution of a product of two uniform transvections, keyed
// "0", "1", "2". `mode` matters for sp-odd only.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum WmStatus wm_pair_codim(enum WmFamily family,
                            uint32_t n,
                            uint64_t q,
                            enum WmPairMode mode,
                            struct WmTable **out);

// Fixed-space dimension distribution of a uniform element (unitary and symplectic groups).
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum WmStatus wm_fixed_space(enum WmFamily family, uint32_t n, uint64_t q, struct WmTable **out);

// Conjugacy class distribution of a product of two transvections of `Sp_2n(q)`, odd `q`, `n ≥ 2`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum WmStatus wm_sp_classes(uint32_t n, uint64_t q, enum WmPairMode mode, struct WmTable **out);

// # Safety
// `t` must be null or a live handle from this library.
size_t wm_table_len(const struct WmTable *t);

// Row `i`: label and exact value as NUL-terminated strings owned by the table,
// and the value as a double. Any out-pointer may be null.
//
// # Safety
// `t` must be a live handle; non-null out-pointers must be writable.
enum WmStatus wm_table_row(const struct WmTable *t,
                           size_t i,
                           const char **label,
                           const char **exact,
                           double *approx);

// # Safety
// `t` must be null or a handle from this library that has not been freed.
void wm_table_free(struct WmTable *t);

// Upper and lower total variation bounds for `r_min ≤ r ≤ r_max`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum WmStatus wm_bounds(enum WmFamily family,
                        uint32_t n,
                        uint64_t q,
                        enum WmVariant variant,
                        uint64_t r_min,
                        uint64_t r_max,
                        struct WmBounds **out);

// # Safety
// `b` must be null or a live handle.
size_t wm_bounds_len(const struct WmBounds *b);

// # Safety
// `b` must be a live handle and `row` writable.
enum WmStatus wm_bounds_row(const struct WmBounds *b, size_t i, struct WmBoundRow *row);

// # Safety
// `b` must be null or a handle from this library that has not been freed.
void wm_bounds_free(struct WmBounds *b);

// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum WmStatus wm_sampler_new(enum WmFamily family,
                             uint32_t n,
                             uint64_t q,
                             uint64_t seed,
                             struct WmSampler **out);

// Histogram of fixed-space dimensions of `samples` uniform elements, written
// to `counts[0..len]` (index = dimension).
//
// # Safety
// `s` must be a live sampler and `counts` must point to `len` writable integers.
enum WmStatus wm_sampler_fixed_dim(struct WmSampler *s,
                                   uint64_t samples,
                                   uint64_t *counts,
                                   size_t len);

// Histogram of fixed-space codimensions of products of `steps` uniform
// transvections, written to `counts[0..len]` (index = codimension).
// `WM_PAIR_MODE_ALL` draws from every transvection; otherwise from the class of `T(1, v)`.
//
// # Safety
// `s` must be a live sampler and `counts` must point to `len` writable integers.
enum WmStatus wm_sampler_transv_product(struct WmSampler *s,
                                        uint32_t steps,
                                        uint64_t samples,
                                        enum WmPairMode mode,
                                        uint64_t *counts,
                                        size_t len);

// # Safety
// `s` must be null or a handle from this library that has not been freed.
void wm_sampler_free(struct WmSampler *s);

// Run the verification suite (`full != 0` for the complete grids). Returns
// `WM_STATUS_VERIFY_FAILED` if any check fails; the number of failing checks
// goes to `failures` when it is non-null.
//
// # Safety
// `failures` must be null or writable.
enum WmStatus wm_verify(int32_t full, uint32_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEILMIX_H */
