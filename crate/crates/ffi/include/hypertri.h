#ifndef HYPERTRI_H
#define HYPERTRI_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HtStatus {
  HT_STATUS_OK = 0,
  HT_STATUS_INVALID_ARGUMENT = 1,
  HT_STATUS_NULL_POINTER = 2,
  HT_STATUS_TOO_LARGE = 3,
  HT_STATUS_NOT_APPLICABLE = 4,
  HT_STATUS_PARSE_ERROR = 5,
  HT_STATUS_INTERNAL = 6,
} HtStatus;

/**
 * Opaque instance handle.
 */
typedef struct HtParams HtParams;

/**
 * Opaque vertex-set handle.
 */
typedef struct HtVertexSet HtVertexSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *ht_last_error(void);

/**
 * Library version as a static string.
 */
const char *ht_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ht_string_free(char *s);

/**
 * Creates an instance. `exploratory` relaxes the distance rule to
 * `1 <= r <= n`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum HtStatus ht_params_new(uint32_t n, uint32_t r, bool exploratory, struct HtParams **out);

/**
 * # Safety
 * `params` must be null or a handle from [`ht_params_new`], not yet freed.
 */
void ht_params_free(struct HtParams *params);

/**
 * # Safety
 * `set` must be null or a live vertex-set handle.
 */
void ht_vertex_set_free(struct HtVertexSet *set);

/**
 * Number of members, 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live vertex-set handle.
 */
size_t ht_vertex_set_len(const struct HtVertexSet *set);

/**
 * Dimension `n`, 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live vertex-set handle.
 */
uint32_t ht_vertex_set_dim(const struct HtVertexSet *set);

/**
 * Mask of the `index`-th member in ascending order.
 *
 * # Safety
 * `set` must be a live vertex-set handle and `out` writable.
 */
enum HtStatus ht_vertex_set_get(const struct HtVertexSet *set, size_t index, uint64_t *out);

/**
 * Builds a set from `len` masks; duplicates are merged.
 *
 * # Safety
 * `bits` must point to `len` readable values (or be null when `len == 0`),
 * and `out` must be writable.
 */
enum HtStatus ht_vertex_set_from_bits(uint32_t n,
                                      const uint64_t *bits,
                                      size_t len,
                                      struct HtVertexSet **out);

/**
 * Parses the vertex-set text format. `expected_n == 0` takes the
 * dimension from the header or first line.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum HtStatus ht_vertex_set_parse(const char *text, uint32_t expected_n, struct HtVertexSet **out);

/**
 * Renders a set in the text format; `r == 0` omits `r` from the header.
 * Returns null on a null handle.
 *
 * # Safety
 * `set` must be null or a live vertex-set handle.
 */
char *ht_vertex_set_to_text(const struct HtVertexSet *set, uint32_t r);

/**
 * Antipodal-block independent set; `p == 0` picks the best prime.
 *
 * # Safety
 * `out` must be writable.
 */
enum HtStatus ht_construct_antipodal(uint32_t n, uint32_t p, uint32_t r, struct HtVertexSet **out);

/**
 * Fixed-bit triangle-free family on level `r/2`.
 *
 * # Safety
 * `params` must be a live handle and `out` writable.
 */
enum HtStatus ht_construct_fixed_bit(const struct HtParams *params, struct HtVertexSet **out);

/**
 * Random sampling plus alteration. `probability <= 0` selects the optimal
 * probability. When `trace_json` is non-null it receives the run's trace as
 * a JSON string owned by the caller.
 *
 * # Safety
 * `params` must be a live handle; `out` writable; `trace_json` null or
 * writable.
 */
enum HtStatus ht_construct_alteration(const struct HtParams *params,
                                      double probability,
                                      uint64_t seed,
                                      uint32_t trials,
                                      struct HtVertexSet **out,
                                      char **trace_json);

/**
 * Sets `*out_ok`; on a violation writes the least violating triple to
 * `witness[0..3]` when `witness` is non-null.
 *
 * # Safety
 * Handles must be live, `out_ok` writable, `witness` null or room for 3.
 */
enum HtStatus ht_check_triangle_free(const struct HtVertexSet *set,
                                     const struct HtParams *params,
                                     bool *out_ok,
                                     uint64_t *witness);

/**
 * Like [`ht_check_triangle_free`] with a 2-element witness (an edge).
 *
 * # Safety
 * Handles must be live, `out_ok` writable, `witness` null or room for 2.
 */
enum HtStatus ht_check_independent(const struct HtVertexSet *set,
                                   const struct HtParams *params,
                                   bool *out_ok,
                                   uint64_t *witness);

/**
 * Brute-force triangle count of the whole graph.
 *
 * # Safety
 * `params` must be live and `out` writable.
 */
enum HtStatus ht_count_triangles_graph(const struct HtParams *params, uint64_t *out);

/**
 * Triangles with all corners in `set`.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum HtStatus ht_count_triangles_in_set(const struct HtVertexSet *set,
                                        const struct HtParams *params,
                                        uint64_t *out);

/**
 * Exact triangle count from the closed form, as a decimal string; null on
 * failure.
 *
 * # Safety
 * `params` must be null or live.
 */
char *ht_triangle_count_formula(const struct HtParams *params);

/**
 * The full bound report as JSON (exact integers as decimal strings).
 *
 * # Safety
 * `params` must be null or live.
 */
char *ht_bound_report_json(const struct HtParams *params);

/**
 * Branch-and-bound maximum. `time_budget_secs <= 0` means no time limit.
 * `out_witness` may be null.
 *
 * # Safety
 * `params` must be live; `out_best` and `out_optimal` writable;
 * `out_witness` null or writable.
 */
enum HtStatus ht_oracle(const struct HtParams *params,
                        uint64_t max_nodes,
                        double time_budget_secs,
                        bool allow_symmetry,
                        size_t *out_best,
                        bool *out_optimal,
                        struct HtVertexSet **out_witness);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERTRI_H */
