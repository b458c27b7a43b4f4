/* Generated by cbindgen; do not edit. */

#ifndef MINMATCH_H
#define MINMATCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MmStatus {
  MM_STATUS_OK = 0,
  MM_STATUS_NULL_POINTER = 1,
  MM_STATUS_INVALID_UTF8 = 2,
  MM_STATUS_PARSE_ERROR = 3,
  MM_STATUS_INVALID_ARGUMENT = 4,
  MM_STATUS_DOMAIN_ERROR = 5,
  MM_STATUS_RESOURCE_GUARD = 6,
  MM_STATUS_PANIC = 7,
} MmStatus;

/**
 * Opaque multigraph handle.
 */
typedef struct MmGraph MmGraph;

/**
 * Result of the minimally-k-matchable test.
 */
typedef struct MmMinimality {
  uint64_t k;
  bool is_k_matchable;
  bool is_minimal;
  bool has_witness;
  /**
   * Edge id whose deletion keeps k matchings; valid when `has_witness`.
   */
  size_t witness_edge;
  /**
   * Matching count, capped at 2k - 1.
   */
  uint64_t count;
  bool count_exact;
} MmMinimality;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses mg-v1 text into a new graph handle.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum MmStatus mm_graph_parse(const char *text, struct MmGraph **out);

/**
 * Releases a graph handle. Null is ignored.
 *
 * # Safety
 * `g` must come from `mm_graph_parse` and not be used afterwards.
 */
void mm_graph_free(struct MmGraph *g);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum MmStatus mm_graph_vertex_count(const struct MmGraph *g, size_t *out);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum MmStatus mm_graph_edge_count(const struct MmGraph *g, size_t *out);

/**
 * Counts perfect matchings, stopping at `cap` unless it is zero.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum MmStatus mm_count_matchings(const struct MmGraph *g, uint64_t cap, uint64_t *out);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum MmStatus mm_minimality(const struct MmGraph *g, uint64_t k, struct MmMinimality *out);

/**
 * Writes the reduction trace as JSON.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum MmStatus mm_reduce_json(const struct MmGraph *g, char **out);

/**
 * Writes the classification record as JSON.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum MmStatus mm_classify_json(const struct MmGraph *g, uint64_t k, char **out);

/**
 * Writes the canonical mg-v1 text and the automorphism group order,
 * saturated at `UINT64_MAX`. `out_automorphisms` may be null.
 *
 * # Safety
 * `g` must be a live handle, `out_canonical` writable.
 */
enum MmStatus mm_canonical_form(const struct MmGraph *g,
                                char **out_canonical,
                                uint64_t *out_automorphisms);

/**
 * Runs the family search and writes the report as JSON. `workers = 0`
 * uses every available core.
 *
 * # Safety
 * `out` must be writable.
 */
enum MmStatus mm_search_family_json(uint64_t k, size_t max_vertices, size_t workers, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void mm_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *mm_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINMATCH_H */
