#ifndef HOPCOLOR_H
#define HOPCOLOR_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/* Marker for an uncolored node (matches HC_UNCOLORED in Rust). */
#define HC_UNCOLORED SIZE_MAX



typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_INPUT = 2,
  HC_STATUS_INCOMPLETE_COLORING = 3,
  HC_STATUS_TOPOLOGY = 4,
  HC_STATUS_NO_LATTICE = 5,
  HC_STATUS_PARSE = 6,
  HC_STATUS_IO = 7,
  HC_STATUS_INTERNAL = 8,
  HC_STATUS_PANIC = 9,
} HcStatus;

typedef enum HcScheme {
  HC_SCHEME_PRIO1_LINE = 0,
  HC_SCHEME_PRIO1_RANDOM = 1,
  HC_SCHEME_PRIO2_LINE = 2,
  HC_SCHEME_PRIO2_RANDOM = 3,
} HcScheme;

/**
 * Opaque coloring handle.
 */
typedef struct HcColoring HcColoring;

/**
 * Opaque graph handle. Grids keep their coordinates and range.
 */
typedef struct HcGraph HcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next `hc_*` call on the same thread.
 */
const char *hc_last_error_message(void);

/**
 * Unit-disk grid `width x height` with range `range_num / range_den`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum HcStatus hc_grid_new(size_t width,
                          size_t height,
                          uint64_t range_num,
                          uint64_t range_den,
                          struct HcGraph **out);

/**
 * Graph on `node_count` nodes from `edge_count` pairs stored flat in
 * `edges` (`2 * edge_count` ids).
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable ids (may be NULL when
 * `edge_count` is 0); `out` must be writable.
 */
enum HcStatus hc_graph_from_edges(size_t node_count,
                                  const size_t *edges,
                                  size_t edge_count,
                                  struct HcGraph **out);

/**
 * # Safety
 * `g` must come from this library and not be freed twice. NULL is ignored.
 */
void hc_graph_free(struct HcGraph *g);

/**
 * # Safety
 * `g` must be a live handle or NULL (returns 0).
 */
size_t hc_graph_node_count(const struct HcGraph *g);

/**
 * # Safety
 * `g` must be a live handle or NULL (returns 0).
 */
size_t hc_graph_edge_count(const struct HcGraph *g);

/**
 * Coloring from `len` colors. Pass `HC_UNCOLORED` for uncolored nodes.
 *
 * # Safety
 * `colors` must point to `len` readable values; `out` must be writable.
 */
enum HcStatus hc_coloring_new(const size_t *colors, size_t len, struct HcColoring **out);

/**
 * # Safety
 * `c` must come from this library and not be freed twice. NULL is ignored.
 */
void hc_coloring_free(struct HcColoring *c);

/**
 * # Safety
 * `c` must be a live handle or NULL (returns 0).
 */
size_t hc_coloring_len(const struct HcColoring *c);

/**
 * Number of distinct colors used.
 *
 * # Safety
 * `c` must be a live handle or NULL (returns 0).
 */
size_t hc_coloring_color_count(const struct HcColoring *c);

/**
 * Color of `node`, or `HC_UNCOLORED`.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum HcStatus hc_coloring_get(const struct HcColoring *c, size_t node, size_t *out);

/**
 * Writes whether `c` is a valid h-hop coloring of `g`. In strategic mode
 * the breadth-first tree rooted at `root` must also be respected. An
 * incomplete coloring is an error, not `false`.
 *
 * # Safety
 * `g`, `c` must be live handles; `out_valid` must be writable.
 */
enum HcStatus hc_is_valid(const struct HcGraph *g,
                          const struct HcColoring *c,
                          size_t h,
                          bool strategic,
                          size_t root,
                          bool *out_valid);

/**
 * Runs SERENA. Line schemes use grid rows on grids and node ids otherwise.
 * `out_rounds` may be NULL.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum HcStatus hc_serena(const struct HcGraph *g,
                        enum HcScheme scheme,
                        uint64_t seed,
                        size_t h,
                        bool strategic,
                        size_t root,
                        struct HcColoring **out,
                        size_t *out_rounds);

/**
 * Colors a grid handle with the built-in 3-hop pattern for its range.
 *
 * # Safety
 * `g` must be a live grid handle; `out` must be writable.
 */
enum HcStatus hc_pattern_color(const struct HcGraph *g,
                               size_t anchor_color,
                               struct HcColoring **out);

/**
 * FirstFit over `order` (a permutation of the node ids).
 *
 * # Safety
 * `order` must point to `len` readable ids; `g` must be a live handle;
 * `out` must be writable.
 */
enum HcStatus hc_firstfit(const struct HcGraph *g,
                          size_t h,
                          const size_t *order,
                          size_t len,
                          struct HcColoring **out);

/**
 * Exact h-hop chromatic number within `budget` search nodes. `out_proven`
 * is false when the budget ran out and the result is only an upper bound.
 * `out_chromatic` and `out_proven` may be NULL.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum HcStatus hc_exact(const struct HcGraph *g,
                       size_t h,
                       bool strategic,
                       size_t root,
                       uint64_t budget,
                       struct HcColoring **out,
                       size_t *out_chromatic,
                       bool *out_proven);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOPCOLOR_H */
