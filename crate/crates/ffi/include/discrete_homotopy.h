#ifndef DISCRETE_HOMOTOPY_H
#define DISCRETE_HOMOTOPY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DhStatus {
  DH_STATUS_OK = 0,
  DH_STATUS_PARAM = 1,
  DH_STATUS_LOOKUP = 2,
  DH_STATUS_VALIDATION = 3,
  DH_STATUS_PRECONDITION = 4,
  DH_STATUS_BUDGET = 5,
  DH_STATUS_PARSE = 6,
  DH_STATUS_INTERNAL = 7,
  DH_STATUS_IO = 8,
  DH_STATUS_NULL_POINTER = 9,
  DH_STATUS_PANIC = 10,
} DhStatus;

/**
 * Opaque graph handle.
 */
typedef struct DhGraph DhGraph;

/**
 * Opaque graph-map handle.
 */
typedef struct DhMap DhMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Owned by the
 * library; valid until the next failing call.
 */
const char *dh_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be NULL.
 */
void dh_string_free(char *s);

/**
 * Builds a graph from a family spec such as `cycle,5` or `petersen`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum DhStatus dh_graph_from_family(const char *spec, struct DhGraph **out);

/**
 * Builds a graph from its JSON form (`vertices`, `edges`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum DhStatus dh_graph_from_json(const char *json, struct DhGraph **out);

/**
 * # Safety
 * `g` must come from this library or be NULL.
 */
void dh_graph_free(struct DhGraph *g);

/**
 * # Safety
 * `g` must be a live handle or NULL.
 */
uintptr_t dh_graph_vertex_count(const struct DhGraph *g);

/**
 * # Safety
 * `g` must be a live handle or NULL.
 */
uintptr_t dh_graph_edge_count(const struct DhGraph *g);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum DhStatus dh_graph_to_json(const struct DhGraph *g, char **out);

/**
 * Reads a map from JSON (`domain`, `codomain`, `map`). Graph references
 * are resolved against the current directory.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum DhStatus dh_map_from_json(const char *json, struct DhMap **out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum DhStatus dh_map_to_json(const struct DhMap *m, char **out);

/**
 * # Safety
 * `m` must come from this library or be NULL.
 */
void dh_map_free(struct DhMap *m);

/**
 * Presentation of π₁^r(G, base) as `<x1,... | ...>`.
 *
 * # Safety
 * `g` must be a live handle, `base` a NUL-terminated id, `out` writable.
 */
enum DhStatus dh_pi1_presentation(const struct DhGraph *g,
                                  const char *base,
                                  uintptr_t r,
                                  char **out);

/**
 * Name of π₁^r(G, base): `Z`, `F2`, `Z/2`, `1`, ... A result that the
 * coset budget could not certify is still written and the call returns
 * `Budget`.
 *
 * # Safety
 * `g` must be a live handle, `base` a NUL-terminated id, `out` writable.
 */
enum DhStatus dh_pi1_identify(const struct DhGraph *g,
                              const char *base,
                              uintptr_t r,
                              uintptr_t max_cosets,
                              char **out);

/**
 * Identifies a presentation `<a,b | ...>` and writes
 * `{"group": ..., "abelianization": ...}`.
 *
 * # Safety
 * `presentation` must be a NUL-terminated string; `out` writable.
 */
enum DhStatus dh_group_identify(const char *presentation, uintptr_t max_cosets, char **out);

/**
 * Checks that `m` is an r-covering. `pass` receives 1 or 0; `report`, if
 * not NULL, receives the certificate as JSON.
 *
 * # Safety
 * `m` must be a live handle; `pass` writable; `report` writable or NULL.
 */
enum DhStatus dh_cover_verify(const struct DhMap *m, uintptr_t r, int32_t *pass, char **report);

/**
 * Searches for a graph map G → H. On success `out` holds a new map, or
 * NULL when none exists. `Budget` means the search gave up after `cap`
 * nodes.
 *
 * # Safety
 * `g`, `h` must be live handles; `out` writable.
 */
enum DhStatus dh_find_hom(const struct DhGraph *g,
                          const struct DhGraph *h,
                          uint64_t cap,
                          struct DhMap **out);

/**
 * Homology of N_r(G) through degree 2 as JSON.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum DhStatus dh_ncomplex_homology(const struct DhGraph *g, uintptr_t r, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISCRETE_HOMOTOPY_H */
