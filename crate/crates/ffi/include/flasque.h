#ifndef FLASQUE_H
#define FLASQUE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum FlqStatus {
  FLQ_STATUS_OK = 0,
  FLQ_STATUS_NULL_POINTER = 1,
  FLQ_STATUS_INVALID_INPUT = 2,
  /**
   * A size bound was exceeded.
   */
  FLQ_STATUS_RESOURCE = 3,
  /**
   * An internal consistency check failed.
   */
  FLQ_STATUS_INTERNAL = 4,
  /**
   * An input string was not valid UTF-8.
   */
  FLQ_STATUS_UTF8 = 5,
  /**
   * The library panicked; the handle arguments should be considered lost.
   */
  FLQ_STATUS_PANIC = 6,
} FlqStatus;

/**
 * Opaque group handle.
 */
typedef struct FlqGroup FlqGroup;

/**
 * Opaque lattice handle.
 */
typedef struct FlqLattice FlqLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next library call on this thread.
 */
const char *flq_last_error(void);

/**
 * Library version as a static string.
 */
const char *flq_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void flq_string_free(char *s);

/**
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum FlqStatus flq_group_from_catalog(const char *name, struct FlqGroup **out);

/**
 * A group document, or a catalog name as a JSON string.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FlqStatus flq_group_from_json(const char *json, struct FlqGroup **out);

/**
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum FlqStatus flq_group_order(const struct FlqGroup *g, size_t *out);

/**
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum FlqStatus flq_group_to_json(const struct FlqGroup *g, char **out);

/**
 * # Safety
 * `g` must be null or a handle from this library, not yet freed.
 */
void flq_group_free(struct FlqGroup *g);

/**
 * A lattice document, or a lattice name such as `lenstra:3` (bare or as a
 * JSON string).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FlqStatus flq_lattice_from_json(const char *json, struct FlqLattice **out);

/**
 * The lattice `I_q` for `q = 2^n`, `2 <= n <= 6`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FlqStatus flq_lattice_lenstra(uint32_t n, struct FlqLattice **out);

/**
 * # Safety
 * `m` must be a live lattice handle; `out` must be writable.
 */
enum FlqStatus flq_lattice_rank(const struct FlqLattice *m, size_t *out);

/**
 * # Safety
 * `m` must be a live lattice handle; `out` must be writable.
 */
enum FlqStatus flq_lattice_to_json(const struct FlqLattice *m, char **out);

/**
 * A new handle for the group the lattice is defined over.
 *
 * # Safety
 * `m` must be a live lattice handle; `out` must be writable.
 */
enum FlqStatus flq_lattice_group(const struct FlqLattice *m, struct FlqGroup **out);

/**
 * # Safety
 * `m` must be null or a handle from this library, not yet freed.
 */
void flq_lattice_free(struct FlqLattice *m);

/**
 * Ĥ⁻¹ and H¹ over prime-power subgroups, or over all subgroups when
 * `all_subgroups` is true.
 *
 * # Safety
 * `m` must be a live lattice handle; `out` must be writable.
 */
enum FlqStatus flq_lattice_profile_json(const struct FlqLattice *m, bool all_subgroups, char **out);

/**
 * # Safety
 * `m` must be a live lattice handle; `out` must be writable.
 */
enum FlqStatus flq_lattice_resolve_json(const struct FlqLattice *m, char **out);

/**
 * Writes whether the lattice is a direct summand of a permutation lattice.
 *
 * # Safety
 * `m` must be a live lattice handle; `out` must be writable.
 */
enum FlqStatus flq_lattice_is_invertible(const struct FlqLattice *m, bool *out);

/**
 * The full decision, with witness section when invertible.
 *
 * # Safety
 * `m` must be a live lattice handle; `out` must be writable.
 */
enum FlqStatus flq_lattice_invertibility_json(const struct FlqLattice *m, char **out);

/**
 * Verdict on `k(G)`. `field` is `"Q"`, `"C"`, `"custom:<path>"` or a
 * field descriptor as JSON text.
 *
 * # Safety
 * `g` must be a live group handle, `field` a NUL-terminated string and `out`
 * writable.
 */
enum FlqStatus flq_noether_verdict_json(const struct FlqGroup *g, const char *field, char **out);

/**
 * # Safety
 * `m` must be a live lattice handle; `out` must be writable.
 */
enum FlqStatus flq_torus_verdict_json(const struct FlqLattice *m, char **out);

/**
 * Verdict on `k(M)^G`.
 *
 * # Safety
 * `m` must be a live lattice handle, `field` a NUL-terminated string and
 * `out` writable.
 */
enum FlqStatus flq_multiplicative_verdict_json(const struct FlqLattice *m,
                                               const char *field,
                                               char **out);

/**
 * Verdict over `C` on every monomial action of `G`.
 *
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum FlqStatus flq_monomial_universal_verdict_json(const struct FlqGroup *g, char **out);

/**
 * Verdict on one monomial action given as a JSON document.
 *
 * # Safety
 * `action` and `field` must be NUL-terminated strings; `out` must be
 * writable.
 */
enum FlqStatus flq_monomial_verdict_json(const char *action, const char *field, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLASQUE_H */
