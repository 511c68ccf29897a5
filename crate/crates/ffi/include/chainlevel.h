#ifndef CHAINLEVEL_H
#define CHAINLEVEL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every function.
 */
typedef enum {
  CLP_STATUS_OK = 0,
  CLP_STATUS_NULL_POINTER = 1,
  CLP_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, unknown element, cycle or too many elements.
   */
  CLP_STATUS_INVALID_POSET = 3,
  CLP_STATUS_PARAM_OUT_OF_RANGE = 4,
  CLP_STATUS_BUDGET_EXCEEDED = 5,
  /**
   * An internal consistency check failed.
   */
  CLP_STATUS_INVARIANT_VIOLATED = 6,
  CLP_STATUS_PANIC = 7,
} ClpStatus;

typedef enum {
  CLP_POLYTOPE_CHAIN = 0,
  CLP_POLYTOPE_ORDER = 1,
} ClpPolytope;

typedef enum {
  CLP_VARIANT_CANONICAL = 0,
  CLP_VARIANT_ANTICANONICAL = 1,
} ClpVariant;

/**
 * Opaque poset handle.
 */
typedef struct ClpPoset ClpPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library from the same thread.
 */
const char *clp_last_error(void);

/**
 * Library version as a static string.
 */
const char *clp_version(void);

/**
 * Parses `{"elements": [...], "covers": [[lo, hi], ...]}`.
 * `max_elements` of 0 means the default bound.
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out` a writable pointer.
 */
ClpStatus clp_poset_from_json(const char *json, size_t max_elements, ClpPoset **out);

/**
 * Builds a named example poset. Parameters of 0 take their defaults.
 *
 * # Safety
 * `name` must be a valid nul-terminated string and `out` a writable pointer.
 */
ClpStatus clp_poset_example(const char *name, size_t n, size_t m1, size_t m2, ClpPoset **out);

/**
 * # Safety
 * `p` must be null or a handle from this library that has not been freed.
 */
void clp_poset_free(ClpPoset *p);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t clp_poset_len(const ClpPoset *p);

/**
 * The poset serialized back to JSON. Free with `clp_string_free`.
 *
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
ClpStatus clp_poset_to_json(const ClpPoset *p, char **out);

/**
 * Level verdict for one polytope and grading. `budget` of 0 means unlimited.
 *
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
ClpStatus clp_is_level(const ClpPoset *p,
                       ClpPolytope polytope,
                       ClpVariant variant,
                       uint64_t budget,
                       bool *out);

/**
 * Lowest generator degree for `eps` in {+1, -1}.
 *
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
ClpStatus clp_min_degree(const ClpPoset *p, int32_t eps, int64_t *out);

/**
 * Highest generator degree for `eps` in {+1, -1}.
 *
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
ClpStatus clp_max_degree(const ClpPoset *p, int32_t eps, uint64_t budget, int64_t *out);

/**
 * Full report as JSON: the four level verdicts with witnesses and the
 * generator degrees for both gradings. With `brute_force` the degrees come
 * from exhaustive search instead. Free the result with `clp_string_free`.
 *
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
ClpStatus clp_analyze_json(const ClpPoset *p, bool brute_force, uint64_t budget, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void clp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHAINLEVEL_H */
