/* C interface to the skewrank library. */

#ifndef SKEWRANK_H
#define SKEWRANK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Built-in group families for [`sk_group_family`].
 */
typedef enum SkFamily {
  /**
   * Coordinate permutations of C^n; params = [n].
   */
  SK_FAMILY_SYMMETRIC = 0,
  /**
   * Signed coordinate permutations; params = [n].
   */
  SK_FAMILY_HYPEROCTAHEDRAL = 1,
  /**
   * Signed permutations with an even number of sign changes; params = [n].
   */
  SK_FAMILY_DEMIHYPEROCTAHEDRAL = 2,
  /**
   * G(de, e, n); params = [d, e, n].
   */
  SK_FAMILY_IMPRIMITIVE = 3,
  /**
   * Symmetry group of the regular m-gon; params = [m].
   */
  SK_FAMILY_DIHEDRAL = 4,
  /**
   * Product of cyclic groups scaling each coordinate; params lists the
   * exponents a_1..a_k of the invariant x_1^{a_1} ... x_k^{a_k}.
   */
  SK_FAMILY_CYCLIC_PRODUCT = 5,
} SkFamily;

/**
 * Result of every library call.
 */
typedef enum SkStatus {
  /**
   * The call succeeded.
   */
  SK_STATUS_OK = 0,
  /**
   * A pointer argument was null or a string was not valid UTF-8.
   */
  SK_STATUS_BAD_ARGUMENT = 1,
  /**
   * The group or form specification was invalid or failed to parse.
   */
  SK_STATUS_BAD_SPEC = 2,
  /**
   * Group enumeration hit the element cap.
   */
  SK_STATUS_CAP_EXCEEDED = 3,
  /**
   * The requested eigenvalue order is not regular for the group.
   */
  SK_STATUS_NOT_REGULAR = 4,
  /**
   * A decomposition did not reproduce the expected form.
   */
  SK_STATUS_VERIFICATION_FAILED = 5,
  /**
   * The computation exceeds the built-in size budget.
   */
  SK_STATUS_BUDGET_EXCEEDED = 6,
  /**
   * An internal invariant was violated.
   */
  SK_STATUS_INTERNAL = 7,
} SkStatus;

/**
 * Opaque handle to a verified decomposition of a form into powers of
 * linear forms.
 */
typedef struct SkDecomposition SkDecomposition;

/**
 * Opaque handle to an enumerated reflection group.
 */
typedef struct SkGroup SkGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static string; never freed.
 */
const char *sk_version(void);

/**
 * Message for the most recent failure on the calling thread. The pointer
 * stays valid until the next failing call on the same thread; do not free
 * it.
 */
const char *sk_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 *
 * `s` must be null or a pointer obtained from a `char **` out parameter of
 * this library that has not been freed already.
 */
void sk_string_free(char *s);

/**
 * Builds one of the built-in group families. `params` carries the family
 * parameters as documented on [`SkFamily`]; `cap` bounds the number of
 * elements enumerated, with 0 selecting the default cap.
 *
 * # Safety
 *
 * `kind` must be a valid [`SkFamily`] value, `params` must point to
 * `nparams` readable integers (or be null when `nparams` is 0), and `out`
 * must be a valid writable pointer.
 */
enum SkStatus sk_group_family(enum SkFamily kind,
                              const uint32_t *params,
                              uintptr_t nparams,
                              uintptr_t cap,
                              struct SkGroup **out);

/**
 * Builds a group from a JSON configuration listing generator matrices, as
 * accepted by the command-line tool's `--config` option. `cap` of 0 selects
 * the default element cap; the config's own `cap` field, if present, wins.
 *
 * # Safety
 *
 * `json` must be a valid NUL-terminated string and `out` a valid writable
 * pointer.
 */
enum SkStatus sk_group_from_config(const char *json, uintptr_t cap, struct SkGroup **out);

/**
 * Releases a group handle.
 *
 * # Safety
 *
 * `g` must be null or a handle from this library not freed already.
 */
void sk_group_free(struct SkGroup *g);

/**
 * Number of elements in the group, or 0 if `g` is null.
 *
 * # Safety
 *
 * `g` must be null or a live group handle.
 */
uint64_t sk_group_order(const struct SkGroup *g);

/**
 * Dimension of the space the group acts on, or 0 if `g` is null.
 *
 * # Safety
 *
 * `g` must be null or a live group handle.
 */
uintptr_t sk_group_nvars(const struct SkGroup *g);

/**
 * Writes the group's order, degrees, reflection data and regular numbers
 * as a JSON object.
 *
 * # Safety
 *
 * `g` must be a live group handle and `out` a valid writable pointer.
 */
enum SkStatus sk_group_info_json(const struct SkGroup *g, char **out);

/**
 * Writes the group's fundamental skew invariant as a JSON object.
 *
 * # Safety
 *
 * `g` must be a live group handle and `out` a valid writable pointer.
 */
enum SkStatus sk_group_skew_json(const struct SkGroup *g, char **out);

/**
 * Writes the group back out as a generator-matrix JSON configuration
 * accepted by [`sk_group_from_config`].
 *
 * # Safety
 *
 * `g` must be a live group handle and `out` a valid writable pointer.
 */
enum SkStatus sk_group_config_json(const struct SkGroup *g, char **out);

/**
 * Decomposes the group's skew invariant into a sum of D-th powers of
 * linear forms, verifies the result exactly, and returns a handle to it.
 * `regular_number` selects the eigenvalue order to use; 0 selects the
 * largest regular number.
 *
 * # Safety
 *
 * `g` must be a live group handle and `out` a valid writable pointer.
 */
enum SkStatus sk_group_decompose(const struct SkGroup *g,
                                 uint32_t regular_number,
                                 struct SkDecomposition **out);

/**
 * Reconstructs a decomposition handle from its JSON form.
 *
 * # Safety
 *
 * `json` must be a valid NUL-terminated string and `out` a valid writable
 * pointer.
 */
enum SkStatus sk_decomposition_from_json(const char *json, struct SkDecomposition **out);

/**
 * Releases a decomposition handle.
 *
 * # Safety
 *
 * `d` must be null or a handle from this library not freed already.
 */
void sk_decomposition_free(struct SkDecomposition *d);

/**
 * Number of powers of linear forms in the decomposition, or 0 if `d` is
 * null.
 *
 * # Safety
 *
 * `d` must be null or a live decomposition handle.
 */
uintptr_t sk_decomposition_term_count(const struct SkDecomposition *d);

/**
 * Common exponent of the powers in the decomposition, or 0 if `d` is null.
 *
 * # Safety
 *
 * `d` must be null or a live decomposition handle.
 */
uint32_t sk_decomposition_exponent(const struct SkDecomposition *d);

/**
 * Writes the decomposition as a JSON object.
 *
 * # Safety
 *
 * `d` must be a live decomposition handle and `out` a valid writable
 * pointer.
 */
enum SkStatus sk_decomposition_json(const struct SkDecomposition *d, char **out);

/**
 * Checks that the decomposition expands to a nonzero scalar multiple of
 * the group's skew invariant. Returns `Ok` on an exact match and
 * `VerificationFailed` otherwise.
 *
 * # Safety
 *
 * `g` and `d` must be live handles from this library.
 */
enum SkStatus sk_group_verify_decomposition(const struct SkGroup *g,
                                            const struct SkDecomposition *d);

/**
 * Writes the apolar rank report for the group's skew invariant as JSON,
 * including the invariant-operator annihilation check and, when the bounds
 * meet, certification of the rank.
 *
 * # Safety
 *
 * `g` must be a live group handle and `out` a valid writable pointer.
 */
enum SkStatus sk_group_apolar_json(const struct SkGroup *g, char **out);

/**
 * Writes the apolar rank report for a textual form such as
 * `"x^5 - y^5"` as JSON. When `sylvester` is true and the form is binary,
 * the report also carries its exact rank.
 *
 * # Safety
 *
 * `form` must be a valid NUL-terminated string and `out` a valid writable
 * pointer.
 */
enum SkStatus sk_form_apolar_json(const char *form, bool sylvester, char **out);

/**
 * Runs the built-in check suite and writes its JSON report. `only` may be
 * null to run everything, or name a substring selecting a subset of
 * checks. The call succeeds as long as the suite runs; consult the
 * report's `failed` count for the outcome.
 *
 * # Safety
 *
 * `only` must be null or a valid NUL-terminated string, and `out` a valid
 * writable pointer.
 */
enum SkStatus sk_selftest_json(uint64_t seed, const char *only, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SKEWRANK_H */
