#ifndef IMTHETA_H
#define IMTHETA_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum ImtStatus {
  IMT_STATUS_OK = 0,
  IMT_STATUS_NULL_ARGUMENT = 1,
  IMT_STATUS_INVALID_UTF8 = 2,
  IMT_STATUS_INVALID_FIELD = 3,
  IMT_STATUS_SYNTAX_ERROR = 4,
  IMT_STATUS_INDEX_OUT_OF_RANGE = 5,
  IMT_STATUS_MISMATCHED_CONTEXT = 6,
  IMT_STATUS_POSITIVE_CHARACTERISTIC = 7,
  IMT_STATUS_ZERO_DENOMINATOR = 8,
  IMT_STATUS_INVALID_INPUT = 9,
  IMT_STATUS_INTERNAL_ERROR = 10,
} ImtStatus;

/**
 * Opaque Laurent polynomial.
 */
typedef struct ImtLaurent ImtLaurent;

/**
 * Opaque polynomial in `z_1..z_n, u_1..u_n`.
 */
typedef struct ImtPoly ImtPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an expression such as `"u1^2*z1^4"` in `nvars` variable pairs
 * over `field` (`"rational"`, `"gaussian"` or `"fp:P"`).
 *
 * # Safety
 * `src` and `field` must be nul-terminated strings; `out` must be writable.
 */
enum ImtStatus imt_poly_parse(const char *src,
                              size_t nvars,
                              const char *field,
                              struct ImtPoly **out);

/**
 * Reads the JSON polynomial format.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum ImtStatus imt_poly_from_json(const char *json, struct ImtPoly **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, not yet freed.
 */
void imt_poly_free(struct ImtPoly *p);

/**
 * # Safety
 * `p` must be null or a live handle.
 */
size_t imt_poly_nvars(const struct ImtPoly *p);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum ImtStatus imt_poly_to_string(const struct ImtPoly *p, char **out);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum ImtStatus imt_poly_to_json(const struct ImtPoly *p, char **out);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum ImtStatus imt_poly_add(const struct ImtPoly *a, const struct ImtPoly *b, struct ImtPoly **out);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum ImtStatus imt_poly_mul(const struct ImtPoly *a, const struct ImtPoly *b, struct ImtPoly **out);

/**
 * `E(f)`: every `u_i` acts as `d/dz_i`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum ImtStatus imt_eval_e(const struct ImtPoly *p, struct ImtPoly **out);

/**
 * `Z(f)`, a Laurent polynomial in `z`. Characteristic zero only.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum ImtStatus imt_eval_z(const struct ImtPoly *p, struct ImtLaurent **out);

/**
 * Laplace transform in `z`, a Laurent polynomial in `u`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum ImtStatus imt_laplace(const struct ImtPoly *p, struct ImtLaurent **out);

/**
 * Decides whether `p` lies in the image of the `Theta` family.
 *
 * # Safety
 * `p` must be a live handle; `is_member` must be writable.
 */
enum ImtStatus imt_member_theta(const struct ImtPoly *p, bool *is_member);

/**
 * # Safety
 * `p` must be null or a live Laurent handle.
 */
void imt_laurent_free(struct ImtLaurent *p);

/**
 * Renders with variable letter `z`, or `u` when `use_u` is set.
 *
 * # Safety
 * `p` must be a live Laurent handle; `out` must be writable.
 */
enum ImtStatus imt_laurent_to_string(const struct ImtLaurent *p, bool use_u, char **out);

/**
 * # Safety
 * `p` must be a live Laurent handle; `out` must be writable.
 */
enum ImtStatus imt_laurent_to_json(const struct ImtLaurent *p, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void imt_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *imt_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IMTHETA_H */
