#ifndef REFUTEKIT_H
#define REFUTEKIT_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum RkStatus {
  RK_STATUS_OK = 0,
  RK_STATUS_INVALID_ARGUMENT = 1,
  RK_STATUS_PARSE = 2,
  RK_STATUS_IO = 3,
  RK_STATUS_GUARD = 4,
  RK_STATUS_UNSUPPORTED = 5,
  RK_STATUS_INTERNAL = 6,
  RK_STATUS_NULL_POINTER = 7,
  RK_STATUS_PANIC = 8,
} RkStatus;

/**
 * Opaque refutation certificate.
 */
typedef struct RkCertificate RkCertificate;

/**
 * Opaque XOR instance.
 */
typedef struct RkXorInstance RkXorInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread. Empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *rk_last_error_message(void);

/**
 * Read an XOR instance, format picked from the extension.
 *
 * # Safety
 * `path` must be a valid C string and `out` a writable pointer.
 */
enum RkStatus rk_xor_instance_read(const char *path, struct RkXorInstance **out);

/**
 * Uniformly random k-XOR instance with random signs.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum RkStatus rk_xor_instance_generate(uint32_t n,
                                       uint32_t k,
                                       size_t m,
                                       uint64_t seed,
                                       struct RkXorInstance **out);

/**
 * # Safety
 * `inst` must come from this library and not be freed already. Null is ignored.
 */
void rk_xor_instance_free(struct RkXorInstance *inst);

/**
 * Number of variables, arity and number of clauses.
 *
 * # Safety
 * `inst` must be a live handle; output pointers must be writable.
 */
enum RkStatus rk_xor_instance_dims(const struct RkXorInstance *inst,
                                   uint32_t *n,
                                   uint32_t *k,
                                   size_t *m);

/**
 * Refute at level `ell`. `certificate` may be null when only the value is wanted.
 *
 * # Safety
 * `inst` must be a live handle; `alg_val` writable; `certificate` null or writable.
 */
enum RkStatus rk_refute_poly(const struct RkXorInstance *inst,
                             size_t ell,
                             double eps,
                             double *alg_val,
                             struct RkCertificate **certificate);

/**
 * Serialize a certificate. Release the string with [`rk_string_free`].
 *
 * # Safety
 * `cert` must be a live handle and `out` writable.
 */
enum RkStatus rk_certificate_to_json(const struct RkCertificate *cert, char **out);

/**
 * Parse a certificate from JSON.
 *
 * # Safety
 * `json` must be a valid C string and `out` writable.
 */
enum RkStatus rk_certificate_from_json(const char *json, struct RkCertificate **out);

/**
 * # Safety
 * `cert` must come from this library and not be freed already. Null is ignored.
 */
void rk_certificate_free(struct RkCertificate *cert);

/**
 * # Safety
 * `s` must be a string returned by this library. Null is ignored.
 */
void rk_string_free(char *s);

/**
 * Recompute a certificate. `inst` may be null, which skips the digest and
 * instance checks. `*ok` is set to whether the replay matched.
 *
 * # Safety
 * `cert` must be a live handle, `inst` null or live, outputs writable.
 */
enum RkStatus rk_certificate_replay(const struct RkCertificate *cert,
                                    const struct RkXorInstance *inst,
                                    bool *ok,
                                    double *recomputed);

/**
 * Exact value by enumeration. Fails with `Guard` on large instances.
 *
 * # Safety
 * `inst` must be a live handle and `out` writable.
 */
enum RkStatus rk_brute_force_val(const struct RkXorInstance *inst, double *out);

/**
 * Build and check a disjoint even-cover witness. Writes the certified
 * upper bound and the number of covers used.
 *
 * # Safety
 * `inst` must be a live handle; outputs writable.
 */
enum RkStatus rk_fko_build_verify(const struct RkXorInstance *inst,
                                  size_t max_len,
                                  size_t want,
                                  uint64_t seed,
                                  double *bound,
                                  size_t *covers);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REFUTEKIT_H */
