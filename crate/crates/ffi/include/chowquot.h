#ifndef CHOWQUOT_H
#define CHOWQUOT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every function.
 */
typedef enum CqStatus {
  CQ_STATUS_OK = 0,
  CQ_STATUS_NULL_POINTER = 1,
  CQ_STATUS_INVALID_UTF8 = 2,
  CQ_STATUS_INVALID_INPUT = 3,
  CQ_STATUS_COMPUTE_ERROR = 4,
  CQ_STATUS_PANIC = 5,
} CqStatus;

/*
 Opaque certificate handle.
 */
typedef struct CqCertificate CqCertificate;

/*
 Opaque family handle.
 */
typedef struct CqFamily CqFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a family selector such as `hypersurface:n=3,alpha=1,beta=2`.

 # Safety
 `selector` must be a nul-terminated string; `out` must be valid for writes.
 The handle is released with `cq_family_free`.
 */
enum CqStatus cq_family_parse(const char *selector, struct CqFamily **out);

/*
 # Safety
 `family` must be null or a handle from `cq_family_parse` not yet freed.
 */
void cq_family_free(struct CqFamily *family);

/*
 Complex dimension of the variety.

 # Safety
 `family` must be a live handle; `out` must be valid for writes.
 */
enum CqStatus cq_family_dimension(const struct CqFamily *family, uint32_t *out);

/*
 # Safety
 `family` must be a live handle; `out` must be valid for writes.
 */
enum CqStatus cq_family_is_fano(const struct CqFamily *family, bool *out);

/*
 Chow quotient pair of the family as a JSON string.

 # Safety
 `family` must be a live handle; `out` must be valid for writes. The string
 is released with `cq_string_free`.
 */
enum CqStatus cq_chow_boundary_json(const struct CqFamily *family, char **out);

/*
 Runs the Kähler–Einstein certification chain.

 # Safety
 `family` must be a live handle; `out` must be valid for writes. The handle
 is released with `cq_certificate_free`.
 */
enum CqStatus cq_certify(const struct CqFamily *family, struct CqCertificate **out);

/*
 # Safety
 `certificate` must be a live handle; `out` must be valid for writes.
 */
enum CqStatus cq_certificate_is_certified(const struct CqCertificate *certificate, bool *out);

/*
 # Safety
 `certificate` must be a live handle; `out` must be valid for writes. The
 string is released with `cq_string_free`.
 */
enum CqStatus cq_certificate_to_json(const struct CqCertificate *certificate, char **out);

/*
 # Safety
 `certificate` must be null or a handle from `cq_certify` not yet freed.
 */
void cq_certificate_free(struct CqCertificate *certificate);

/*
 glct bound of `(P^2, B_γ)` for `γ` given as `"p/q"`; the result is `"p/q"` or `"inf"`.

 # Safety
 `gamma` must be a nul-terminated string; `out` must be valid for writes.
 The string is released with `cq_string_free`.
 */
enum CqStatus cq_glct_bound(const char *gamma, char **out);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void cq_string_free(char *s);

/*
 Message for the last failing call on this thread, or null. The pointer
 stays valid until the next call into the library on the same thread.
 */
const char *cq_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHOWQUOT_H */
