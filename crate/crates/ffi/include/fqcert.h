#ifndef FQCERT_H
#define FQCERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FqMode {
  FQ_MODE_AUTO = 0,
  FQ_MODE_STRONG = 1,
  FQ_MODE_WEAK = 2,
} FqMode;

// Result codes shared by every entry point.
typedef enum FqStatus {
  FQ_STATUS_OK = 0,
  FQ_STATUS_NULL_POINTER = 1,
  FQ_STATUS_INVALID_UTF8 = 2,
  FQ_STATUS_BAD_SYNTAX = 3,
  FQ_STATUS_RANK_MISMATCH = 4,
  FQ_STATUS_TRIVIAL_WORD = 5,
  FQ_STATUS_ELEMENTS_CONJUGATE = 6,
  FQ_STATUS_SEARCH_EXHAUSTED = 7,
  FQ_STATUS_NOT_INDEPENDENT = 8,
  FQ_STATUS_MALFORMED = 9,
  FQ_STATUS_BAD_ARGUMENT = 10,
  FQ_STATUS_OUT_OF_RANGE = 11,
  FQ_STATUS_INTERNAL = 12,
  FQ_STATUS_PANIC = 13,
} FqStatus;

// A non-conjugacy or omnipotence certificate.
typedef struct FqCertificate FqCertificate;

// The facts checked by a verifier and the verdict.
typedef struct FqReport FqReport;

// A reduced free-group word.
typedef struct FqWord FqWord;

// Search limits. Obtain defaults from `fq_caps_default`.
typedef struct FqCaps {
  uint64_t max_index;
  uint64_t max_prime;
  uint64_t max_rounds;
  uint64_t jobs;
} FqCaps;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message for the last failed call on this thread; empty when none.
// Valid until the next failing call on the same thread.
const char *fq_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not have been freed.
void fq_string_free(char *s);

struct FqCaps fq_caps_default(void);

// Parses `text` (`a`–`z` generators, `A`–`Z` inverses, `1` for the
// identity) over `rank` generators.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum FqStatus fq_word_parse(const char *text, size_t rank, struct FqWord **out);

// # Safety
// `w` must come from `fq_word_parse` and not have been freed.
void fq_word_free(struct FqWord *w);

// The word in text syntax; release with `fq_string_free`.
//
// # Safety
// `w` must be a live word handle.
char *fq_word_to_string(const struct FqWord *w);

// Decides conjugacy of two words.
//
// # Safety
// `a`, `b` must be live word handles; `out` must be writable.
enum FqStatus fq_oracle_conjugate(const struct FqWord *a, const struct FqWord *b, bool *out);

// Certifies that `a` and `b` are not conjugate. When they are conjugate the
// status is `ElementsConjugate` and, if `conjugator` is non-null, a word `h`
// with `h⁻¹ a h = b` is written there.
//
// # Safety
// `a`, `b` must be live word handles; `caps` may be null for defaults;
// `out` must be writable; `conjugator` may be null.
enum FqStatus fq_certify_nonconjugate(const struct FqWord *a,
                                      const struct FqWord *b,
                                      enum FqMode mode,
                                      const struct FqCaps *caps,
                                      struct FqCertificate **out,
                                      struct FqWord **conjugator);

// Certifies that the `len` elements can be given orders `targets[i]·K` in
// one finite quotient.
//
// # Safety
// `elements` and `targets` must point to `len` entries; `caps` may be null;
// `out` must be writable.
enum FqStatus fq_certify_omnipotence(const struct FqWord *const *elements,
                                     const uint64_t *targets,
                                     size_t len,
                                     const struct FqCaps *caps,
                                     struct FqCertificate **out);

// # Safety
// `c` must come from this library and not have been freed.
void fq_certificate_free(struct FqCertificate *c);

// Canonical JSON text; release with `fq_string_free`.
//
// # Safety
// `c` must be a live certificate handle.
char *fq_certificate_to_json(const struct FqCertificate *c);

// Parses certificate JSON. Only the shape is checked; use `fq_verify`.
//
// # Safety
// `text` must be NUL-terminated; `out` must be writable.
enum FqStatus fq_certificate_from_json(const char *text, struct FqCertificate **out);

// Independently re-checks a certificate.
//
// # Safety
// `c` must be a live certificate handle; `out` must be writable.
enum FqStatus fq_verify(const struct FqCertificate *c, struct FqReport **out);

// # Safety
// `r` must be a live report handle.
bool fq_report_accepted(const struct FqReport *r);

// # Safety
// `r` must be a live report handle.
size_t fq_report_fact_count(const struct FqReport *r);

// Description of fact `i`, owned by the report; null when out of range.
//
// # Safety
// `r` must be a live report handle; `passed` may be null.
const char *fq_report_fact(const struct FqReport *r, size_t i, bool *passed);

// Number of element orders computed (omnipotence certificates only).
//
// # Safety
// `r` must be a live report handle.
size_t fq_report_order_count(const struct FqReport *r);

// # Safety
// `r` must be a live report handle; `out` must be writable.
enum FqStatus fq_report_order(const struct FqReport *r, size_t i, uint64_t *out);

// # Safety
// `r` must come from `fq_verify` and not have been freed.
void fq_report_free(struct FqReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FQCERT_H */
