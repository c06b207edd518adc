#ifndef MONOID_RECON_H
#define MONOID_RECON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MrStatus {
  MR_OK = 0,
  MR_NULL_POINTER = 1,
  MR_INVALID_UTF8 = 2,
  MR_PARSE_ERROR = 3,
  MR_INVALID_DEFINITION = 4,
  MR_NOT_FOUND = 5,
  MR_UNKNOWN_SUITE = 6,
  MR_PANIC = 7,
} MrStatus;

/*
 A finite commutative monoid.
 */
typedef struct MrMonoid MrMonoid;

/*
 The outcome of a verification run.
 */
typedef struct MrReport MrReport;

/*
 A monoid scheme glued from affine charts.
 */
typedef struct MrScheme MrScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 The message for the last failing call on this thread, or null. The
 pointer stays valid until the next failing call on this thread.
 */
const char *mr_last_error_message(void);

/*
 The library version as a static string.
 */
const char *mr_version(void);

/*
 Looks up a corpus monoid by name.

 # Safety
 `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum MrStatus mr_monoid_corpus(const char *name, struct MrMonoid **out);

/*
 Parses definition text and returns its first monoid.

 # Safety
 `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum MrStatus mr_monoid_parse(const char *text, struct MrMonoid **out);

/*
 # Safety
 `m` must come from this library and not be used afterwards.
 */
void mr_monoid_free(struct MrMonoid *m);

/*
 # Safety
 `m` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_monoid_size(const struct MrMonoid *m, size_t *out);

/*
 Number of ideals, the empty ideal included.

 # Safety
 `m` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_monoid_ideal_count(const struct MrMonoid *m, size_t *out);

/*
 Number of prime ideals, the empty ideal included.

 # Safety
 `m` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_monoid_prime_count(const struct MrMonoid *m, size_t *out);

/*
 Number of Grothendieck topologies.

 # Safety
 `m` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_monoid_topology_count(const struct MrMonoid *m, size_t *out);

/*
 Looks up a corpus scheme by name.

 # Safety
 `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum MrStatus mr_scheme_corpus(const char *name, struct MrScheme **out);

/*
 Parses definition text and builds its first scheme.

 # Safety
 `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum MrStatus mr_scheme_parse(const char *text, struct MrScheme **out);

/*
 # Safety
 `x` must come from this library and not be used afterwards.
 */
void mr_scheme_free(struct MrScheme *x);

/*
 # Safety
 `x` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_scheme_point_count(const struct MrScheme *x, size_t *out);

/*
 # Safety
 `x` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_scheme_open_count(const struct MrScheme *x, size_t *out);

/*
 Size of the monoid of global sections of the structure sheaf.

 # Safety
 `x` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_scheme_centre_size(const struct MrScheme *x, size_t *out);

/*
 Runs one suite, or every suite when `suite` is null, over the corpus.

 # Safety
 `suite` must be null or a nul-terminated string; `out` a valid pointer.
 */
enum MrStatus mr_verify_corpus(const char *suite, struct MrReport **out);

/*
 # Safety
 `r` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_report_failures(const struct MrReport *r, size_t *out);

/*
 # Safety
 `r` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_report_record_count(const struct MrReport *r, size_t *out);

/*
 The machine-readable records. The string is owned by the report.

 # Safety
 `r` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_report_records(const struct MrReport *r, const char **out);

/*
 # Safety
 `r` must come from this library and not be used afterwards.
 */
void mr_report_free(struct MrReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MONOID_RECON_H */
