#ifndef MORITA_H
#define MORITA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MoritaStatus {
  MORITA_STATUS_OK = 0,
  // A verification failed or a certificate was refused.
  MORITA_STATUS_FAILED = 1,
  MORITA_STATUS_NULL_ARGUMENT = 2,
  MORITA_STATUS_INVALID_UTF8 = 3,
  MORITA_STATUS_IO = 4,
  MORITA_STATUS_PARSE = 5,
  MORITA_STATUS_UNRESOLVED_REFERENCE = 6,
  MORITA_STATUS_MALFORMED_INPUT = 7,
  MORITA_STATUS_FIELD_MISMATCH = 8,
  MORITA_STATUS_ALGEBRA_MISMATCH = 9,
  MORITA_STATUS_CORNER_MISMATCH = 10,
  MORITA_STATUS_CONTEXT_INVALID = 11,
  MORITA_STATUS_BAD_PRIME = 12,
  MORITA_STATUS_INVARIANT_VIOLATED = 13,
  MORITA_STATUS_OTHER_INPUT = 14,
  MORITA_STATUS_PANIC = 15,
} MoritaStatus;

// The outcome of one corner replacement.
typedef struct MoritaSurgery MoritaSurgery;

// A loaded spec file.
typedef struct MoritaWorkspace MoritaWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *morita_version(void);

// Message for the most recent error on this thread; valid until the next
// failing call on the same thread. Never null.
const char *morita_last_error_message(void);

// Releases a string returned through an `out` parameter. Null is ignored.
//
// # Safety
// `s` must be null or a string produced by this library, freed at most once.
void morita_string_free(char *s);

// Parses a spec document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum MoritaStatus morita_workspace_load(const char *json, struct MoritaWorkspace **out);

// Reads and parses a spec file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum MoritaStatus morita_workspace_load_file(const char *path, struct MoritaWorkspace **out);

// # Safety
// `w` must be null or a handle from `morita_workspace_load*`, freed at most once.
void morita_workspace_free(struct MoritaWorkspace *w);

// The workspace re-serialized as canonical spec JSON.
//
// # Safety
// `w` must be a live handle and `out` a valid pointer.
enum MoritaStatus morita_workspace_to_json(const struct MoritaWorkspace *w, char **out);

// Verifies the axioms of the named object. Returns `Ok` or `Failed`, and the
// full report through `report` when it is not null.
//
// # Safety
// `w` must be a live handle, `name` a NUL-terminated string, `report` null
// or a valid pointer.
enum MoritaStatus morita_verify(const struct MoritaWorkspace *w, const char *name, char **report);

// Dimension of the generalised matrix ring of the named context.
//
// # Safety
// `w` must be a live handle, `name` a NUL-terminated string, `dim` valid.
enum MoritaStatus morita_matrix_ring_dim(const struct MoritaWorkspace *w,
                                         const char *name,
                                         size_t *dim);

// `dim(M ⊗_A N)` for two named bimodules.
//
// # Safety
// `w` must be a live handle, both names NUL-terminated strings, `dim` valid.
enum MoritaStatus morita_tensor_dim(const struct MoritaWorkspace *w,
                                    const char *left,
                                    const char *right,
                                    size_t *dim);

// Replaces corner `t` (1-based) of the named context through the named
// classical context.
//
// # Safety
// `w` must be a live handle, both names NUL-terminated strings, `out` valid.
enum MoritaStatus morita_corner_replace(const struct MoritaWorkspace *w,
                                        const char *context,
                                        const char *classical,
                                        size_t t,
                                        struct MoritaSurgery **out);

// # Safety
// `s` must be null or a handle from `morita_corner_replace`, freed at most once.
void morita_surgery_free(struct MoritaSurgery *s);

// Dimensions of the matrix rings before and after the replacement.
//
// # Safety
// `s` must be a live handle; `before` and `after` valid pointers.
enum MoritaStatus morita_surgery_ring_dims(const struct MoritaSurgery *s,
                                           size_t *before,
                                           size_t *after);

// Block dimensions, ligation ranks and the verification report.
//
// # Safety
// `s` must be a live handle and `out` a valid pointer.
enum MoritaStatus morita_surgery_report(const struct MoritaSurgery *s, char **out);

// The composed context as a spec document.
//
// # Safety
// `s` must be a live handle and `out` a valid pointer.
enum MoritaStatus morita_surgery_composed_spec(const struct MoritaSurgery *s, char **out);

// Decides the equivalence certificate: `Ok` when granted, `Failed` when
// refused. The certificate or refusal, with its evidence, goes to `out`.
//
// # Safety
// `s` must be a live handle; `out` null or a valid pointer.
enum MoritaStatus morita_surgery_certify(const struct MoritaSurgery *s, char **out);

// Runs a worked instance by name. Negative values select the defaults, as
// does zero for `p`, `k` and `split`. Returns `Ok` when every expectation holds, `Failed` otherwise.
//
// # Safety
// `name` must be a NUL-terminated string; `out` null or a valid pointer.
enum MoritaStatus morita_gallery_run(const char *name,
                                     int64_t p,
                                     int64_t k,
                                     int64_t split,
                                     int64_t theta,
                                     char **out);

// Symbolic name of a status code, e.g. `"MORITA_STATUS_OK"`.
const char *morita_status_name(enum MoritaStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MORITA_H */
