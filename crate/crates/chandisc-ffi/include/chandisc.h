/* Copyright 2026 chandisc contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface for the channel-discrimination toolkit. Every fallible
 * call returns a ChandiscStatus; on failure the thread-local message is
 * available through chandisc_last_error_message(). Strings returned via
 * char ** out-parameters are freed with chandisc_string_free(); handles
 * are freed with their matching *_free() function.
 */

#ifndef CHANDISC_H
#define CHANDISC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible call. Zero is success; the
// other values mirror the library's error kinds.
typedef enum ChandiscStatus {
  CHANDISC_STATUS_OK = 0,
  CHANDISC_STATUS_NON_SQUARE = 1,
  CHANDISC_STATUS_NOT_HERMITIAN = 2,
  CHANDISC_STATUS_NOT_PSD = 3,
  CHANDISC_STATUS_TRACE_NOT_ONE = 4,
  CHANDISC_STATUS_DIMENSION_MISMATCH = 5,
  CHANDISC_STATUS_PARAMETER_OUT_OF_RANGE = 6,
  CHANDISC_STATUS_NON_LINEAR_APPLIER = 7,
  CHANDISC_STATUS_MAP_NOT_TRACE_PRESERVING = 8,
  CHANDISC_STATUS_UNSUPPORTED_DIM = 9,
  CHANDISC_STATUS_DEGENERATE_MAP = 10,
  CHANDISC_STATUS_NOT_TA = 11,
  CHANDISC_STATUS_NOT_HERMITICITY_PRESERVING = 12,
  CHANDISC_STATUS_DEGENERATE_TA = 13,
  CHANDISC_STATUS_NOT_DETECTED = 14,
  CHANDISC_STATUS_INVALID_POVM = 15,
  CHANDISC_STATUS_INCONSISTENT_PROVENANCE = 16,
  CHANDISC_STATUS_PURIFICATION_TOO_SMALL = 17,
  CHANDISC_STATUS_IO = 18,
  CHANDISC_STATUS_JSON = 19,
  CHANDISC_STATUS_FORMAT = 20,
  // A required pointer argument was null.
  CHANDISC_STATUS_NULL_POINTER = 21,
  // A string argument was not valid UTF-8.
  CHANDISC_STATUS_UTF8 = 22,
  // The call panicked; the handle state is unchanged.
  CHANDISC_STATUS_PANIC = 23,
} ChandiscStatus;

// A constructed channel pair bound to the probe it was built from.
typedef struct ChandiscPair ChandiscPair;

// A validated density matrix.
typedef struct ChandiscState ChandiscState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string; never freed.
const char *chandisc_version(void);

// Message of the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread; do not free it.
const char *chandisc_last_error_message(void);

// Free a string returned through a `char **` out-parameter.
//
// # Safety
// `text` must have come from this library and not have been freed yet.
void chandisc_string_free(char *text);

// Build the maximally entangled state on two `d`-dimensional factors.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum ChandiscStatus chandisc_state_bell(size_t d, struct ChandiscState **out);

// Build an isotropic state with the given visibility in [0, 1].
//
// # Safety
// `out` must point to writable storage for one pointer.
enum ChandiscStatus chandisc_state_isotropic(size_t d,
                                             double visibility,
                                             struct ChandiscState **out);

// Parse and validate a state from JSON. Accepts the bare state shape or
// a provenance envelope, exactly like the file readers.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum ChandiscStatus chandisc_state_from_json(const char *json, struct ChandiscState **out);

// Serialize a state to the same JSON shape the file tools read.
//
// # Safety
// `state` must be a live handle; `out` must be writable. Free the result
// with `chandisc_string_free`.
enum ChandiscStatus chandisc_state_to_json(const struct ChandiscState *state, char **out);

// Free a state handle.
//
// # Safety
// `state` must have come from this library and not have been freed yet.
void chandisc_state_free(struct ChandiscState *state);

// Scan the positive-map registry. On success `*detected` says whether a
// map flagged the state and `*negativity` holds the certified value.
//
// # Safety
// All pointers must be valid: `state` a live handle, the rest writable.
enum ChandiscStatus chandisc_detect(const struct ChandiscState *state,
                                    bool *detected,
                                    double *negativity);

// Build the channel pair powered by a detected state. Fails with
// `NotDetected` when no registry map flags the state.
//
// # Safety
// `state` must be a live handle; `out` must be writable.
enum ChandiscStatus chandisc_construct(const struct ChandiscState *state,
                                       struct ChandiscPair **out);

// Scale factor `c` of a pair, or NaN on a null handle.
//
// # Safety
// `pair` must be a live handle or null.
double chandisc_pair_c(const struct ChandiscPair *pair);

// Certified negativity of the probe the pair was built from, or NaN on
// a null handle.
//
// # Safety
// `pair` must be a live handle or null.
double chandisc_pair_negativity(const struct ChandiscPair *pair);

// Re-check every invariant of the pair; `*passed` reports the verdict.
//
// # Safety
// `pair` must be a live handle; `passed` must be writable.
enum ChandiscStatus chandisc_pair_verify(const struct ChandiscPair *pair, bool *passed);

// Serialize the pair, its generating map, and the bound negativity to
// JSON; the file tools read this shape directly.
//
// # Safety
// `pair` must be a live handle; `out` must be writable. Free the result
// with `chandisc_string_free`.
enum ChandiscStatus chandisc_pair_to_json(const struct ChandiscPair *pair, char **out);

// Full discrimination report for the pair and its source probe, as JSON.
//
// # Safety
// `pair` must be a live handle; `out` must be writable. Free the result
// with `chandisc_string_free`.
enum ChandiscStatus chandisc_pair_report_json(const struct ChandiscPair *pair,
                                              uint64_t seed,
                                              char **out);

// Play the discrimination game against the source probe with the best
// measurement; the result (counts, rates, intervals) comes back as JSON.
//
// # Safety
// `pair` must be a live handle; `out` must be writable. Free the result
// with `chandisc_string_free`.
enum ChandiscStatus chandisc_pair_simulate_json(const struct ChandiscPair *pair,
                                                uint64_t shots,
                                                uint64_t seed,
                                                char **out);

// Free a pair handle.
//
// # Safety
// `pair` must have come from this library and not have been freed yet.
void chandisc_pair_free(struct ChandiscPair *pair);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHANDISC_H */
