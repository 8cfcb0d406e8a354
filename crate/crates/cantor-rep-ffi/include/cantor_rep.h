/* C interface to the cantor-rep exact sequence engine. */

#ifndef CANTOR_REP_H
#define CANTOR_REP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of one call. Non-OK leaves the out parameters untouched.
typedef enum CantorStatus {
  // Success; out parameters are filled.
  CANTOR_STATUS_OK = 0,
  // A required pointer argument was null.
  CANTOR_STATUS_NULL_ARGUMENT = 1,
  // Input failed to parse or violated a documented precondition.
  CANTOR_STATUS_INVALID_INPUT = 2,
  // A decode query matched no pattern point.
  CANTOR_STATUS_NO_MATCH = 3,
  // Internal panic was caught at the boundary.
  CANTOR_STATUS_PANIC = 4,
} CantorStatus;

// Opaque handle: one parsed pattern document.
typedef struct CantorPattern CantorPattern;

// Opaque handle: one eventually periodic binary sequence in canonical form.
typedef struct CantorSeq CantorSeq;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns a copy of the last error message on this thread, or null if no
// call has failed yet. Free it with `cantor_string_free`.
char *cantor_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
void cantor_string_free(char *text);

// Parses `pre(per)` notation (for example `01(10)`) into a sequence handle.
enum CantorStatus cantor_seq_parse(const char *text, struct CantorSeq **out);

// Builds a sequence from raw preamble and period bits (each 0 or 1).
// `pre` may be null when `pre_len` is 0; the period must be nonempty.
enum CantorStatus cantor_seq_new(const uint8_t *pre,
                                 size_t pre_len,
                                 const uint8_t *per,
                                 size_t per_len,
                                 struct CantorSeq **out);

// Releases a sequence handle. Null is ignored.
void cantor_seq_free(struct CantorSeq *seq);

// Writes the canonical `pre(per)` notation of the sequence.
enum CantorStatus cantor_seq_notation(const struct CantorSeq *seq, char **out);

// Writes bit i of the sequence (positions start at 1).
enum CantorStatus cantor_seq_bit(const struct CantorSeq *seq, uint64_t i, uint8_t *out);

// Writes whether two sequences are equal (canonical forms coincide).
enum CantorStatus cantor_seq_equal(const struct CantorSeq *a, const struct CantorSeq *b, bool *out);

// Writes the exact distance `Σ |a_i − b_i| / 2^i` as a `p/q` string.
enum CantorStatus cantor_seq_metric(const struct CantorSeq *a,
                                    const struct CantorSeq *b,
                                    char **out);

// Writes the exact binary value `Σ x_i / 2^i` as a `p/q` string.
enum CantorStatus cantor_seq_binary_value(const struct CantorSeq *seq, char **out);

// Writes the exact middle-thirds coordinate `Σ 2·x_i / 3^i` as `p/q`.
enum CantorStatus cantor_seq_cmts_value(const struct CantorSeq *seq, char **out);

// Prefixes the sequence with a finite word given as a bit string like "10".
enum CantorStatus cantor_seq_apply_word(const char *word,
                                        const struct CantorSeq *seq,
                                        struct CantorSeq **out);

// Writes whether the sequence starts with the given word (lies in its cone).
enum CantorStatus cantor_word_cone_contains(const char *word,
                                            const struct CantorSeq *seq,
                                            bool *out);

// Writes the fiber of a rational `p/q` in [0,1] under the binary-value map,
// as a JSON array of `pre(per)` notations (one or two elements).
enum CantorStatus cantor_fiber_unit_interval(const char *value, char **out);

// Parses a pattern document (JSON) into a pattern handle.
enum CantorStatus cantor_pattern_parse(const char *json, struct CantorPattern **out);

// Releases a pattern handle. Null is ignored.
void cantor_pattern_free(struct CantorPattern *pattern);

// Compiles one query point, given as a JSON document like
// `{"path":[],"arc":1,"t":"1/2"}` or `{"path":[1],"node":"c"}`, and writes
// the address row (point, fiber, cone words) as JSON.
enum CantorStatus cantor_represent_point(const struct CantorPattern *pattern,
                                         const char *point_json,
                                         char **out);

// Decodes a finite address set, given as a JSON array of `pre(per)`
// notations, back to the pattern point it represents. Writes JSON
// `{"point": {...}, "rule": "representative" | "cone-member"}`.
enum CantorStatus cantor_decode_representation(const struct CantorPattern *pattern,
                                               const char *fiber_json,
                                               char **out);

// Enumerates the full address table (every node, every arc sampled at
// k/denominator) and writes it as a JSON array of address rows.
enum CantorStatus cantor_enumerate_table(const struct CantorPattern *pattern,
                                         uint64_t denominator,
                                         char **out);

// Runs the invariant suite at the given truncation depth and sample count.
// Writes the report as JSON lines and whether every check passed.
enum CantorStatus cantor_run_suite(size_t depth,
                                   size_t random_samples,
                                   bool *out_pass,
                                   char **out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CANTOR_REP_H */
