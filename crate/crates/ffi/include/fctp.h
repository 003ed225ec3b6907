#ifndef FCTP_FFI_H
#define FCTP_FFI_H

/* Generated by cbindgen from crates/ffi/src. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define FCTP_VARIANT_NN 0

#define FCTP_VARIANT_DX 1

#define FCTP_VARIANT_DY10 2

#define FCTP_VARIANT_DY11 3

#define FCTP_VARIANT_DY12 4

#define FCTP_GHG_UNWEIGHTED 0

#define FCTP_GHG_WEIGHTED 1

typedef enum FctpStatus {
  FCTP_STATUS_OK = 0,
  FCTP_STATUS_NULL_POINTER = 1,
  FCTP_STATUS_INVALID_UTF8 = 2,
  FCTP_STATUS_PARSE = 3,
  FCTP_STATUS_INVALID_INSTANCE = 4,
  FCTP_STATUS_SHAPE_MISMATCH = 5,
  FCTP_STATUS_SOLVE = 6,
  FCTP_STATUS_STATS = 7,
  FCTP_STATUS_IO = 8,
  FCTP_STATUS_INVALID_ARGUMENT = 9,
  FCTP_STATUS_BUFFER_TOO_SMALL = 10,
  FCTP_STATUS_PANIC = 11,
} FctpStatus;

/**
 * Opaque instance handle (instance data plus emission parameters).
 */
typedef struct FctpInstance FctpInstance;

/**
 * Opaque result of one heuristic construction.
 */
typedef struct FctpSolveResult FctpSolveResult;

/**
 * Cost breakdown `Z = transport + fixed`.
 */
typedef struct FctpCost {
  double transport;
  double fixed;
  double total;
} FctpCost;

typedef struct FctpFeasibility {
  bool nonneg_ok;
  bool capacity_ok;
  bool demand_ok;
  double emissions;
  bool ghg_ok;
  bool feasible;
} FctpFeasibility;

typedef struct FctpTTest {
  double t;
  double p;
  double df;
  size_t n_a;
  size_t n_b;
} FctpTTest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *fctp_version(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next `fctp_*` call on the same thread.
 */
const char *fctp_last_error(void);

/**
 * Parses an instance in the `.fctp` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum FctpStatus fctp_instance_parse(const char *text, struct FctpInstance **out);

/**
 * Reads an instance file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum FctpStatus fctp_instance_read(const char *path, struct FctpInstance **out);

/**
 * Generates a random `m`×`n` instance with the default value ranges.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FctpStatus fctp_instance_generate(size_t m,
                                       size_t n,
                                       uint64_t seed,
                                       struct FctpInstance **out);

/**
 * Serializes an instance; free the string with [`fctp_string_free`].
 *
 * # Safety
 * `instance` must be a live handle; `out` must be valid for writes.
 */
enum FctpStatus fctp_instance_to_text(const struct FctpInstance *instance, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void fctp_string_free(char *s);

/**
 * # Safety
 * `instance` must be null or a handle from this library, not yet freed.
 */
void fctp_instance_free(struct FctpInstance *instance);

/**
 * Number of centers (`m`) and customers (`n`).
 *
 * # Safety
 * `instance` must be a live handle; `m` and `n` must be valid for writes.
 */
enum FctpStatus fctp_instance_dims(const struct FctpInstance *instance, size_t *m, size_t *n);

/**
 * Replaces the emission factors with scalar values.
 *
 * # Safety
 * `instance` must be a live handle not shared with another thread.
 */
enum FctpStatus fctp_instance_set_emissions(struct FctpInstance *instance,
                                            double alpha_manufacturer,
                                            double alpha,
                                            double beta_manufacturer,
                                            double beta,
                                            double ghg_cap);

/**
 * Runs one heuristic construction.
 *
 * # Safety
 * `instance` must be a live handle; `out` must be valid for writes.
 */
enum FctpStatus fctp_solve(const struct FctpInstance *instance,
                           uint32_t variant_code,
                           uint32_t ghg_mode,
                           uint64_t seed,
                           struct FctpSolveResult **out);

/**
 * # Safety
 * `result` must be null or a handle from [`fctp_solve`], not yet freed.
 */
void fctp_result_free(struct FctpSolveResult *result);

/**
 * # Safety
 * `result` must be a live handle; `out` must be valid for writes.
 */
enum FctpStatus fctp_result_cost(const struct FctpSolveResult *result, struct FctpCost *out);

/**
 * # Safety
 * `result` must be a live handle; `out` must be valid for writes.
 */
enum FctpStatus fctp_result_feasibility(const struct FctpSolveResult *result,
                                        struct FctpFeasibility *out);

/**
 * Copies the m×n flow matrix, row-major, into `buf` (`len >= m*n`).
 *
 * # Safety
 * `result` must be a live handle; `buf` must hold `len` writable doubles.
 */
enum FctpStatus fctp_result_flow(const struct FctpSolveResult *result, double *buf, size_t len);

/**
 * Evaluates a row-major m×n flow matrix against an instance.
 *
 * # Safety
 * `instance` must be a live handle, `flow` must hold `len` doubles, and the
 * output pointers must be valid for writes.
 */
enum FctpStatus fctp_evaluate(const struct FctpInstance *instance,
                              const double *flow,
                              size_t len,
                              uint32_t ghg_mode,
                              struct FctpCost *out_cost,
                              struct FctpFeasibility *out_feasibility);

/**
 * Brute-force optimum over unsplit assignments (small instances only).
 * `flow_buf` may be null when `flow_len` is 0 and the flows are not needed.
 *
 * # Safety
 * `instance` must be a live handle, `out_cost` valid for writes, and
 * `flow_buf` must hold `flow_len` writable doubles.
 */
enum FctpStatus fctp_exact_optimum(const struct FctpInstance *instance,
                                   uint32_t ghg_mode,
                                   struct FctpCost *out_cost,
                                   double *flow_buf,
                                   size_t flow_len);

/**
 * Unpaired two-sample t-test; pooled variance unless `welch` is set.
 *
 * # Safety
 * `a` and `b` must hold `len_a` and `len_b` doubles; `out` must be valid
 * for writes.
 */
enum FctpStatus fctp_t_test(const double *a,
                            size_t len_a,
                            const double *b,
                            size_t len_b,
                            bool welch,
                            struct FctpTTest *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FCTP_FFI_H */
