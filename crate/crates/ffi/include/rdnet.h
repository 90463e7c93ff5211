#ifndef RDNET_H
#define RDNET_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  RDNET_STATUS_OK = 0,
  RDNET_STATUS_NULL_POINTER = 1,
  RDNET_STATUS_INVALID_INPUT = 2,
  RDNET_STATUS_CONFIG = 3,
  RDNET_STATUS_NUMERICAL = 4,
  RDNET_STATUS_IO = 5,
  RDNET_STATUS_PANIC = 6,
} RdnetStatus;

/**
 * Which verifier [`rdnet_verify`] runs.
 */
typedef enum {
  /**
   * Threshold net in 1D; `param` is epsilon.
   */
  RDNET_VERIFIER_THEOREM1 = 0,
  /**
   * Selector net in 2D; `param` is delta, the margin is the default.
   */
  RDNET_VERIFIER_THEOREM2 = 1,
  /**
   * Derivative constants; `param` is ignored.
   */
  RDNET_VERIFIER_LEMMA2_LEMMA3 = 2,
} RdnetVerifier;

/**
 * A nodal field on the uniform grid of the unit square or interval.
 */
typedef struct RdnetField RdnetField;

/**
 * A threshold or selector network.
 */
typedef struct RdnetNet RdnetNet;

/**
 * A steady-state problem loaded from a TOML run configuration.
 */
typedef struct RdnetProblem RdnetProblem;

/**
 * The outcome of one verifier.
 */
typedef struct RdnetReport RdnetReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next `rdnet_*` call on the same thread.
 */
const char *rdnet_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void rdnet_string_free(char *s);

/**
 * Loads a TOML run configuration.
 *
 * # Safety
 * `config_path` must be a NUL-terminated string; `out` must be writable.
 */
RdnetStatus rdnet_problem_load(const char *config_path, RdnetProblem **out_problem);

/**
 * # Safety
 * `p` must be null or a handle from [`rdnet_problem_load`].
 */
void rdnet_problem_free(RdnetProblem *p);

/**
 * Solves the problem to steady state from its configured initial field.
 *
 * # Safety
 * `problem` must be a live handle; `out_field` must be writable.
 */
RdnetStatus rdnet_problem_solve(const RdnetProblem *problem, RdnetField **out_field);

/**
 * Builds a field from `n^dim` nodal values in row-major order (last axis fastest).
 *
 * # Safety
 * `values` must point to `len` doubles; `out_field` must be writable.
 */
RdnetStatus rdnet_field_new(uintptr_t dim,
                            uintptr_t n,
                            const double *values,
                            uintptr_t len,
                            RdnetField **out_field);

/**
 * Reads a field CSV (`x[,y],value`).
 *
 * # Safety
 * `csv_path` must be a NUL-terminated string; `out_field` must be writable.
 */
RdnetStatus rdnet_field_read_csv(const char *csv_path, RdnetField **out_field);

/**
 * Writes a field CSV with full round-trip precision.
 *
 * # Safety
 * `field` must be a live handle; `csv_path` a NUL-terminated string.
 */
RdnetStatus rdnet_field_write_csv(const RdnetField *field, const char *csv_path);

/**
 * # Safety
 * `f` must be null or a field handle.
 */
void rdnet_field_free(RdnetField *f);

/**
 * Spatial dimension, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uintptr_t rdnet_field_dim(const RdnetField *field);

/**
 * Nodes per axis, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uintptr_t rdnet_field_n(const RdnetField *field);

/**
 * Copies the nodal values into `buf`, which must hold `n^dim` doubles.
 *
 * # Safety
 * `field` must be a live handle and `buf` must point to `buf_len` doubles.
 */
RdnetStatus rdnet_field_values(const RdnetField *field, double *buf, uintptr_t buf_len);

/**
 * Multilinear interpolation at `x` (`dim` coordinates in [0, 1]).
 *
 * # Safety
 * `field` must be a live handle, `x` must point to `dim` doubles and
 * `out_value` must be writable.
 */
RdnetStatus rdnet_field_interpolate(const RdnetField *field,
                                    const double *x,
                                    uintptr_t dim,
                                    double *out_value);

/**
 * Threshold net with `m` intervals (2m step neurons) sampling a 1D field.
 *
 * # Safety
 * `field` must be a live handle; `out_net` must be writable.
 */
RdnetStatus rdnet_threshold_net_build(const RdnetField *field, uintptr_t m, RdnetNet **out_net);

/**
 * Selector net over a partition of side at most `delta` with ramp margin
 * `gamma`, sampling the field at each rectangle's lower corner.
 *
 * # Safety
 * `field` must be a live handle; `out_net` must be writable.
 */
RdnetStatus rdnet_selector_net_build(const RdnetField *field,
                                     double delta,
                                     double gamma,
                                     RdnetNet **out_net);

/**
 * Parses a net from its JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_net` must be writable.
 */
RdnetStatus rdnet_net_from_json(const char *json, RdnetNet **out_net);

/**
 * Serialises a net; free the string with [`rdnet_string_free`].
 *
 * # Safety
 * `net` must be a live handle; `out_json` must be writable.
 */
RdnetStatus rdnet_net_to_json(const RdnetNet *net, char **out_json);

/**
 * Evaluates the net at `x` (`dim` coordinates in [0, 1]).
 *
 * # Safety
 * `net` must be a live handle, `x` must point to `dim` doubles and
 * `out_value` must be writable.
 */
RdnetStatus rdnet_net_eval(const RdnetNet *net, const double *x, uintptr_t dim, double *out_value);

/**
 * Input dimension, or 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
uintptr_t rdnet_net_dim(const RdnetNet *net);

/**
 * Number of hidden plus output layers, or 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
uintptr_t rdnet_net_layer_count(const RdnetNet *net);

/**
 * Width of layer `index`, or 0 when out of range.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
uintptr_t rdnet_net_layer_size(const RdnetNet *net, uintptr_t index);

/**
 * # Safety
 * `n` must be null or a net handle.
 */
void rdnet_net_free(RdnetNet *n);

/**
 * Runs one verifier against `field`. A report whose checks fail is still
 * `RDNET_STATUS_OK`; inspect it with [`rdnet_report_passed`].
 *
 * # Safety
 * `problem` and `field` must be live handles; `out_report` must be writable.
 */
RdnetStatus rdnet_verify(const RdnetProblem *problem,
                         const RdnetField *field,
                         RdnetVerifier verifier,
                         double param,
                         uint64_t seed,
                         uintptr_t probes,
                         RdnetReport **out_report);

/**
 * 1 if every check passed, 0 otherwise (including a null handle).
 *
 * # Safety
 * `report` must be null or a live handle.
 */
int32_t rdnet_report_passed(const RdnetReport *report);

/**
 * Headline predicted bound, measured value and tolerance.
 *
 * # Safety
 * `report` must be a live handle; the out pointers must be writable.
 */
RdnetStatus rdnet_report_headline(const RdnetReport *report,
                                  double *out_predicted,
                                  double *out_measured,
                                  double *out_tolerance);

/**
 * Serialises the full report; free the string with [`rdnet_string_free`].
 *
 * # Safety
 * `report` must be a live handle; `out_json` must be writable.
 */
RdnetStatus rdnet_report_to_json(const RdnetReport *report, char **out_json);

/**
 * # Safety
 * `r` must be null or a report handle.
 */
void rdnet_report_free(RdnetReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RDNET_H */
