#ifndef TRIDISTILL_H
#define TRIDISTILL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum TdStatus {
  TD_STATUS_OK = 0,
  TD_STATUS_NULL_POINTER = 1,
  TD_STATUS_INVALID_INPUT = 2,
  TD_STATUS_PARSE = 3,
  TD_STATUS_INFEASIBLE = 4,
  TD_STATUS_CAP_EXCEEDED = 5,
  TD_STATUS_IO = 6,
  /**
   * A result does not fit the output type.
   */
  TD_STATUS_OVERFLOW = 7,
  /**
   * The library panicked; the handle state is unspecified.
   */
  TD_STATUS_PANIC = 8,
  TD_STATUS_OTHER = 9,
} TdStatus;

/**
 * Opaque code handle.
 */
typedef struct TdCode TdCode;

/**
 * Block sizes of a code.
 */
typedef struct TdCodeParams {
  size_t n;
  size_t k;
  size_t k_t;
  size_t k_cs;
  size_t k_ccz;
  size_t k_0;
} TdCodeParams;

/**
 * Distance summary. `d` is 0 when only `d_lower_bound` is known; `a_d` is
 * meaningful only when `has_a_d` is true.
 */
typedef struct TdDistance {
  size_t d;
  size_t d_lower_bound;
  bool has_a_d;
  uint64_t a_d;
} TdDistance;

/**
 * Leading-order figures of a single-round distillation protocol.
 */
typedef struct TdReport {
  double p_acc;
  /**
   * Leading coefficient as a float (exact value via the CLI).
   */
  double coefficient;
  uint32_t order;
  double eps_out;
  double eps_per_output;
  double avg_outputs;
  double t_per_output;
} TdReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or an empty string.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *td_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *td_version(void);

/**
 * Parses a code file from text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TdStatus td_code_from_text(const char *text, struct TdCode **out);

/**
 * Loads one of the reference code files by name, e.g. `"m9_512.code"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TdStatus td_code_shipped(const char *name, struct TdCode **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `code` must come from this library and not have been freed.
 */
void td_code_free(struct TdCode *code);

/**
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
enum TdStatus td_code_params(const struct TdCode *code, struct TdCodeParams *out);

/**
 * Checks generalized triorthogonality.
 *
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
enum TdStatus td_code_verify(const struct TdCode *code, bool *out);

/**
 * Z-distance by automatic method choice, scanning weights up to `cap`.
 *
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
enum TdStatus td_code_distance(const struct TdCode *code, size_t cap, struct TdDistance *out);

/**
 * Protocol figures for an `[[n, k, d]]` code with `a_d` minimum-weight
 * logicals at input error `eps`; `ec_radius` 1 corrects single errors.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TdStatus td_trio_report(size_t n,
                             size_t k,
                             size_t d,
                             uint64_t a_d,
                             double eps,
                             uint8_t ec_radius,
                             struct TdReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIDISTILL_H */
