#ifndef PROBARG_H
#define PROBARG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ProbargStatus {
  PROBARG_STATUS_OK = 0,
  PROBARG_STATUS_NULL_POINTER = 1,
  PROBARG_STATUS_PARSE = 2,
  PROBARG_STATUS_INVALID_ARGUMENT = 3,
  PROBARG_STATUS_TOO_LARGE = 4,
  PROBARG_STATUS_INFEASIBLE = 5,
  PROBARG_STATUS_UNSUPPORTED = 6,
  PROBARG_STATUS_INTERNAL = 7,
} ProbargStatus;

typedef enum ProbargFormat {
  PROBARG_FORMAT_APX = 0,
  PROBARG_FORMAT_TGF = 1,
} ProbargFormat;

typedef enum ProbargSemantics {
  PROBARG_SEMANTICS_GROUNDED = 0,
  PROBARG_SEMANTICS_COMPLETE = 1,
  PROBARG_SEMANTICS_PREFERRED = 2,
  PROBARG_SEMANTICS_STABLE = 3,
  PROBARG_SEMANTICS_SEMI_STABLE = 4,
} ProbargSemantics;

typedef enum ProbargProperty {
  PROBARG_PROPERTY_COH = 0,
  PROBARG_PROPERTY_SFOU = 1,
  PROBARG_PROPERTY_FOU = 2,
  PROBARG_PROPERTY_SOPT = 3,
  PROBARG_PROPERTY_OPT = 4,
  PROBARG_PROPERTY_JUS = 5,
  PROBARG_PROPERTY_TER = 6,
  PROBARG_PROPERTY_RAT = 7,
  PROBARG_PROPERTY_NEU = 8,
  PROBARG_PROPERTY_INV = 9,
  PROBARG_PROPERTY_MAX = 10,
  PROBARG_PROPERTY_MIN = 11,
} ProbargProperty;

/**
 * A parsed framework with its argument names as C strings.
 */
typedef struct ProbargFramework ProbargFramework;

/**
 * A list of labellings over one framework.
 */
typedef struct ProbargLabellings ProbargLabellings;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `text` (NUL-terminated UTF-8) and stores a new framework in `*out`.
 *
 * # Safety
 * `text` must be a valid C string and `out` a valid pointer.
 */
enum ProbargStatus probarg_framework_parse(const char *text,
                                           enum ProbargFormat format,
                                           struct ProbargFramework **out);

/**
 * # Safety
 * `af` must come from [`probarg_framework_parse`] and not be freed twice.
 */
void probarg_framework_free(struct ProbargFramework *af);

/**
 * Number of arguments, or 0 for a null handle.
 *
 * # Safety
 * `af` must be null or a live framework handle.
 */
size_t probarg_framework_len(const struct ProbargFramework *af);

/**
 * Name of argument `index`, owned by the framework; null when out of range.
 *
 * # Safety
 * `af` must be null or a live framework handle.
 */
const char *probarg_framework_name(const struct ProbargFramework *af, size_t index);

/**
 * Labellings of `semantics`, stored in `*out`.
 *
 * # Safety
 * `af` must be a live framework handle and `out` a valid pointer.
 */
enum ProbargStatus probarg_semantics(const struct ProbargFramework *af,
                                     enum ProbargSemantics semantics,
                                     struct ProbargLabellings **out);

/**
 * # Safety
 * `ls` must be null or a live labellings handle.
 */
size_t probarg_labellings_count(const struct ProbargLabellings *ls);

/**
 * Writes labelling `index` into `labels`, which holds `len` bytes.
 *
 * # Safety
 * `ls` must be a live handle and `labels` must point to `len` writable bytes.
 */
enum ProbargStatus probarg_labellings_get(const struct ProbargLabellings *ls,
                                          size_t index,
                                          uint8_t *labels,
                                          size_t len);

/**
 * # Safety
 * `ls` must come from [`probarg_semantics`] and not be freed twice.
 */
void probarg_labellings_free(struct ProbargLabellings *ls);

/**
 * Epistemic labelling of a total assignment with the given threshold band.
 *
 * # Safety
 * `values` must hold `len` doubles and `labels` `len` writable bytes.
 */
enum ProbargStatus probarg_epistemic_labelling(const struct ProbargFramework *af,
                                               const double *values,
                                               size_t len,
                                               double tol,
                                               uint8_t *labels);

/**
 * Sets `*holds` to whether the assignment has `property` within `tol`.
 *
 * # Safety
 * `values` must hold `len` doubles and `holds` must be writable.
 */
enum ProbargStatus probarg_check(const struct ProbargFramework *af,
                                 const double *values,
                                 size_t len,
                                 enum ProbargProperty property,
                                 double tol,
                                 bool *holds);

/**
 * Bit mask of all properties the assignment has within `tol`.
 *
 * # Safety
 * `values` must hold `len` doubles and `mask` must be writable.
 */
enum ProbargStatus probarg_classify(const struct ProbargFramework *af,
                                    const double *values,
                                    size_t len,
                                    double tol,
                                    uint32_t *mask);

/**
 * Maximum-entropy completion. `partial` holds `len` values with NaN for
 * unassigned arguments; the completion is written to `out`. `entropy` may
 * be null.
 *
 * # Safety
 * `partial` must hold `len` doubles and `out` `len` writable doubles.
 */
enum ProbargStatus probarg_complete(const struct ProbargFramework *af,
                                    const double *partial,
                                    size_t len,
                                    uint32_t properties,
                                    double tol,
                                    double *out,
                                    double *entropy);

/**
 * Message for the last failed call on this thread, or null.
 */
const char *probarg_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PROBARG_H */
