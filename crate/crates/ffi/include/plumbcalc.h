#ifndef PLUMBCALC_H
#define PLUMBCALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Values 2 to 5 match the command line exit codes.
 */
typedef enum PcStatus {
  PC_STATUS_OK = 0,
  /**
   * Parse or validation error, bad parameter, violated hypothesis, I/O.
   */
  PC_STATUS_INVALID_INPUT = 2,
  PC_STATUS_NOT_NEGATIVE_DEFINITE = 3,
  /**
   * Complex too large or no free part in the truncation.
   */
  PC_STATUS_CAPACITY = 4,
  /**
   * A failed audit, exactness or grading check.
   */
  PC_STATUS_CHECK_FAILED = 5,
  PC_STATUS_NULL_ARGUMENT = 10,
  PC_STATUS_OUT_OF_RANGE = 11,
  /**
   * A rational does not fit in `int64_t`.
   */
  PC_STATUS_OVERFLOW = 12,
  PC_STATUS_INTERNAL = 13,
} PcStatus;

/**
 * A parsed plumbing graph with its intersection lattice.
 */
typedef struct PcGraph PcGraph;

/**
 * `Υ(t)` of one Spin^c class.
 */
typedef struct PcUpsilon PcUpsilon;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. Valid
 * until the next failing call on the same thread.
 */
const char *pc_last_error_message(void);

/**
 * Library version, a static string.
 */
const char *pc_version(void);

/**
 * Parses a graph in the text or JSON format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PcStatus pc_graph_parse(const char *text, struct PcGraph **out);

/**
 * Loads a built-in fixture by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PcStatus pc_graph_load_fixture(const char *name, struct PcGraph **out);

/**
 * # Safety
 * `g` must come from `pc_graph_parse` or `pc_graph_load_fixture`, or be null.
 */
void pc_graph_free(struct PcGraph *g);

/**
 * Number of Spin^c classes, `|det Q|`.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum PcStatus pc_graph_class_count(const struct PcGraph *g, size_t *out);

/**
 * Computes `Υ(t)` for class `class_index`.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum PcStatus pc_upsilon(const struct PcGraph *g, size_t class_index, struct PcUpsilon **out);

/**
 * # Safety
 * `u` must be a live upsilon handle.
 */
size_t pc_upsilon_breakpoint_count(const struct PcUpsilon *u);

/**
 * Breakpoint `i` as `(t, Υ(t))`.
 *
 * # Safety
 * `u` must be a live upsilon handle and the outputs valid pointers.
 */
enum PcStatus pc_upsilon_breakpoint(const struct PcUpsilon *u,
                                    size_t i,
                                    int64_t *t_num,
                                    int64_t *t_den,
                                    int64_t *v_num,
                                    int64_t *v_den);

/**
 * `τ = −Υ'(0⁺)`.
 *
 * # Safety
 * `u` must be a live upsilon handle and the outputs valid pointers.
 */
enum PcStatus pc_upsilon_tau(const struct PcUpsilon *u, int64_t *num, int64_t *den);

/**
 * `d = Υ(0)`.
 *
 * # Safety
 * `u` must be a live upsilon handle and the outputs valid pointers.
 */
enum PcStatus pc_upsilon_d(const struct PcUpsilon *u, int64_t *num, int64_t *den);

/**
 * # Safety
 * `u` must come from `pc_upsilon`, or be null.
 */
void pc_upsilon_free(struct PcUpsilon *u);

/**
 * The invariants report for all classes as JSON. `audit_radius <= 0`
 * skips the disk bound audit. Release the string with `pc_string_free`.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum PcStatus pc_invariants_json(const struct PcGraph *g, int64_t audit_radius, char **out);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void pc_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PLUMBCALC_H */
