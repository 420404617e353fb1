#ifndef STAGED_H
#define STAGED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum StagedStatus {
  STAGED_STATUS_OK = 0,
  STAGED_STATUS_NULL_POINTER = 1,
  STAGED_STATUS_INVALID_UTF8 = 2,
  STAGED_STATUS_SYNTAX = 3,
  STAGED_STATUS_SEMANTIC = 4,
  STAGED_STATUS_BUDGET = 5,
  STAGED_STATUS_CONSTRUCTION = 6,
  STAGED_STATUS_OUT_OF_RANGE = 7,
  STAGED_STATUS_PANIC = 8,
} StagedStatus;

/**
 * Constructions that take a shape.
 */
typedef enum StagedShapeConstruction {
  STAGED_SHAPE_CONSTRUCTION_SPANNING_TREE = 0,
  STAGED_SHAPE_CONSTRUCTION_SCALE2 = 1,
  STAGED_SHAPE_CONSTRUCTION_MONOTONE = 2,
} StagedShapeConstruction;

/**
 * The result of executing a system.
 */
typedef struct StagedExecution StagedExecution;

/**
 * An owned staged system.
 */
typedef struct StagedSystem StagedSystem;

/**
 * Complexity of a system.
 */
typedef struct StagedMetrics {
  size_t glues;
  size_t tiles;
  size_t bins;
  size_t stages;
  uint32_t temperature;
} StagedMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; valid until the next failing call.
 */
const char *staged_last_error_message(void);

/**
 * Parses DSL text into a new system.
 *
 * # Safety
 * `source` must be a valid C string and `out` a valid pointer.
 */
enum StagedStatus staged_system_parse(const char *source, struct StagedSystem **out);

/**
 * Releases a system; null is ignored.
 *
 * # Safety
 * `sys` must come from this library and not be used afterwards.
 */
void staged_system_free(struct StagedSystem *sys);

/**
 * Canonical DSL text of a system.
 *
 * # Safety
 * `sys` must be a live system and `out` a valid pointer.
 */
enum StagedStatus staged_system_serialize(const struct StagedSystem *sys, char **out);

/**
 * # Safety
 * `sys` must be a live system and `out` a valid pointer.
 */
enum StagedStatus staged_system_metrics(const struct StagedSystem *sys, struct StagedMetrics *out);

/**
 * The 1 × n line from three glues.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StagedStatus staged_gen_line(uint64_t n, struct StagedSystem **out);

/**
 * The n × n square from jigsaw cuts.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StagedStatus staged_gen_square_jigsaw(uint32_t n, struct StagedSystem **out);

/**
 * A construction for the shape given as `#`/`.` rows.
 *
 * # Safety
 * `shape` must be a valid C string and `out` a valid pointer.
 */
enum StagedStatus staged_gen_from_shape(enum StagedShapeConstruction kind,
                                        const char *shape,
                                        struct StagedSystem **out);

/**
 * The binary counter over strings of length 2^k.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StagedStatus staged_gen_counter(uint32_t k, struct StagedSystem **out);

/**
 * A bit string on the north face of macro tiles, mixed with `bins` bins.
 *
 * # Safety
 * `bits` must be a valid C string and `out` a valid pointer.
 */
enum StagedStatus staged_gen_crazy_string(const char *bits, size_t bins, struct StagedSystem **out);

/**
 * Executes a system; zero budgets select the defaults.
 *
 * # Safety
 * `sys` must be a live system and `out` a valid pointer.
 */
enum StagedStatus staged_system_execute(const struct StagedSystem *sys,
                                        size_t max_supertile_size,
                                        size_t max_distinct_supertiles,
                                        struct StagedExecution **out);

/**
 * Releases an execution; null is ignored.
 *
 * # Safety
 * `run` must come from this library and not be used afterwards.
 */
void staged_execution_free(struct StagedExecution *run);

/**
 * Number of terminal supertiles in the output bin; 0 for null.
 *
 * # Safety
 * `run` must be null or a live execution.
 */
size_t staged_execution_terminal_count(const struct StagedExecution *run);

/**
 * Whether the output bin produces exactly one terminal supertile; false for null.
 *
 * # Safety
 * `run` must be null or a live execution.
 */
bool staged_execution_is_unique(const struct StagedExecution *run);

/**
 * Copies the cell coordinates of terminal `index` into `xs`/`ys` (capacity `cap`) and stores
 * the cell count in `len`; with too small a buffer only `len` is written.
 *
 * # Safety
 * `run` must be a live execution, `len` valid, and `xs`/`ys` valid for `cap` writes.
 */
enum StagedStatus staged_execution_terminal_cells(const struct StagedExecution *run,
                                                  size_t index,
                                                  int32_t *xs,
                                                  int32_t *ys,
                                                  size_t cap,
                                                  size_t *len);

/**
 * ASCII (or SVG when `svg` is true) picture of terminal `index`.
 *
 * # Safety
 * `run` must be a live execution and `out` a valid pointer.
 */
enum StagedStatus staged_execution_render(const struct StagedExecution *run,
                                          size_t index,
                                          bool svg,
                                          char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void staged_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STAGED_H */
