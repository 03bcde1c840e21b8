#ifndef IMPALG_H
#define IMPALG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum ImpalgStatus {
  IMPALG_STATUS_OK = 0,
  IMPALG_STATUS_NULL_ARGUMENT = 1,
  IMPALG_STATUS_INVALID_UTF8 = 2,
  IMPALG_STATUS_PARSE = 3,
  IMPALG_STATUS_UNKNOWN_PROPERTY = 4,
  IMPALG_STATUS_UNKNOWN_BASE = 5,
  IMPALG_STATUS_UNKNOWN_CLASS = 6,
  IMPALG_STATUS_SIZE_TOO_LARGE = 7,
  IMPALG_STATUS_NEEDS_PRUNING = 8,
  IMPALG_STATUS_BUFFER_TOO_SMALL = 9,
  IMPALG_STATUS_INTERNAL = 10,
} ImpalgStatus;

/*
 Opaque operation table.
 */
typedef struct ImpalgTable ImpalgTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the most recent failure on this thread. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *impalg_last_error(void);

/*
 Parses a table in the text or structured format.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ImpalgStatus impalg_table_parse(const char *text, struct ImpalgTable **out);

/*
 Releases a table. Null is ignored.

 # Safety
 `table` must come from [`impalg_table_parse`] and not be freed twice.
 */
void impalg_table_free(struct ImpalgTable *table);

/*
 Number of elements, or 0 for a null handle.

 # Safety
 `table` must be null or a live handle.
 */
size_t impalg_table_size(const struct ImpalgTable *table);

/*
 Evaluates one property. `satisfied` receives 1 or 0, or -1 for a
 bounded property on a table without zero. When the property fails, the
 element indices of the witness go to `witness` and their count to
 `arity`; otherwise `arity` is 0.

 # Safety
 All pointers must be valid; `witness` must have room for 3 entries.
 */
enum ImpalgStatus impalg_eval_property(const struct ImpalgTable *table,
                                       const char *property,
                                       int32_t *satisfied,
                                       uint8_t *witness,
                                       size_t *arity);

/*
 Writes the comma-separated ids of all classes containing the table into
 `buf` (NUL-terminated). `needed` receives the required capacity
 including the terminator; a short buffer yields `BufferTooSmall`.

 # Safety
 `buf` must have room for `cap` bytes; `needed` must be valid.
 */
enum ImpalgStatus impalg_classify(const struct ImpalgTable *table,
                                  char *buf,
                                  size_t cap,
                                  size_t *needed);

/*
 Counts tables of size `n` over `base` satisfying every property in the
 comma-separated `filter` (may be empty). With a null `class` the total
 goes to `count`; otherwise the members of that class, and `proper`
 (if non-null) receives the proper-member count or `UINT64_MAX` when the
 class has no proper variant.

 # Safety
 String arguments must be NUL-terminated; `class` and `proper` may be null.
 */
enum ImpalgStatus impalg_census_count(size_t n,
                                      const char *base,
                                      const char *filter,
                                      const char *class_,
                                      size_t jobs,
                                      uint64_t *count,
                                      uint64_t *proper);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IMPALG_H */
