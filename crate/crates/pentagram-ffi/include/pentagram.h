#ifndef PENTAGRAM_H
#define PENTAGRAM_H

/* Generated by cbindgen from pentagram-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum PentagramStatus {
  PENTAGRAM_STATUS_OK = 0,
  /**
   * Null pointer, malformed UTF-8/JSON, or an out-of-range argument.
   */
  PENTAGRAM_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The requested object is degenerate (map undefined, non-generic data).
   */
  PENTAGRAM_STATUS_DEGENERATE = 2,
  /**
   * The operation needs a structure this polygon lacks (e.g. `(a, b)`
   * coordinates when `n` is divisible by 3).
   */
  PENTAGRAM_STATUS_UNSUPPORTED = 3,
  /**
   * The output buffer is too small.
   */
  PENTAGRAM_STATUS_BUFFER_TOO_SMALL = 4,
} PentagramStatus;

/**
 * An opaque polygon handle: the state plus its coordinate kind.
 */
typedef struct PentagramPolygon PentagramPolygon;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *pentagram_last_error(void);

/**
 * Seeded random twisted polygon with `n` vertices (`kind` picks the
 * coordinates: 0 = `(a, b)` when `n` is not divisible by 3, 1 = `(x, y)`,
 * 2 = vertex chain). Writes the new handle to `out`.
 */
enum PentagramStatus pentagram_polygon_random(uintptr_t n,
                                              uint64_t seed,
                                              uint32_t kind,
                                              struct PentagramPolygon **out);

/**
 * Seeded random closed polygon (`n >= 5`; plane vertices, identity
 * monodromy).
 */
enum PentagramStatus pentagram_polygon_random_closed(uintptr_t n,
                                                     uint64_t seed,
                                                     struct PentagramPolygon **out);

/**
 * Polygon from interleaved `(x, y)` coordinates: `x` values first
 * (`2n` doubles), then `y` values (`2n` doubles).
 */
enum PentagramStatus pentagram_polygon_from_xy(uintptr_t n,
                                               const double *data,
                                               struct PentagramPolygon **out);

/**
 * Polygon from polygon-file JSON (same schema as the CLI files).
 */
enum PentagramStatus pentagram_polygon_from_json(const char *json, struct PentagramPolygon **out);

/**
 * Serializes the polygon back to file JSON; free with
 * [`pentagram_string_free`].
 */
enum PentagramStatus pentagram_polygon_to_json(const struct PentagramPolygon *polygon, char **out);

/**
 * Frees a string returned by this library.
 */
void pentagram_string_free(char *s);

/**
 * Frees a polygon handle.
 */
void pentagram_polygon_free(struct PentagramPolygon *polygon);

/**
 * Number of vertices.
 */
uintptr_t pentagram_polygon_n(const struct PentagramPolygon *polygon);

/**
 * True when the polygon is closed (scalar monodromy).
 */
bool pentagram_polygon_is_closed(const struct PentagramPolygon *polygon);

/**
 * One pentagram step, in the polygon's own representation.
 */
enum PentagramStatus pentagram_polygon_step(const struct PentagramPolygon *polygon,
                                            struct PentagramPolygon **out);

/**
 * The `(x, y)` coordinates, interleaved as in
 * [`pentagram_polygon_from_xy`]; `buffer` must hold `4n` doubles.
 */
enum PentagramStatus pentagram_polygon_xy(const struct PentagramPolygon *polygon,
                                          double *buffer,
                                          uintptr_t capacity);

/**
 * Integrals of motion: writes `I_0..I_q`, `J_0..J_q`, then the rescaling
 * constant `C`, interleaved re/im — `2(2(q+1) + 1)` doubles, with
 * `q = n/2`. `written` receives the number of doubles stored.
 */
enum PentagramStatus pentagram_polygon_invariants(const struct PentagramPolygon *polygon,
                                                  double *buffer,
                                                  uintptr_t capacity,
                                                  uintptr_t *written);

/**
 * Genus of the spectral curve (and whether the closed-polygon stratum was
 * detected).
 */
enum PentagramStatus pentagram_polygon_genus(const struct PentagramPolygon *polygon,
                                             uintptr_t *genus,
                                             bool *closed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PENTAGRAM_H */
