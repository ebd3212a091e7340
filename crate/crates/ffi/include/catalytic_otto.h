#ifndef CATALYTIC_OTTO_H
#define CATALYTIC_OTTO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CottoStatus {
  COTTO_STATUS_OK = 0,
  COTTO_STATUS_NULL_POINTER = 1,
  COTTO_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The protocol admits no cycle at the requested catalyst state.
   */
  COTTO_STATUS_INFEASIBLE = 3,
  COTTO_STATUS_PARSE_ERROR = 4,
  /**
   * Output buffer too small.
   */
  COTTO_STATUS_BUFFER_TOO_SMALL = 5,
  COTTO_STATUS_PANIC = 6,
} CottoStatus;

typedef enum CottoFixedPoint {
  COTTO_FIXED_POINT_MAX_WORK = 0,
  COTTO_FIXED_POINT_MAX_EFFICIENCY = 1,
} CottoFixedPoint;

/**
 * Hot and cold thermal qubits.
 */
typedef struct CottoEngine CottoEngine;

/**
 * A validated swap protocol.
 */
typedef struct CottoProtocol CottoProtocol;

/**
 * Closed-form d-Otto quantities.
 */
typedef struct CottoClosedForm {
  double eta_d;
  double work_d;
  double f_d;
  double delta_p;
  bool in_engine_regime;
} CottoClosedForm;

/**
 * One simulated cycle. `eta` and `delta_p` are meaningful only when the
 * matching `has_*` flag is set.
 */
typedef struct CottoCycle {
  double q_h;
  double q_c;
  double work;
  double eta;
  bool has_eta;
  double eta_carnot;
  double delta_p;
  bool has_delta_p;
  double cyclicity_residual;
  size_t catalyst_dim;
} CottoCycle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *cotto_last_error(void);

/**
 * Creates an engine from the two baths. Frequencies and inverse temperatures
 * must be finite and non-negative.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CottoStatus cotto_engine_new(double beta_h,
                                  double omega_h,
                                  double beta_c,
                                  double omega_c,
                                  struct CottoEngine **out);

/**
 * # Safety
 * `engine` must be NULL or a handle from [`cotto_engine_new`] not yet freed.
 */
void cotto_engine_free(struct CottoEngine *engine);

/**
 * Closed-form efficiency, work and flow of the d-Otto protocol.
 *
 * # Safety
 * `engine` must be a live handle and `out` valid for one write.
 */
enum CottoStatus cotto_closed_form(const struct CottoEngine *engine,
                                   size_t d,
                                   struct CottoClosedForm *out);

/**
 * Whether dimension `d` runs the d-Otto protocol as an engine.
 *
 * # Safety
 * `engine` must be a live handle and `out` valid for one write.
 */
enum CottoStatus cotto_engine_regime(const struct CottoEngine *engine, size_t d, bool *out);

/**
 * The d-Otto protocol for a `d`-level catalyst.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum CottoStatus cotto_protocol_d_otto(size_t d, struct CottoProtocol **out);

/**
 * Parses a protocol in text form: one `i j k i' j' k'` swap per line, or a
 * single `perm: ...` line.
 *
 * # Safety
 * `text` must be a NUL-terminated UTF-8 string and `out` valid for one write.
 */
enum CottoStatus cotto_protocol_parse(const char *text, size_t d, struct CottoProtocol **out);

/**
 * Catalyst dimension of a protocol, or 0 for NULL.
 *
 * # Safety
 * `proto` must be NULL or a live handle.
 */
size_t cotto_protocol_dim(const struct CottoProtocol *proto);

/**
 * # Safety
 * `proto` must be NULL or a protocol handle not yet freed.
 */
void cotto_protocol_free(struct CottoProtocol *proto);

/**
 * Runs one cycle at the chosen fixed point of the catalyst. When `catalyst`
 * is non-NULL the catalyst distribution is copied into it; `catalyst_len`
 * must then be at least the protocol dimension.
 *
 * # Safety
 * `engine` and `proto` must be live handles, `out` valid for one write and
 * `catalyst` NULL or valid for `catalyst_len` writes.
 */
enum CottoStatus cotto_run_cycle(const struct CottoEngine *engine,
                                 const struct CottoProtocol *proto,
                                 enum CottoFixedPoint fixed_point,
                                 struct CottoCycle *out,
                                 double *catalyst,
                                 size_t catalyst_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CATALYTIC_OTTO_H */
