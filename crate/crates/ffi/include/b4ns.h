#ifndef B4NS_H
#define B4NS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum B4nsStatus {
  B4NS_STATUS_OK = 0,
  B4NS_STATUS_NULL_POINTER = 1,
  B4NS_STATUS_INVALID_ARGUMENT = 2,
  B4NS_STATUS_CONSTRAINT = 3,
  B4NS_STATUS_NUMERICAL = 4,
  B4NS_STATUS_IO = 5,
  B4NS_STATUS_FORMAT = 6,
  B4NS_STATUS_BUFFER_TOO_SMALL = 7,
  B4NS_STATUS_PANIC = 8,
} B4nsStatus;

// Nonlinearity derivative: `Modulus` is `|∇|`, `Coordinate` is `∂_{x_axis}`.
typedef enum B4nsDerivative {
  B4NS_DERIVATIVE_MODULUS = 0,
  B4NS_DERIVATIVE_COORDINATE = 1,
} B4nsDerivative;

// A band-limited field on a periodic grid.
typedef struct B4nsField B4nsField;

// Outcome of a scenario run.
typedef struct B4nsRecord B4nsRecord;

// An equation `i∂_t u − Δ²u = ∂P(u, ū)`.
typedef struct B4nsSpec B4nsSpec;

// Time samples of a solution.
typedef struct B4nsTrajectory B4nsTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message (NUL-terminated) into
// `buf`. Returns the number of bytes the full message needs, including the
// terminator; nothing is written when `len` is too small.
size_t b4ns_last_error(char *buf, size_t len);

// A field from `count = n^dim` interleaved coefficients.
enum B4nsStatus b4ns_field_new(size_t dim,
                               size_t n,
                               double length,
                               const double *coeffs,
                               size_t count,
                               struct B4nsField **out);

void b4ns_field_free(struct B4nsField *field);

// Number of complex coefficients.
enum B4nsStatus b4ns_field_len(const struct B4nsField *field, size_t *out);

// Copies the coefficients into `buf`, which holds `2 * len` doubles.
enum B4nsStatus b4ns_field_coeffs(const struct B4nsField *field, double *buf, size_t len);

enum B4nsStatus b4ns_field_sobolev_norm(const struct B4nsField *field,
                                        double s,
                                        bool homogeneous,
                                        double *out);

// `S(t)φ` as a new field.
enum B4nsStatus b4ns_free_propagate(const struct B4nsField *field,
                                    double t,
                                    struct B4nsField **out);

// The single monomial `u^α ū^{degree−α}` under the given derivative.
enum B4nsStatus b4ns_spec_monomial(size_t dim,
                                   size_t degree,
                                   size_t alpha,
                                   enum B4nsDerivative derivative,
                                   size_t axis,
                                   struct B4nsSpec **out);

// Multiplies every coefficient by `factor`; `0` gives the free equation.
enum B4nsStatus b4ns_spec_scale(struct B4nsSpec *spec, double factor);

void b4ns_spec_free(struct B4nsSpec *spec);

// Integrates on `[0, horizon]` with step `dt`, keeping every `stride`-th
// state.
enum B4nsStatus b4ns_evolve(const struct B4nsField *field,
                            const struct B4nsSpec *spec,
                            double horizon,
                            double dt,
                            size_t stride,
                            struct B4nsTrajectory **out);

enum B4nsStatus b4ns_trajectory_len(const struct B4nsTrajectory *traj, size_t *out);

enum B4nsStatus b4ns_trajectory_time(const struct B4nsTrajectory *traj, size_t index, double *out);

// A copy of sample `index` as a new field.
enum B4nsStatus b4ns_trajectory_state(const struct B4nsTrajectory *traj,
                                      size_t index,
                                      struct B4nsField **out);

void b4ns_trajectory_free(struct B4nsTrajectory *traj);

// p-variation of a real path, optionally with a terminal jump to zero.
enum B4nsStatus b4ns_p_variation_scalar(const double *values,
                                        size_t len,
                                        double p,
                                        bool endpoint_jump,
                                        double *out);

// `−|ξ|⁴ + Σ ±_j |ξ_j|⁴`; `signs[j]` is `+1` or `−1`.
enum B4nsStatus b4ns_resonance_omega(double xi_out,
                                     const double *xi_in,
                                     const int8_t *signs,
                                     size_t m,
                                     double *out);

// `∫₀ᵗ e^{iΩs} ds` written to `(re, im)`.
enum B4nsStatus b4ns_oscillatory_weight(double omega, double t, double *re, double *im);

// Runs the named scenario. `config` is the text of a `key = value` file and
// may be null for the defaults.
enum B4nsStatus b4ns_run_scenario(const char *scenario,
                                  const char *config,
                                  struct B4nsRecord **out);

enum B4nsStatus b4ns_record_pass(const struct B4nsRecord *record, bool *out);

// Scalar output `key` of a record.
enum B4nsStatus b4ns_record_output(const struct B4nsRecord *record, const char *key, double *out);

// The record as JSON. See [`b4ns_last_error`] for the buffer protocol:
// `*required` receives the size needed including the terminator.
enum B4nsStatus b4ns_record_json(const struct B4nsRecord *record,
                                 char *buf,
                                 size_t len,
                                 size_t *required);

void b4ns_record_free(struct B4nsRecord *record);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* B4NS_H */
