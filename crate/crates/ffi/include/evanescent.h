#ifndef EVANESCENT_H
#define EVANESCENT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EvStatus {
  EV_STATUS_OK = 0,
  EV_STATUS_NULL_POINTER = 1,
  EV_STATUS_INVALID_ARGUMENT = 2,
  EV_STATUS_DOMAIN = 3,
  EV_STATUS_NO_CONVERGENCE = 4,
  EV_STATUS_BUFFER_TOO_SMALL = 5,
  EV_STATUS_PANIC = 6,
} EvStatus;

typedef enum EvPolarization {
  EV_POLARIZATION_S = 0,
  EV_POLARIZATION_P = 1,
} EvPolarization;

typedef enum EvRegionKind {
  EV_REGION_KIND_ALLOWED = 0,
  EV_REGION_KIND_FORBIDDEN = 1,
  EV_REGION_KIND_TURNING_POINT = 2,
} EvRegionKind;

/**
 * Opaque waveguide mode.
 */
typedef struct EvMode EvMode;

/**
 * Opaque zero-energy potential `V = U - E` on a uniform grid.
 */
typedef struct EvPotential EvPotential;

/**
 * Opaque layered stack.
 */
typedef struct EvStack EvStack;

typedef struct EvDispersion {
  double omega;
  double omega_c;
  double k_re;
  double k_im;
  /**
   * Nonzero when `v_p` and `v_g` are defined (above cutoff).
   */
  int32_t propagating;
  double v_p;
  double v_g;
} EvDispersion;

typedef struct EvScattering {
  double r_re;
  double r_im;
  double t_re;
  double t_im;
  double reflectance;
  double transmittance;
  double phase_t;
} EvScattering;

typedef struct EvAmplitudes {
  double r_re;
  double r_im;
  double t_re;
  double t_im;
} EvAmplitudes;

typedef struct EvRegion {
  enum EvRegionKind kind;
  size_t start;
  size_t end;
  double x_a;
  double x_b;
} EvRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` as a
 * NUL-terminated string and returns its length without the terminator.
 * With a null `buf` or too small a `len` nothing is written, so the caller
 * can query the length first.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t ev_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ev_version(void);

/**
 * # Safety
 * `result` must be null or valid for writes.
 */
enum EvStatus ev_critical_angle(double n1, double n2, double *result);

/**
 * # Safety
 * `mode` must be null or valid for writes.
 */
enum EvStatus ev_mode_new(double a, double b, uint32_t n1, uint32_t n2, struct EvMode **mode);

/**
 * # Safety
 * `mode` must be null or a handle from `ev_mode_new` not yet freed.
 */
void ev_mode_free(struct EvMode *mode);

/**
 * # Safety
 * `mode` must be a live handle and `result` valid for writes.
 */
enum EvStatus ev_mode_dispersion(const struct EvMode *mode,
                                 double omega,
                                 struct EvDispersion *result);

/**
 * A stack with no layers between two half-spaces.
 *
 * # Safety
 * `stack` must be null or valid for writes.
 */
enum EvStatus ev_stack_new(double n_entry, double n_exit, struct EvStack **stack);

/**
 * Parses `{"entry":{"n":..},"layers":[{"n":..,"d":..}],"exit":{"n":..}}`.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `stack` valid for writes.
 */
enum EvStatus ev_stack_from_json(const char *json, struct EvStack **stack);

/**
 * Appends a layer on the exit side.
 *
 * # Safety
 * `stack` must be a live handle.
 */
enum EvStatus ev_stack_push_layer(struct EvStack *stack, double n, double thickness);

/**
 * # Safety
 * `stack` must be null or a handle not yet freed.
 */
void ev_stack_free(struct EvStack *stack);

/**
 * Transfer-matrix reflection and transmission.
 *
 * # Safety
 * `stack` must be a live handle and `result` valid for writes.
 */
enum EvStatus ev_stack_scattering(const struct EvStack *stack,
                                  double omega,
                                  double theta0,
                                  enum EvPolarization polarization,
                                  struct EvScattering *result);

/**
 * Group delay of the transmitted wave. A `d_omega` of zero selects the
 * default step.
 *
 * # Safety
 * `stack` must be a live handle and `result` valid for writes.
 */
enum EvStatus ev_stack_group_delay(const struct EvStack *stack,
                                   double omega,
                                   double theta0,
                                   enum EvPolarization polarization,
                                   double d_omega,
                                   double *result);

/**
 * Amplitudes from direct integration of the wave equation (S polarization).
 *
 * # Safety
 * `stack` must be a live handle and `result` valid for writes.
 */
enum EvStatus ev_stack_oracle(const struct EvStack *stack,
                              double omega,
                              double theta0,
                              struct EvAmplitudes *result);

/**
 * Samples `U` on `n` uniform points over `[x_min, x_max]` and stores the
 * zero-energy form `U - energy`.
 *
 * # Safety
 * `u` must point to `n` readable doubles; `potential` valid for writes.
 */
enum EvStatus ev_potential_new(double x_min,
                               double x_max,
                               const double *u,
                               size_t n,
                               double energy,
                               struct EvPotential **potential);

/**
 * # Safety
 * `potential` must be null or a handle not yet freed.
 */
void ev_potential_free(struct EvPotential *potential);

/**
 * Writes up to `cap` regions into `regions` and the total count into
 * `count`. Returns `BufferTooSmall` (with `count` set) when `cap` is short.
 *
 * # Safety
 * `potential` must be a live handle, `regions` null or valid for `cap`
 * writes, `count` valid for writes.
 */
enum EvStatus ev_potential_regions(const struct EvPotential *potential,
                                   struct EvRegion *regions,
                                   size_t cap,
                                   size_t *count);

/**
 * Euclidean and Lorentzian actions over grid indices `start..=end`.
 *
 * # Safety
 * `potential` must be a live handle; `euclidean` and `lorentzian` valid for
 * writes.
 */
enum EvStatus ev_potential_action(const struct EvPotential *potential,
                                  size_t start,
                                  size_t end,
                                  double *euclidean,
                                  double *lorentzian);

/**
 * Imaginary-time lapse `|dS_r/dE|` through a forbidden span.
 *
 * # Safety
 * `potential` must be a live handle and `result` valid for writes.
 */
enum EvStatus ev_potential_imaginary_time(const struct EvPotential *potential,
                                          size_t start,
                                          size_t end,
                                          double d_energy,
                                          double *result);

/**
 * Eigenvalue of a flat infinite well inside `[lo, hi]`.
 *
 * # Safety
 * `result` must be valid for writes.
 */
enum EvStatus ev_infinite_well_energy(double width,
                                      double mass,
                                      double hbar,
                                      double lo,
                                      double hi,
                                      double *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EVANESCENT_H */
