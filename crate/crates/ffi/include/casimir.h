#ifndef CASIMIR_H
#define CASIMIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CasimirStatus {
  CASIMIR_STATUS_OK = 0,
  CASIMIR_STATUS_NULL_POINTER = 1,
  /**
   * Invalid argument: non-positive length, negative plasma parameter, ...
   */
  CASIMIR_STATUS_DOMAIN = 2,
  /**
   * A quadrature, series or truncation did not converge.
   */
  CASIMIR_STATUS_NUMERICS = 3,
  /**
   * `ln det(I - M)` had the wrong sign.
   */
  CASIMIR_STATUS_SPECTRAL_ANOMALY = 4,
  /**
   * Internal panic caught at the boundary.
   */
  CASIMIR_STATUS_INTERNAL = 5,
} CasimirStatus;

/**
 * Truncation orders, node counts and tolerances for the exact energy.
 */
typedef struct CasimirNumerics CasimirNumerics;

/**
 * Sphere of radius `R` whose centre sits at distance `L` from the plane.
 */
typedef struct CasimirSystem CasimirSystem;

/**
 * Exact (TGTG) energy.
 */
typedef struct CasimirEnergy {
  /**
   * `E / (hbar c)`.
   */
  double energy;
  /**
   * `E d^2 / (hbar c R)`.
   */
  double dimensionless;
  double error_estimate;
  uint32_t l_max_used;
  uint32_t m_max_used;
} CasimirEnergy;

/**
 * Small-separation expansion `E = E0 (1 + (d/R) theta + ...)`.
 */
typedef struct CasimirAsymptotic {
  double e0;
  double e1;
  double theta;
  /**
   * Truncation estimate of the `E1` series.
   */
  double error_estimate;
} CasimirAsymptotic;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into this library from the same thread.
 */
const char *casimir_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *casimir_version(void);

/**
 * Create a system; `distance` is the centre-to-plane distance `L > R`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum CasimirStatus casimir_system_new(double radius,
                                      double distance,
                                      double omega_sphere,
                                      double omega_plane,
                                      struct CasimirSystem **out);

/**
 * Release a system; null is ignored.
 *
 * # Safety
 * `system` must be null or a pointer from [`casimir_system_new`] not yet freed.
 */
void casimir_system_free(struct CasimirSystem *system);

/**
 * Default numerics: automatic truncation, 40 nodes, `rel_tol = 1e-4`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum CasimirStatus casimir_numerics_new(struct CasimirNumerics **out);

/**
 * Release numerics; null is ignored.
 *
 * # Safety
 * `numerics` must be null or a pointer from [`casimir_numerics_new`] not yet freed.
 */
void casimir_numerics_free(struct CasimirNumerics *numerics);

/**
 * Set truncation orders; 0 selects automatic truncation. Node counts of 0
 * keep the current value; tolerances that are not positive are rejected.
 *
 * # Safety
 * `numerics` must be null or a live handle.
 */
enum CasimirStatus casimir_numerics_configure(struct CasimirNumerics *numerics,
                                              uint32_t l_max,
                                              uint32_t m_max,
                                              uint32_t kappa_nodes,
                                              uint32_t theta_nodes,
                                              double rel_tol,
                                              double abs_tol);

/**
 * Exact energy. `numerics` may be null for the defaults.
 *
 * # Safety
 * `system` must be a live handle, `numerics` null or a live handle, `out`
 * valid for writing.
 */
enum CasimirStatus casimir_exact_energy(const struct CasimirSystem *system,
                                        const struct CasimirNumerics *numerics,
                                        struct CasimirEnergy *out);

/**
 * Proximity force approximation `E_PFA / (hbar c)`.
 *
 * # Safety
 * `system` must be a live handle and `out` valid for writing.
 */
enum CasimirStatus casimir_pfa_energy(const struct CasimirSystem *system, double *out);

/**
 * Leading and next-to-leading small-separation terms and `theta`.
 * `theta` is NaN when the leading term vanishes (a transparent sheet).
 *
 * # Safety
 * `system` must be a live handle and `out` valid for writing.
 */
enum CasimirStatus casimir_asymptotic(const struct CasimirSystem *system,
                                      struct CasimirAsymptotic *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CASIMIR_H */
