#ifndef PS_RYDBERG_H
#define PS_RYDBERG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum PsStatus {
  PS_STATUS_OK = 0,
  PS_STATUS_NULL_POINTER = 1,
  PS_STATUS_INVALID_ARGUMENT = 2,
  PS_STATUS_DOMAIN = 3,
  PS_STATUS_FORBIDDEN = 4,
  PS_STATUS_CONFIG = 5,
  PS_STATUS_CONVERGENCE = 6,
  PS_STATUS_JSON = 7,
  PS_STATUS_IO = 8,
  PS_STATUS_PANIC = 9,
} PsStatus;

/**
 * Ladder scheme: which intermediate level the first laser drives.
 */
typedef enum PsScheme {
  PS_SCHEME_VIA_N3 = 0,
  PS_SCHEME_VIA_N2 = 1,
} PsScheme;

/**
 * Time series stored in a [`PsEnsemble`].
 */
typedef enum PsSeries {
  PS_SERIES_TIME = 0,
  PS_SERIES_GROUND = 1,
  PS_SERIES_MID = 2,
  PS_SERIES_RYDBERG = 3,
  PS_SERIES_IONIZED = 4,
  PS_SERIES_GROUND_SE = 5,
  PS_SERIES_MID_SE = 6,
  PS_SERIES_RYDBERG_SE = 7,
  PS_SERIES_IONIZED_SE = 8,
} PsSeries;

/**
 * Opaque ensemble result.
 */
typedef struct PsEnsemble PsEnsemble;

/**
 * Opaque simulation configuration.
 */
typedef struct PsLadderConfig PsLadderConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next library call on the same thread.
 */
const char *ps_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ps_version(void);

/**
 * Releases a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ps_string_free(char *s);

/**
 * Saturation fluence (J/m²) of 1S → 3P at `temperature` (K) and `b_field` (T).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PsStatus ps_fsat_13(double temperature, double b_field, double *out);

/**
 * Band saturation fluence (J/m²) from 3P into the n band.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PsStatus ps_fsat_3n(uint32_t n, double *out);

/**
 * Pulse energy (J) reaching `overdrive`·F_sat over a spot of FWHM
 * `spot_fwhm` (m).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PsStatus ps_pulse_energy(double f_sat, double spot_fwhm, double overdrive, double *out);

/**
 * Hydrogen radial integral ⟨n1 l1|r|n2 l2⟩ in Bohr radii.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PsStatus ps_radial_element(uint32_t n1, uint32_t l1, uint32_t n2, uint32_t l2, double *out);

/**
 * Einstein B coefficient (m³ J⁻¹ s⁻²) of a z-polarized positronium
 * transition.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PsStatus ps_einstein_b(uint32_t n1,
                            uint32_t l1,
                            int32_t m1,
                            uint32_t n2,
                            uint32_t l2,
                            int32_t m2,
                            double *out);

/**
 * First n where neighbouring Stark manifolds overlap and first n that
 * ionizes in the motional field; 0 when none exists below the search limit.
 *
 * # Safety
 * Both out pointers must be valid for writes.
 */
enum PsStatus ps_structure_markers(double temperature,
                                   double b_field,
                                   uint32_t *interleaving_onset,
                                   uint32_t *ionization_onset);

/**
 * Reference configuration of a scheme: 100 K, 1 T, n = 25, 300 realizations.
 *
 * # Safety
 * `out` must be valid for writes; the handle is freed with
 * [`ps_ladder_config_free`].
 */
enum PsStatus ps_ladder_config_new(enum PsScheme scheme, struct PsLadderConfig **out);

/**
 * Parses a configuration from JSON (the format of
 * [`ps_ladder_config_to_json`]) and validates it.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum PsStatus ps_ladder_config_from_json(const char *json, struct PsLadderConfig **out);

/**
 * Serializes a configuration to JSON; free the string with
 * [`ps_string_free`].
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be valid for writes.
 */
enum PsStatus ps_ladder_config_to_json(const struct PsLadderConfig *cfg, char **out);

/**
 * Releases a configuration handle. NULL is ignored.
 *
 * # Safety
 * `cfg` must come from this library and not have been freed.
 */
void ps_ladder_config_free(struct PsLadderConfig *cfg);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum PsStatus ps_ladder_config_set_seed(struct PsLadderConfig *cfg, uint64_t seed);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum PsStatus ps_ladder_config_set_realizations(struct PsLadderConfig *cfg, size_t n);

/**
 * Gas temperature (K).
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum PsStatus ps_ladder_config_set_temperature(struct PsLadderConfig *cfg, double kelvin);

/**
 * Fluence (J/m²) of pulse `leg` (0 or 1).
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum PsStatus ps_ladder_config_set_fluence(struct PsLadderConfig *cfg,
                                           uint32_t leg_index,
                                           double fluence);

/**
 * Enables or disables radiative decay of the intermediate level.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum PsStatus ps_ladder_config_set_decay(struct PsLadderConfig *cfg, bool enabled);

/**
 * # Safety
 * `cfg` must be a live handle; `out` must be valid for writes.
 */
enum PsStatus ps_ladder_config_fluence(const struct PsLadderConfig *cfg,
                                       uint32_t leg_index,
                                       double *out);

/**
 * Runs the stochastic ensemble. Release the result with
 * [`ps_ensemble_free`].
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be valid for writes.
 */
enum PsStatus ps_simulate_ensemble(const struct PsLadderConfig *cfg, struct PsEnsemble **out);

/**
 * Releases an ensemble handle. NULL is ignored.
 *
 * # Safety
 * `res` must come from this library and not have been freed.
 */
void ps_ensemble_free(struct PsEnsemble *res);

/**
 * Number of recorded time points.
 *
 * # Safety
 * `res` must be a live handle; `out` must be valid for writes.
 */
enum PsStatus ps_ensemble_len(const struct PsEnsemble *res, size_t *out);

/**
 * Final Rydberg fraction and its standard error.
 *
 * # Safety
 * `res` must be a live handle; both out pointers must be valid for writes.
 */
enum PsStatus ps_ensemble_final_rydberg(const struct PsEnsemble *res, double *mean, double *se);

/**
 * Final ionized fraction and its standard error.
 *
 * # Safety
 * `res` must be a live handle; both out pointers must be valid for writes.
 */
enum PsStatus ps_ensemble_final_ionization(const struct PsEnsemble *res, double *mean, double *se);

/**
 * Copies one time series into `buf`, which must hold exactly
 * [`ps_ensemble_len`] values.
 *
 * # Safety
 * `res` must be a live handle; `buf` must be valid for `len` writes.
 */
enum PsStatus ps_ensemble_series(const struct PsEnsemble *res,
                                 enum PsSeries series,
                                 double *buf,
                                 size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PS_RYDBERG_H */
