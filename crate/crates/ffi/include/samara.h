#ifndef SAMARA_H
#define SAMARA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call. Values 2 to 4 match the CLI exit codes.
 */
typedef enum SamaraStatus {
  SAMARA_STATUS_OK = 0,
  SAMARA_STATUS_NULL_POINTER = 1,
  SAMARA_STATUS_INPUT_ERROR = 2,
  SAMARA_STATUS_SOLVER_ERROR = 3,
  SAMARA_STATUS_INFEASIBLE = 4,
  SAMARA_STATUS_PANIC = 5,
} SamaraStatus;

/**
 * Opaque model handle.
 */
typedef struct SamaraModel SamaraModel;

/**
 * Hover trim at one voltage. SI units.
 */
typedef struct SamaraTrim {
  double voltage;
  /**
   * rad/s
   */
  double omega_rev;
  double thrust;
  double torque;
  double payload_margin;
  double prop_thrust;
  /**
   * rad/s
   */
  double prop_omega;
  double prop_induced_velocity;
  double prop_axial_inflow;
  double c_t_r;
  double c_q;
  double robot_mass;
} SamaraTrim;

/**
 * Propeller operating point. SI units.
 */
typedef struct SamaraPropState {
  double omega;
  double induced_velocity;
  double thrust;
  double torque;
  bool stalled;
} SamaraPropState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *samara_last_error(void);

/**
 * Creates a model from a built-in profile such as `crazyflie-bench`.
 *
 * # Safety
 * `profile` must be a NUL-terminated string and `out` a writable pointer.
 */
enum SamaraStatus samara_model_from_profile(const char *profile, struct SamaraModel **out);

/**
 * Creates a model from config-file text layered on a built-in profile.
 *
 * # Safety
 * `profile` and `text` must be NUL-terminated strings and `out` writable.
 */
enum SamaraStatus samara_model_from_config(const char *profile,
                                           const char *text,
                                           struct SamaraModel **out);

/**
 * Creates a model from a config file layered on a built-in profile.
 *
 * # Safety
 * `profile` and `path` must be NUL-terminated strings and `out` writable.
 */
enum SamaraStatus samara_model_from_config_file(const char *profile,
                                                const char *path,
                                                struct SamaraModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must come from a `samara_model_*` constructor and not be used again.
 */
void samara_model_free(struct SamaraModel *model);

/**
 * Full config text of the model. Free with `samara_string_free`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SamaraStatus samara_model_config_text(const struct SamaraModel *model, char **out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void samara_string_free(char *s);

/**
 * Hover trim at drive voltage `voltage`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SamaraStatus samara_predict(const struct SamaraModel *model,
                                 double voltage,
                                 struct SamaraTrim *out);

/**
 * Wing thrust and torque coefficients: T = c_t_r Ω², Q = c_q Ω².
 *
 * # Safety
 * `model` must be a live handle; `c_t_r` and `c_q` writable.
 */
enum SamaraStatus samara_wing_coefficients(const struct SamaraModel *model,
                                           double *c_t_r,
                                           double *c_q);

/**
 * Propeller operating point at `voltage` with axial inflow `inflow` (m/s).
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SamaraStatus samara_prop_operating_point(const struct SamaraModel *model,
                                              double voltage,
                                              double inflow,
                                              struct SamaraPropState *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SAMARA_H */
