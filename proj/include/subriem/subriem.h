/* Public C API for the sub-Riemannian geodesic library.
 *
 * All functions return sr_status. On failure the thread-local message from
 * sr_last_error() describes what went wrong. Handles are created and
 * destroyed by the library; callers own output buffers.
 */
#ifndef SUBRIEM_H
#define SUBRIEM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sr_status {
  SR_OK = 0,
  SR_ERR_INPUT = 1,      /* bad arguments, malformed config */
  SR_ERR_GEOMETRY = 2,   /* singular frame, point outside the chart */
  SR_ERR_NUMERIC = 3,    /* finite-difference or transport failure */
  SR_ERR_DIVERGENCE = 4, /* trajectory blow-up */
  SR_ERR_INTERNAL = 5    /* unexpected failure inside the library */
} sr_status;

typedef struct sr_model sr_model;
typedef struct sr_trajectory sr_trajectory;

/* Message for the most recent failure on this thread. Never NULL. */
const char* sr_last_error(void);

/* Creates a built-in model by name; see sr_list_models for names. */
sr_status sr_model_create(const char* name, sr_model** out_model);

/* Creates a step-2 Carnot group model from structure constants. entries
 * holds entry_count quadruples (k, i, j, value) with 1-based indices; the
 * reversed pair (k, j, i, -value) is implied when absent. */
sr_status sr_model_create_carnot(int base_dim, int manifold_dim,
                                 const double* entries, size_t entry_count,
                                 sr_model** out_model);

void sr_model_destroy(sr_model* model);

/* Any output pointer may be NULL to skip that dimension. */
sr_status sr_model_dims(const sr_model* model, int* manifold_dim,
                        int* base_dim, int* chart_dim);

/* Integrates the normal geodesic flow from (x0, lambda0), both of chart
 * dimension, over [0, horizon] with step size step. When normalize is
 * nonzero the initial covector is rescaled to unit horizontal speed. */
sr_status sr_integrate_normal_geodesic(const sr_model* model,
                                       const double* x0,
                                       const double* lambda0, double horizon,
                                       double step, int normalize,
                                       sr_trajectory** out_trajectory);

void sr_trajectory_destroy(sr_trajectory* trajectory);

sr_status sr_trajectory_sample_count(const sr_trajectory* trajectory,
                                     int* out_count);

/* out_times must hold sample_count doubles. */
sr_status sr_trajectory_times(const sr_trajectory* trajectory,
                              double* out_times);

/* out_states must hold sample_count * 2 * chart_dim doubles; each row is
 * the chart point followed by the covector, row-major. */
sr_status sr_trajectory_states(const sr_trajectory* trajectory,
                               double* out_states);

/* Largest Hamiltonian deviation from the initial value. */
sr_status sr_trajectory_energy_drift(const sr_model* model,
                                     const sr_trajectory* trajectory,
                                     double* out_drift);

/* Frenet curvatures of the projected curve. Both outputs must hold
 * sample_count doubles; either may be NULL to skip it. */
sr_status sr_trajectory_curvatures(const sr_model* model,
                                   const sr_trajectory* trajectory,
                                   double* out_kappa1, double* out_kappa2);

/* Optional overrides for sr_run_experiment and sr_verify_model. The has_*
 * flags select which fields are read; output_dir may be NULL. */
typedef struct sr_run_options {
  double tol_algebraic;
  int has_tol_algebraic;
  double tol_numeric;
  int has_tol_numeric;
  uint64_t seed;
  int has_seed;
  const char* output_dir;
} sr_run_options;

/* Runs every experiment in the config file. options may be NULL. On SR_OK,
 * *out_exit_code is 0 when all checks passed and 1 otherwise. */
sr_status sr_run_experiment(const char* config_path,
                            const sr_run_options* options, int* out_exit_code);

/* Runs the full model-level check suite against one built-in model. */
sr_status sr_verify_model(const char* model_name,
                          const sr_run_options* options, int* out_exit_code);

/* Fills buffer with newline-separated listings. *out_needed receives the
 * required size including the terminator; buffer may be NULL when
 * buffer_size is 0. Truncates silently when the buffer is too small. */
sr_status sr_list_models(char* buffer, size_t buffer_size, size_t* out_needed);
sr_status sr_list_checks(char* buffer, size_t buffer_size, size_t* out_needed);

#ifdef __cplusplus
}
#endif

#endif /* SUBRIEM_H */
