// Copyright 2026 The collisim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COLLISIM_H_
#define COLLISIM_H_

/* C interface to the collisim engine. All objects are opaque handles owned
 * by the caller and released with the matching *_destroy function. Every
 * fallible call returns a collisim_status; on failure the message is
 * available from collisim_last_error() on the same thread. */

#include <stddef.h>

#if defined(_WIN32)
#  define COLLISIM_API __declspec(dllexport)
#else
#  define COLLISIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum collisim_status {
    COLLISIM_OK = 0,
    COLLISIM_ERR_INVALID_ARGUMENT = 1, /* null handle, unknown key, precondition */
    COLLISIM_ERR_DOMAIN = 2,
    COLLISIM_ERR_LABEL = 3,
    COLLISIM_ERR_DIMENSION = 4,
    COLLISIM_ERR_SINGULARITY = 5,
    COLLISIM_ERR_DEGENERATE_FREQUENCY = 6,
    COLLISIM_ERR_NUMERIC = 7,
    COLLISIM_ERR_CONFIG = 8,
    COLLISIM_ERR_IO = 9,
    COLLISIM_ERR_INTERNAL = 10
} collisim_status;

typedef enum collisim_mode { COLLISIM_MODE_ORIGINAL = 0, COLLISIM_MODE_EFFECTIVE = 1 } collisim_mode;

typedef enum collisim_propagator {
    COLLISIM_PROPAGATOR_SPECTRAL = 0,
    COLLISIM_PROPAGATOR_RUNGE_KUTTA = 1
} collisim_propagator;

typedef enum collisim_equation {
    COLLISIM_EQUATION_EFFECTIVE_QUBIT = 0,  /* two-level, rates Gamma e^{x_s} and Gamma */
    COLLISIM_EQUATION_QUTRIT_TWO_BATH = 1   /* three-level, both baths and dephasing */
} collisim_equation;

typedef enum collisim_hamiltonian {
    COLLISIM_HAMILTONIAN_ORIGINAL = 0,  /* H' */
    COLLISIM_HAMILTONIAN_EFFECTIVE = 1, /* H_eff with level shifts */
    COLLISIM_HAMILTONIAN_ROTATED = 2    /* V */
} collisim_hamiltonian;

typedef struct collisim_rates {
    double alpha;
    double capital_gamma;
    double x_s;
    double beta_s; /* NaN unless both ancilla frequencies are set and distinct */
    double gamma1;
    double gamma2;
    double r_ratio;
} collisim_rates;

typedef struct collisim_params collisim_params;
typedef struct collisim_trajectory collisim_trajectory;
typedef struct collisim_config collisim_config;
typedef struct collisim_report collisim_report;

COLLISIM_API const char* collisim_version(void);
COLLISIM_API const char* collisim_status_string(collisim_status status);
COLLISIM_API const char* collisim_last_error(void);

/* Parameters. Keys: g, delta, x1, x2, omega_a1, omega_a2, tau, n_steps.
 * Defaults: g = 1, delta = 0, x1 = x2 = 0, tau = 1, n_steps = 1, no ancilla
 * frequencies. */
COLLISIM_API collisim_status collisim_params_create(collisim_params** out);
COLLISIM_API void collisim_params_destroy(collisim_params* params);
COLLISIM_API collisim_status collisim_params_set(collisim_params* params, const char* key, double value);
COLLISIM_API collisim_status collisim_params_get(const collisim_params* params, const char* key, double* value);
COLLISIM_API collisim_status collisim_params_validate(const collisim_params* params);
COLLISIM_API collisim_status collisim_params_derive(const collisim_params* params, collisim_rates* out);

/* 12x12 Hamiltonian on A1 x A2 x S, written row-major as interleaved
 * (re, im) pairs into out[288]. */
COLLISIM_API collisim_status collisim_build_hamiltonian(const collisim_params* params, collisim_hamiltonian which,
                                                        double* out, size_t out_len);

/* Stroboscopic run from a diagonal qutrit state. substeps <= 0 selects the
 * default for the Runge-Kutta propagator and is ignored for spectral. */
COLLISIM_API collisim_status collisim_run_collisions(const collisim_params* params, const double initial_populations[3],
                                                     collisim_mode mode, collisim_propagator propagator,
                                                     long substeps, collisim_trajectory** out);

/* Master-equation populations sampled at t = n tau, n = 0..n_steps. */
COLLISIM_API collisim_status collisim_run_master_equation(const collisim_params* params, collisim_equation equation,
                                                          const double initial_populations[3],
                                                          collisim_trajectory** out);

/* Closed evolution of |1_A1, 0_A2, 0_S> on grid_points uniform times in
 * [0, alpha_t_end / alpha]. */
COLLISIM_API collisim_status collisim_closed_evolution(const collisim_params* params, collisim_hamiltonian which,
                                                       double alpha_t_end, size_t grid_points,
                                                       collisim_trajectory** out);

COLLISIM_API size_t collisim_trajectory_size(const collisim_trajectory* traj);
COLLISIM_API collisim_status collisim_trajectory_entry(const collisim_trajectory* traj, size_t index, long* step,
                                                       double* t, double populations[3]);
COLLISIM_API const char* collisim_trajectory_source(const collisim_trajectory* traj);
COLLISIM_API collisim_status collisim_trajectory_write_csv(const collisim_trajectory* const* trajs, size_t count,
                                                           const char* path);
COLLISIM_API void collisim_trajectory_destroy(collisim_trajectory* traj);

/* Scenario configuration files. */
COLLISIM_API collisim_status collisim_config_load(const char* path, collisim_config** out);
COLLISIM_API collisim_status collisim_config_parse(const char* text, collisim_config** out);
COLLISIM_API collisim_status collisim_config_validate(const collisim_config* cfg);
COLLISIM_API collisim_status collisim_config_set_output_dir(collisim_config* cfg, const char* dir);
COLLISIM_API int collisim_config_is_sweep(const collisim_config* cfg);
COLLISIM_API const char* collisim_config_scenario(const collisim_config* cfg);
COLLISIM_API void collisim_config_destroy(collisim_config* cfg);

/* Runs the configured scenario, writing its output files. A tolerance
 * failure is not an error: the call returns COLLISIM_OK and the report says
 * whether it passed. */
COLLISIM_API collisim_status collisim_run_scenario(const collisim_config* cfg, collisim_report** out);
COLLISIM_API int collisim_report_passed(const collisim_report* report);
COLLISIM_API const char* collisim_report_text(const collisim_report* report);
COLLISIM_API const char* collisim_report_summary(const collisim_report* report);
COLLISIM_API void collisim_report_destroy(collisim_report* report);

#ifdef __cplusplus
}
#endif

#endif /* COLLISIM_H_ */
