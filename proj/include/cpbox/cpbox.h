/*
 * Copyright 2026 The cpbox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libcpbox: a Cooper-pair box (charge qubit) coupled to a
 * phase-damped single-mode cavity.
 *
 * Conventions
 *   - Every function returns a cpbox_status. On failure a message is
 *     available from cpbox_last_error() on the calling thread until the next
 *     call into the library from that thread.
 *   - Objects are opaque handles created by *_new / producing functions and
 *     released by the matching *_free. Passing NULL to *_free is a no-op.
 *   - Strings returned through char** are heap allocated by the library and
 *     must be released with cpbox_string_free().
 *   - Rates are in units of lambda = sqrt(e^2 omega / (hbar C_F)) and times
 *     are lambda * t. The joint basis is index(n, q) = 2n + q with q = 0 for
 *     |e> and q = 1 for |g>.
 */

#ifndef CPBOX_CPBOX_H
#define CPBOX_CPBOX_H

#include <stddef.h>

#if defined(_WIN32)
#  define CPBOX_API __declspec(dllexport)
#else
#  define CPBOX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 1-3 double as CLI exit codes. */
typedef enum cpbox_status {
  CPBOX_OK = 0,
  CPBOX_ERR_INVALID_CONFIG = 1,
  CPBOX_ERR_NUMERICAL = 2,
  CPBOX_ERR_GATE = 3,
  CPBOX_ERR_IO = 4,
  CPBOX_ERR_TRUNCATION = 5,
  CPBOX_ERR_DIMENSION = 6,
  CPBOX_ERR_INTERNAL = 7
} cpbox_status;

typedef enum cpbox_run_kind {
  CPBOX_RUN_SIMULATE = 0,
  CPBOX_RUN_SWEEP_DETUNING = 1,
  CPBOX_RUN_SWEEP_DAMPING = 2
} cpbox_run_kind;

typedef enum cpbox_variant {
  CPBOX_CLOSED_AS_PRINTED = 0,
  CPBOX_CLOSED_CORRECTED = 1
} cpbox_variant;

typedef struct cpbox_config cpbox_config;
typedef struct cpbox_state cpbox_state;

typedef struct cpbox_device_params {
  double c_j;            /* F */
  double c_g;            /* F */
  double c_f;            /* F */
  double omega;          /* rad/s */
  double e_j;            /* J */
  double thermal_energy; /* k_B T in J; <= 0 means not given */
} cpbox_device_params;

typedef struct cpbox_reduced_params {
  double g;
  double delta;
  double gamma;
  double lambda_scale; /* rad/s */
} cpbox_reduced_params;

typedef struct cpbox_initial {
  double nbar;           /* mean photon number |alpha|^2 */
  double beta_phase;     /* phase of alpha */
  double theta;          /* qubit mixing angle, [0, pi/2) */
  size_t n_max;          /* 0: choose from tail_tolerance */
  double tail_tolerance; /* <= 0: 1e-10 */
} cpbox_initial;

typedef struct cpbox_metric_row {
  double t;
  double inversion;
  double linear_entropy_raw;
  double idempotency_defect;
  double concurrence_2q; /* approximate, see concurrence_reliable */
  int concurrence_reliable;
  double negativity;
  double purity;
  double mean_photons;
  double trace_error;
} cpbox_metric_row;

CPBOX_API const char* cpbox_version(void);
CPBOX_API const char* cpbox_last_error(void);
CPBOX_API const char* cpbox_status_string(cpbox_status status);
CPBOX_API void cpbox_string_free(char* s);

/* ---- configuration (flat key = value) ---------------------------------- */

CPBOX_API cpbox_status cpbox_config_new(cpbox_config** out);
CPBOX_API void cpbox_config_free(cpbox_config* cfg);
CPBOX_API cpbox_status cpbox_config_set(cpbox_config* cfg, const char* key, const char* value);
CPBOX_API cpbox_status cpbox_config_load_file(cpbox_config* cfg, const char* path);
/* Newline separated "key = value" echo of the effective configuration. */
CPBOX_API cpbox_status cpbox_config_echo(const cpbox_config* cfg, char** out);

/* ---- drivers ----------------------------------------------------------- */

/* Writes the CSV to out_path (NULL or "" for stdout, or the config's "out"
 * key when out_path is NULL). When writing to a file, a run manifest with
 * wall time and worker count goes to out_path + ".manifest". */
CPBOX_API cpbox_status cpbox_run(const cpbox_config* cfg, cpbox_run_kind kind,
                                 const char* out_path);

/* Closed form vs integrator. Writes the summary CSV to out_path (as above)
 * and a human-readable report to *report (may be NULL). Returns
 * CPBOX_ERR_GATE when any gamma = 0 point exceeds the 1e-6 residual gate. */
CPBOX_API cpbox_status cpbox_compare(const cpbox_config* cfg, const char* out_path,
                                     char** report);

/* Invariant suite on the configured point. Returns CPBOX_ERR_NUMERICAL when an
 * integrator invariant fails and CPBOX_ERR_GATE when only the closed-form
 * equivalence fails. */
CPBOX_API cpbox_status cpbox_validate(const cpbox_config* cfg, char** report);

/* ---- model ------------------------------------------------------------- */

CPBOX_API cpbox_status cpbox_reduce_params(const cpbox_device_params* device, double gamma_raw,
                                           cpbox_reduced_params* out);
/* Newline separated "code: message" lines; *count receives the number. */
CPBOX_API cpbox_status cpbox_validate_regime(const cpbox_device_params* device, char** warnings,
                                             size_t* count);
CPBOX_API cpbox_status cpbox_rabi_frequency(const cpbox_reduced_params* params, size_t n,
                                            double* out);
CPBOX_API cpbox_status cpbox_choose_truncation(double nbar, double tail_tolerance,
                                               size_t* n_max);

/* ---- states ------------------------------------------------------------ */

CPBOX_API cpbox_status cpbox_state_closed_form(const cpbox_reduced_params* params,
                                               const cpbox_initial* init, double t,
                                               cpbox_variant variant, int normalize,
                                               cpbox_state** out, double* trace_deficit);
/* Adaptive integration of the master equation from the product initial state. */
CPBOX_API cpbox_status cpbox_state_evolve(const cpbox_reduced_params* params,
                                          const cpbox_initial* init, double t,
                                          double tolerance, cpbox_state** out);
CPBOX_API void cpbox_state_free(cpbox_state* state);
CPBOX_API cpbox_status cpbox_state_dim(const cpbox_state* state, size_t* dim);
CPBOX_API cpbox_status cpbox_state_get(const cpbox_state* state, size_t row, size_t col,
                                       double* re, double* im);
CPBOX_API cpbox_status cpbox_state_metrics(const cpbox_state* state, double t,
                                           cpbox_metric_row* out);

#ifdef __cplusplus
}
#endif

#endif /* CPBOX_CPBOX_H */
