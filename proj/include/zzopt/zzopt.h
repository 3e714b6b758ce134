/* Licensed under the Apache License, Version 2.0 (the "License");
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

/* C interface to the zzopt library: Ziv-Zakai / Cramer-Rao bounds on OFDM
 * time-of-arrival estimation, pilot power allocation optimizers, and a
 * Monte Carlo ranging simulator.
 *
 * All functions returning zzopt_status report failures through the return
 * code; zzopt_last_error() gives a human-readable message for the most
 * recent failure on the calling thread.
 */

#ifndef ZZOPT_ZZOPT_H
#define ZZOPT_ZZOPT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ZZOPT_VERSION "1.0.0"

typedef enum zzopt_status {
    ZZOPT_OK = 0,
    ZZOPT_ERR_INVALID_ARGUMENT = 1,
    ZZOPT_ERR_INFEASIBLE = 2,
    ZZOPT_ERR_NUMERIC = 3,
    ZZOPT_ERR_INTERNAL = 4
} zzopt_status;

enum {
    ZZOPT_SCHEME_COHERENT = 0,
    ZZOPT_SCHEME_NONCOHERENT = 1
};

/* Anchor selection for the integer solver. */
enum {
    ZZOPT_ANCHOR_AUTO = -1, /* scheme-dependent default */
    ZZOPT_ANCHOR_NONE = -2
};

const char* zzopt_version(void);

/* Message describing the most recent error on this thread. Never NULL. */
const char* zzopt_last_error(void);

/* Opaque model handle: OFDM configuration plus precomputed quadrature
 * tables. Creation is the expensive step; evaluations against one handle
 * are safe from multiple threads. */
typedef struct zzopt_model zzopt_model;

/* quad_points is the number of quadrature subintervals over the prior
 * window (must be even and positive); pass 0 for the default (4096). */
zzopt_status zzopt_model_create(int subcarriers, double delta_f_hz,
                                double prior_window_samples, int quad_points,
                                zzopt_model** out);
void zzopt_model_destroy(zzopt_model* model);

int zzopt_model_subcarriers(const zzopt_model* model);
double zzopt_model_sample_period(const zzopt_model* model);
double zzopt_model_prior_window_samples(const zzopt_model* model);

/* Coherent and noncoherent autocorrelation values at delay z (samples).
 * rho has length K. Either output pointer may be NULL. */
zzopt_status zzopt_acf(const zzopt_model* model, const double* rho, double z,
                       double* coherent_out, double* noncoherent_out);

/* Ziv-Zakai bound on TOA variance [s^2]. gamma is the integrated SNR
 * (linear). */
zzopt_status zzopt_zzb(const zzopt_model* model, int scheme, double gamma,
                       const double* rho, double* out);

/* Cramer-Rao bound on TOA variance [s^2]. Fails with ZZOPT_ERR_NUMERIC when
 * the Fisher information is singular. */
zzopt_status zzopt_crlb(const zzopt_model* model, double gamma,
                        const double* rho, double* out);

typedef struct zzopt_convex_result {
    double objective;            /* ZZB at the solution [s^2] */
    int iterations;
    double first_order_residual;
    int converged;               /* 1 if the residual tolerance was met */
} zzopt_convex_result;

/* Minimize the ZZB over the simplex of power allocations.
 * max_iter <= 0 and tol <= 0 select the defaults (200, 1e-7).
 * rho_out receives K values. Nonconvergence is not an error; check
 * result->converged. */
zzopt_status zzopt_solve_convex(const zzopt_model* model, int scheme,
                                double gamma, int max_iter, double tol,
                                double* rho_out, zzopt_convex_result* result);

typedef struct zzopt_integer_result {
    double upper_bound;      /* ZZB of the returned allocation [s^2] */
    double lower_bound;      /* best relaxation lower bound [s^2] */
    double gap;              /* (upper - lower) / lower */
    int iterations;
    int nodes_explored;
} zzopt_integer_result;

/* Branch-and-bound solve of the L-subcarrier selection problem: exactly L
 * subcarriers receive power 1/L each. pin_anchor is a subcarrier index
 * forced into the support, or ZZOPT_ANCHOR_AUTO / ZZOPT_ANCHOR_NONE.
 * delta_tol is the relative gap target; n_iter caps the node expansions. */
zzopt_status zzopt_solve_integer(const zzopt_model* model, int scheme,
                                 double gamma, int num_pilots,
                                 double delta_tol, int n_iter, int pin_anchor,
                                 double* rho_out, zzopt_integer_result* result);

typedef struct zzopt_sim_params {
    int scheme;
    double gamma;            /* integrated SNR, linear */
    int trials;
    int discard;             /* initial trials excluded from the RMSE */
    uint64_t seed;
    double z0;               /* true delay [samples] */
    int draw_z0;             /* 1: draw z0 uniformly over the prior window */
    int random_pilot_phase;  /* 1: random per-subcarrier pilot phases */
    int oversample;          /* correlator grid points per sample (<=0: 64) */
    int snr_symbols;         /* SNR estimation stage symbol count; 0 skips */
    int threads;             /* 0: available parallelism */
} zzopt_sim_params;

typedef struct zzopt_sim_result {
    double rmse_samples;
    double rmse_seconds;
    double rmse_meters;
    double mean_estimate;    /* mean delay estimate [samples] */
    int trials_used;
    double estimated_gamma;      /* NaN when the SNR stage was skipped */
    double estimated_gamma_raw;
} zzopt_sim_result;

/* Monte Carlo ranging campaign. Deterministic for a fixed seed regardless
 * of the thread count. */
zzopt_status zzopt_simulate(const zzopt_model* model, const double* rho,
                            const zzopt_sim_params* params,
                            zzopt_sim_result* result);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif
