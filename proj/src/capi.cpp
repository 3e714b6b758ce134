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

#include "zzopt/zzopt.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "bounds.hpp"
#include "convex_solver.hpp"
#include "integer_solver.hpp"
#include "ofdm_model.hpp"
#include "toa_sim.hpp"

struct zzopt_model {
    zzopt::OfdmConfig cfg;
    zzopt::QuadratureSpec quad;
    std::unique_ptr<zzopt::AcfTable> table;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* msg) { g_last_error = msg ? msg : "unknown error"; }

// Runs fn, translating exceptions into status codes and the thread-local
// error message.
template <typename Fn>
zzopt_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return ZZOPT_ERR_INVALID_ARGUMENT;
    } catch (const zzopt::InfeasibleError& e) {
        set_error(e.what());
        return ZZOPT_ERR_INFEASIBLE;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return ZZOPT_ERR_NUMERIC;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return ZZOPT_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return ZZOPT_ERR_INTERNAL;
    }
}

zzopt_status check_model(const zzopt_model* m) {
    if (!m) {
        set_error("model handle is NULL");
        return ZZOPT_ERR_INVALID_ARGUMENT;
    }
    return ZZOPT_OK;
}

zzopt_status parse_scheme(int scheme, zzopt::DetectionScheme& out) {
    switch (scheme) {
        case ZZOPT_SCHEME_COHERENT: out = zzopt::DetectionScheme::Coherent; return ZZOPT_OK;
        case ZZOPT_SCHEME_NONCOHERENT: out = zzopt::DetectionScheme::Noncoherent; return ZZOPT_OK;
        default:
            set_error("scheme must be ZZOPT_SCHEME_COHERENT or ZZOPT_SCHEME_NONCOHERENT");
            return ZZOPT_ERR_INVALID_ARGUMENT;
    }
}

std::span<const double> rho_span(const zzopt_model* m, const double* rho) {
    return {rho, static_cast<size_t>(m->cfg.K)};
}

}  // namespace

extern "C" {

const char* zzopt_version(void) { return ZZOPT_VERSION; }

const char* zzopt_last_error(void) { return g_last_error.c_str(); }

zzopt_status zzopt_model_create(int subcarriers, double delta_f_hz,
                                double prior_window_samples, int quad_points,
                                zzopt_model** out) {
    if (!out) {
        set_error("output pointer is NULL");
        return ZZOPT_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        auto m = std::make_unique<zzopt_model>();
        m->cfg = zzopt::OfdmConfig::make(subcarriers, delta_f_hz, prior_window_samples);
        if (quad_points > 0) m->quad.n_points = quad_points;
        m->quad.validate();
        m->table = std::make_unique<zzopt::AcfTable>(m->cfg, m->quad);
        *out = m.release();
        return ZZOPT_OK;
    });
}

void zzopt_model_destroy(zzopt_model* model) { delete model; }

int zzopt_model_subcarriers(const zzopt_model* model) {
    return model ? model->cfg.K : 0;
}

double zzopt_model_sample_period(const zzopt_model* model) {
    return model ? model->cfg.sample_period() : 0.0;
}

double zzopt_model_prior_window_samples(const zzopt_model* model) {
    return model ? model->cfg.na : 0.0;
}

zzopt_status zzopt_acf(const zzopt_model* model, const double* rho, double z,
                       double* coherent_out, double* noncoherent_out) {
    if (zzopt_status s = check_model(model)) return s;
    if (!rho) {
        set_error("rho is NULL");
        return ZZOPT_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const auto r = rho_span(model, rho);
        if (coherent_out) *coherent_out = zzopt::acf_coherent(z, r, model->cfg);
        if (noncoherent_out) *noncoherent_out = zzopt::acf_noncoherent(z, r, model->cfg);
        return ZZOPT_OK;
    });
}

zzopt_status zzopt_zzb(const zzopt_model* model, int scheme, double gamma,
                       const double* rho, double* out) {
    if (zzopt_status s = check_model(model)) return s;
    if (!rho || !out) {
        set_error("rho or output pointer is NULL");
        return ZZOPT_ERR_INVALID_ARGUMENT;
    }
    zzopt::BoundQuery q;
    if (zzopt_status s = parse_scheme(scheme, q.scheme)) return s;
    q.gamma = gamma;
    q.cfg = model->cfg;
    q.quad = model->quad;
    return guarded([&] {
        *out = zzopt::zzb(rho_span(model, rho), q, *model->table);
        return ZZOPT_OK;
    });
}

zzopt_status zzopt_crlb(const zzopt_model* model, double gamma,
                        const double* rho, double* out) {
    if (zzopt_status s = check_model(model)) return s;
    if (!rho || !out) {
        set_error("rho or output pointer is NULL");
        return ZZOPT_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = zzopt::crlb(rho_span(model, rho), gamma, model->cfg);
        return ZZOPT_OK;
    });
}

zzopt_status zzopt_solve_convex(const zzopt_model* model, int scheme,
                                double gamma, int max_iter, double tol,
                                double* rho_out, zzopt_convex_result* result) {
    if (zzopt_status s = check_model(model)) return s;
    if (!rho_out) {
        set_error("rho_out is NULL");
        return ZZOPT_ERR_INVALID_ARGUMENT;
    }
    zzopt::ConvexProblem p;
    if (zzopt_status s = parse_scheme(scheme, p.query.scheme)) return s;
    p.query.gamma = gamma;
    p.query.cfg = model->cfg;
    p.query.quad = model->quad;
    zzopt::SolverOptions opts;
    if (max_iter > 0) opts.max_iter = max_iter;
    if (tol > 0.0) opts.tol = tol;
    return guarded([&] {
        const zzopt::SolveReport rep = zzopt::solve(p, *model->table, nullptr, opts);
        std::memcpy(rho_out, rep.rho_star.rho.data(), sizeof(double) * model->cfg.K);
        if (result) {
            result->objective = rep.objective;
            result->iterations = rep.iterations;
            result->first_order_residual = rep.first_order_residual;
            result->converged = rep.converged ? 1 : 0;
        }
        return ZZOPT_OK;
    });
}

zzopt_status zzopt_solve_integer(const zzopt_model* model, int scheme,
                                 double gamma, int num_pilots,
                                 double delta_tol, int n_iter, int pin_anchor,
                                 double* rho_out, zzopt_integer_result* result) {
    if (zzopt_status s = check_model(model)) return s;
    if (!rho_out) {
        set_error("rho_out is NULL");
        return ZZOPT_ERR_INVALID_ARGUMENT;
    }
    zzopt::BoundQuery q;
    if (zzopt_status s = parse_scheme(scheme, q.scheme)) return s;
    q.gamma = gamma;
    q.cfg = model->cfg;
    q.quad = model->quad;
    zzopt::BnbConfig bnb;
    bnb.L = num_pilots;
    if (delta_tol >= 0.0) bnb.delta_tol = delta_tol;
    if (n_iter > 0) bnb.n_iter = n_iter;
    if (pin_anchor == ZZOPT_ANCHOR_NONE) {
        bnb.auto_anchor = false;
    } else if (pin_anchor != ZZOPT_ANCHOR_AUTO) {
        bnb.pin_anchor = pin_anchor;
    }
    return guarded([&] {
        const zzopt::BnbReport rep = zzopt::solve_bnb(q, bnb, *model->table);
        std::memcpy(rho_out, rep.rho_star.rho.data(), sizeof(double) * model->cfg.K);
        if (result) {
            result->upper_bound = rep.upper_bound;
            result->lower_bound = rep.best_lower_bound;
            result->gap = rep.gap;
            result->iterations = rep.iterations;
            result->nodes_explored = rep.nodes_explored;
        }
        return ZZOPT_OK;
    });
}

zzopt_status zzopt_simulate(const zzopt_model* model, const double* rho,
                            const zzopt_sim_params* params,
                            zzopt_sim_result* result) {
    if (zzopt_status s = check_model(model)) return s;
    if (!rho || !params || !result) {
        set_error("rho, params, or result is NULL");
        return ZZOPT_ERR_INVALID_ARGUMENT;
    }
    zzopt::CampaignConfig cc;
    if (zzopt_status s = parse_scheme(params->scheme, cc.scheme)) return s;
    cc.gamma = params->gamma;
    cc.trials = params->trials;
    cc.discard = params->discard;
    cc.seed = params->seed;
    cc.z0 = params->z0;
    cc.draw_z0 = params->draw_z0 != 0;
    cc.phase_rule = params->random_pilot_phase ? zzopt::PhaseRule::RandomPhase
                                               : zzopt::PhaseRule::UnitPhase;
    if (params->oversample > 0) cc.oversample = params->oversample;
    cc.snr_symbols = params->snr_symbols;
    cc.threads = params->threads;
    return guarded([&] {
        const zzopt::SimReport rep =
            zzopt::run_campaign(rho_span(model, rho), model->cfg, cc);
        result->rmse_samples = rep.rmse_samples;
        result->rmse_seconds = rep.rmse_seconds;
        result->rmse_meters = rep.rmse_meters;
        result->mean_estimate = rep.mean_estimate;
        result->trials_used = rep.trials_used;
        result->estimated_gamma = rep.estimated_gamma;
        result->estimated_gamma_raw = rep.estimated_gamma_raw;
        return ZZOPT_OK;
    });
}

}  // extern "C"
