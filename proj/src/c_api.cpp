// Copyright 2026 The cpbox Authors
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

#include "cpbox/cpbox.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "closed_form.hpp"
#include "lindblad.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "sweep.hpp"
#include "version.hpp"

struct cpbox_config {
    cpbox::sweep::SweepConfig cfg;
};

struct cpbox_state {
    cpbox::DensityMatrix rho;
};

namespace {

using cpbox::Error;
using cpbox::ErrorKind;

thread_local std::string g_last_error;

cpbox_status to_status(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter: return CPBOX_ERR_INVALID_CONFIG;
        case ErrorKind::TruncationTooSmall: return CPBOX_ERR_TRUNCATION;
        case ErrorKind::DimensionMismatch: return CPBOX_ERR_DIMENSION;
        case ErrorKind::Numerical: return CPBOX_ERR_NUMERICAL;
        case ErrorKind::Io: return CPBOX_ERR_IO;
    }
    return CPBOX_ERR_INTERNAL;
}

template <class F>
cpbox_status guarded(F&& body) {
    g_last_error.clear();
    try {
        return body();
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return CPBOX_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CPBOX_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CPBOX_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) {
        throw Error(ErrorKind::InvalidParameter, std::string(what) + " must not be NULL");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string resolve_out(const cpbox::sweep::SweepConfig& cfg, const char* out_path) {
    std::string path = out_path ? std::string(out_path) : cfg.out;
    if (path == "-") path.clear();
    return path;
}

// Writes via fn to path, or stdout when path is empty.
template <class F>
void write_to(const std::string& path, F&& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    fn(f);
    if (!f) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

cpbox::model::DeviceParams to_device(const cpbox_device_params& d) {
    cpbox::model::DeviceParams out;
    out.c_j = d.c_j;
    out.c_g = d.c_g;
    out.c_f = d.c_f;
    out.omega = d.omega;
    out.e_j = d.e_j;
    if (d.thermal_energy > 0.0) out.thermal_energy = d.thermal_energy;
    return out;
}

cpbox::model::ReducedParams to_reduced(const cpbox_reduced_params& p) {
    cpbox::model::ReducedParams out;
    out.g = p.g;
    out.delta = p.delta;
    out.gamma = p.gamma;
    out.lambda_scale = p.lambda_scale;
    return out;
}

cpbox::model::InitialState to_initial(const cpbox_initial& init,
                                      cpbox::model::FockTruncation* trunc_out) {
    if (!(init.nbar >= 0.0)) throw Error(ErrorKind::InvalidParameter, "nbar must be >= 0");
    const double tol = init.tail_tolerance > 0.0 ? init.tail_tolerance : 1e-10;
    const double alpha = std::sqrt(init.nbar);
    const cpbox::model::FockTruncation trunc =
        init.n_max > 0 ? cpbox::model::FockTruncation{init.n_max, tol}
                       : cpbox::model::choose_truncation(alpha, tol);
    if (trunc_out) *trunc_out = trunc;
    return cpbox::model::make_initial_state(
        init.theta, cpbox::model::coherent_amplitudes(alpha, init.beta_phase, trunc));
}

}  // namespace

extern "C" {

const char* cpbox_version(void) { return cpbox::kVersion; }

const char* cpbox_last_error(void) { return g_last_error.c_str(); }

const char* cpbox_status_string(cpbox_status status) {
    switch (status) {
        case CPBOX_OK: return "ok";
        case CPBOX_ERR_INVALID_CONFIG: return "invalid configuration";
        case CPBOX_ERR_NUMERICAL: return "numerical failure";
        case CPBOX_ERR_GATE: return "comparison gate failed";
        case CPBOX_ERR_IO: return "i/o failure";
        case CPBOX_ERR_TRUNCATION: return "Fock truncation too small";
        case CPBOX_ERR_DIMENSION: return "dimension mismatch";
        case CPBOX_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void cpbox_string_free(char* s) { std::free(s); }

cpbox_status cpbox_config_new(cpbox_config** out) {
    return guarded([&] {
        require(out, "out");
        *out = new cpbox_config{};
        return CPBOX_OK;
    });
}

void cpbox_config_free(cpbox_config* cfg) { delete cfg; }

cpbox_status cpbox_config_set(cpbox_config* cfg, const char* key, const char* value) {
    return guarded([&] {
        require(cfg, "cfg");
        require(key, "key");
        require(value, "value");
        cfg->cfg.set(key, value);
        return CPBOX_OK;
    });
}

cpbox_status cpbox_config_load_file(cpbox_config* cfg, const char* path) {
    return guarded([&] {
        require(cfg, "cfg");
        require(path, "path");
        cfg->cfg.load_file(path);
        return CPBOX_OK;
    });
}

cpbox_status cpbox_config_echo(const cpbox_config* cfg, char** out) {
    return guarded([&] {
        require(cfg, "cfg");
        require(out, "out");
        std::string s;
        for (const auto& [k, v] : cfg->cfg.echo()) s += k + " = " + v + "\n";
        *out = dup_string(s);
        return CPBOX_OK;
    });
}

cpbox_status cpbox_run(const cpbox_config* cfg, cpbox_run_kind kind, const char* out_path) {
    return guarded([&] {
        require(cfg, "cfg");
        using cpbox::sweep::Kind;
        Kind k = Kind::Simulate;
        switch (kind) {
            case CPBOX_RUN_SIMULATE: k = Kind::Simulate; break;
            case CPBOX_RUN_SWEEP_DETUNING: k = Kind::SweepDetuning; break;
            case CPBOX_RUN_SWEEP_DAMPING: k = Kind::SweepDamping; break;
            default: throw Error(ErrorKind::InvalidParameter, "unknown run kind");
        }
        cfg->cfg.check_kind(k);

        const auto start = std::chrono::steady_clock::now();
        const auto recs = cpbox::sweep::run_sweep(cfg->cfg);
        const std::string path = resolve_out(cfg->cfg, out_path);
        write_to(path, [&](std::ostream& os) { cpbox::sweep::write_csv(os, cfg->cfg, recs); });

        if (!path.empty()) {
            cpbox::sweep::RunInfo info;
            info.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            info.workers = cfg->cfg.resolved_workers();
            info.rows = recs.size();
            write_to(path + ".manifest", [&](std::ostream& os) {
                cpbox::sweep::write_run_manifest(os, cfg->cfg, info);
            });
        }
        return CPBOX_OK;
    });
}

cpbox_status cpbox_compare(const cpbox_config* cfg, const char* out_path, char** report) {
    return guarded([&] {
        require(cfg, "cfg");
        cfg->cfg.check_kind(cpbox::sweep::Kind::Compare);
        const auto rep = cpbox::sweep::compare_report(cfg->cfg);
        write_to(resolve_out(cfg->cfg, out_path),
                 [&](std::ostream& os) { cpbox::sweep::write_compare_csv(os, rep); });
        if (report) *report = dup_string(rep.text);
        if (!rep.gate_passed) {
            g_last_error = "closed form deviates from the integrator at gamma = 0";
            return CPBOX_ERR_GATE;
        }
        return CPBOX_OK;
    });
}

cpbox_status cpbox_validate(const cpbox_config* cfg, char** report) {
    return guarded([&] {
        require(cfg, "cfg");
        cfg->cfg.check_kind(cpbox::sweep::Kind::Validate);
        const auto rep = cpbox::sweep::validate_point(cfg->cfg);
        if (report) *report = dup_string(rep.text);
        if (!rep.numerical_ok) {
            g_last_error = "integrator invariant violated";
            return CPBOX_ERR_NUMERICAL;
        }
        if (!rep.gate_ok) {
            g_last_error = "closed form deviates from the integrator at gamma = 0";
            return CPBOX_ERR_GATE;
        }
        return CPBOX_OK;
    });
}

cpbox_status cpbox_reduce_params(const cpbox_device_params* device, double gamma_raw,
                                 cpbox_reduced_params* out) {
    return guarded([&] {
        require(device, "device");
        require(out, "out");
        const auto p = cpbox::model::reduce_params(to_device(*device), gamma_raw);
        *out = cpbox_reduced_params{p.g, p.delta, p.gamma, p.lambda_scale};
        return CPBOX_OK;
    });
}

cpbox_status cpbox_validate_regime(const cpbox_device_params* device, char** warnings,
                                   size_t* count) {
    return guarded([&] {
        require(device, "device");
        const auto w = cpbox::model::validate_regime(to_device(*device));
        if (count) *count = w.size();
        if (warnings) {
            std::string s;
            for (const auto& x : w) s += x.code + ": " + x.message + "\n";
            *warnings = dup_string(s);
        }
        return CPBOX_OK;
    });
}

cpbox_status cpbox_rabi_frequency(const cpbox_reduced_params* params, size_t n, double* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        *out = cpbox::model::rabi_frequency(to_reduced(*params), n);
        return CPBOX_OK;
    });
}

cpbox_status cpbox_choose_truncation(double nbar, double tail_tolerance, size_t* n_max) {
    return guarded([&] {
        require(n_max, "n_max");
        if (!(nbar >= 0.0)) throw Error(ErrorKind::InvalidParameter, "nbar must be >= 0");
        *n_max = cpbox::model::choose_truncation(std::sqrt(nbar), tail_tolerance).n_max;
        return CPBOX_OK;
    });
}

cpbox_status cpbox_state_closed_form(const cpbox_reduced_params* params,
                                     const cpbox_initial* init, double t, cpbox_variant variant,
                                     int normalize, cpbox_state** out, double* trace_deficit) {
    return guarded([&] {
        require(params, "params");
        require(init, "init");
        require(out, "out");
        cpbox::closed_form::Mode mode;
        switch (variant) {
            case CPBOX_CLOSED_AS_PRINTED: mode.variant = cpbox::closed_form::Variant::AsPrinted; break;
            case CPBOX_CLOSED_CORRECTED: mode.variant = cpbox::closed_form::Variant::Corrected; break;
            default: throw Error(ErrorKind::InvalidParameter, "unknown closed-form variant");
        }
        const auto js = cpbox::closed_form::joint_state(to_reduced(*params),
                                                        to_initial(*init, nullptr), t, mode,
                                                        normalize != 0);
        if (trace_deficit) *trace_deficit = js.trace_deficit;
        *out = new cpbox_state{js.rho};
        return CPBOX_OK;
    });
}

cpbox_status cpbox_state_evolve(const cpbox_reduced_params* params, const cpbox_initial* init,
                                double t, double tolerance, cpbox_state** out) {
    return guarded([&] {
        require(params, "params");
        require(init, "init");
        require(out, "out");
        cpbox::model::FockTruncation trunc;
        const auto state = to_initial(*init, &trunc);
        const auto p = to_reduced(*params);
        const auto h = cpbox::lindblad::build_hamiltonian(p, trunc);
        cpbox::lindblad::IntegratorConfig cfg;
        if (tolerance > 0.0) cfg.tolerance = tolerance;
        auto traj = cpbox::lindblad::evolve(h, p.gamma, cpbox::model::initial_density(state), t,
                                            cfg, {t});
        *out = new cpbox_state{std::move(traj.states.back())};
        return CPBOX_OK;
    });
}

void cpbox_state_free(cpbox_state* state) { delete state; }

cpbox_status cpbox_state_dim(const cpbox_state* state, size_t* dim) {
    return guarded([&] {
        require(state, "state");
        require(dim, "dim");
        *dim = state->rho.dim();
        return CPBOX_OK;
    });
}

cpbox_status cpbox_state_get(const cpbox_state* state, size_t row, size_t col, double* re,
                             double* im) {
    return guarded([&] {
        require(state, "state");
        if (row >= state->rho.dim() || col >= state->rho.dim()) {
            throw Error(ErrorKind::DimensionMismatch, "index out of range");
        }
        const cpbox::cplx v = state->rho(row, col);
        if (re) *re = v.real();
        if (im) *im = v.imag();
        return CPBOX_OK;
    });
}

cpbox_status cpbox_state_metrics(const cpbox_state* state, double t, cpbox_metric_row* out) {
    return guarded([&] {
        require(state, "state");
        require(out, "out");
        const auto r = cpbox::metrics::metric_row(state->rho, t);
        out->t = r.t;
        out->inversion = r.inversion;
        out->linear_entropy_raw = r.linear_entropy_raw;
        out->idempotency_defect = r.idempotency_defect;
        out->concurrence_2q = r.concurrence_2q.value_or(0.0);
        out->concurrence_reliable = r.concurrence_reliable ? 1 : 0;
        out->negativity = r.negativity;
        out->purity = r.purity;
        out->mean_photons = r.mean_photons;
        out->trace_error = r.trace_error;
        return CPBOX_OK;
    });
}

}  // extern "C"
