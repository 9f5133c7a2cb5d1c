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

// cpbox: command-line driver over the C API.
//
//   cpbox simulate        single point, full trajectory
//   cpbox sweep-detuning  time x delta/lambda
//   cpbox sweep-damping   time x gamma/lambda
//   cpbox compare         closed form vs integrator summary
//   cpbox validate        invariant suite on one point
//
// Exit codes: 0 success, 1 invalid config, 2 numerical failure,
// 3 comparison gate failure.

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpbox/cpbox.h"

namespace {

// Keys accepted both in config files and as --flags (underscore or dash form).
const std::vector<std::pair<std::string, std::string>> kKeys = {
    {"nbar", "mean photon number of the coherent field"},
    {"theta", "initial qubit mixing angle in [0, pi/2)"},
    {"beta_phase", "phase of the coherent amplitude"},
    {"beta12", "phase convention of the printed cross term: zero|double"},
    {"g_over_lambda", "coupling in units of lambda"},
    {"delta_over_lambda", "detuning: scalar or min:max:points"},
    {"gamma_over_lambda", "phase damping: scalar or min:max:points"},
    {"t_max", "final scaled time lambda t"},
    {"t_points", "number of time samples (>= 2)"},
    {"mode", "closed_printed|closed_corrected|lindblad|both"},
    {"n_max", "Fock cutoff or auto"},
    {"tail_tolerance", "Poisson tail allowed above n_max"},
    {"integrator", "rk45|rk4"},
    {"tolerance", "rk45 local error tolerance"},
    {"dt", "rk4 step"},
    {"renorm_interval", "renormalize the trace every k steps (0: never)"},
    {"normalize", "renormalize closed-form states: true|false"},
    {"c_j", "junction capacitance [F]"},
    {"c_g", "gate capacitance [F]"},
    {"c_f", "field capacitance [F]"},
    {"omega", "cavity frequency [rad/s]"},
    {"e_j", "Josephson energy [J]"},
    {"k_b_t", "thermal energy [J]"},
};

int exit_code(cpbox_status s) {
    switch (s) {
        case CPBOX_OK: return 0;
        case CPBOX_ERR_INVALID_CONFIG:
        case CPBOX_ERR_TRUNCATION:
        case CPBOX_ERR_IO: return 1;
        case CPBOX_ERR_GATE: return 3;
        default: return 2;
    }
}

int fail(cpbox_status s) {
    std::fprintf(stderr, "cpbox: %s: %s\n", cpbox_status_string(s), cpbox_last_error());
    return exit_code(s);
}

struct ConfigDeleter {
    void operator()(cpbox_config* c) const { cpbox_config_free(c); }
};
using ConfigPtr = std::unique_ptr<cpbox_config, ConfigDeleter>;

void print_and_free(char* s, std::FILE* to) {
    if (s == nullptr) return;
    std::fputs(s, to);
    cpbox_string_free(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooper-pair box in a phase-damped cavity"};
    app.set_version_flag("--version", std::string(cpbox_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::string workers;
    std::string seed;
    std::map<std::string, std::string> flags;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value file; flags win");
        sub->add_option("--out", out, "output path (default stdout)");
        sub->add_option("--workers", workers, "worker threads (default: available parallelism)");
        sub->add_option("--seed", seed, "reserved; dynamics are deterministic");
        for (const auto& [key, help] : kKeys) {
            std::string dashed = key;
            for (char& c : dashed) {
                if (c == '_') c = '-';
            }
            std::string names = "--" + key;
            if (dashed != key) names += ",--" + dashed;
            sub->add_option(names, flags[key], help);
        }
    };

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"simulate", "single point, full trajectory"},
        {"sweep-detuning", "time x delta/lambda grid"},
        {"sweep-damping", "time x gamma/lambda grid"},
        {"compare", "closed form vs integrator report (mode = both)"},
        {"validate", "invariant suite on the configured point"},
    };
    for (const Sub& s : subs) add_common(app.add_subcommand(s.name, s.help));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version are successes; any other parse error is a bad config.
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    cpbox_config* raw = nullptr;
    if (cpbox_status s = cpbox_config_new(&raw); s != CPBOX_OK) return fail(s);
    ConfigPtr cfg(raw);

    if (!config_path.empty()) {
        if (cpbox_status s = cpbox_config_load_file(cfg.get(), config_path.c_str()); s != CPBOX_OK) {
            return fail(s);
        }
    }
    auto set = [&](const std::string& key, const std::string& value) {
        return cpbox_config_set(cfg.get(), key.c_str(), value.c_str());
    };
    for (const auto& [key, value] : flags) {
        if (value.empty()) continue;
        if (cpbox_status s = set(key, value); s != CPBOX_OK) return fail(s);
    }
    if (!out.empty()) {
        if (cpbox_status s = set("out", out); s != CPBOX_OK) return fail(s);
    }
    if (!workers.empty()) {
        if (cpbox_status s = set("workers", workers); s != CPBOX_OK) return fail(s);
    }
    if (!seed.empty()) {
        if (cpbox_status s = set("seed", seed); s != CPBOX_OK) return fail(s);
    }

    cpbox_status status = CPBOX_OK;
    char* report = nullptr;
    if (command == "simulate") {
        status = cpbox_run(cfg.get(), CPBOX_RUN_SIMULATE, nullptr);
    } else if (command == "sweep-detuning") {
        status = cpbox_run(cfg.get(), CPBOX_RUN_SWEEP_DETUNING, nullptr);
    } else if (command == "sweep-damping") {
        status = cpbox_run(cfg.get(), CPBOX_RUN_SWEEP_DAMPING, nullptr);
    } else if (command == "compare") {
        status = cpbox_compare(cfg.get(), nullptr, &report);
        print_and_free(report, stderr);
    } else {
        status = cpbox_validate(cfg.get(), &report);
        print_and_free(report, stdout);
    }
    return status == CPBOX_OK ? 0 : fail(status);
}
