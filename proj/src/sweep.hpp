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

#pragma once

// Parameter sweeps over (lambda t, delta/lambda) or (lambda t, gamma/lambda),
// closed-form versus integrator comparison, and CSV output.
//
// Grid points are independent work units. Results are assembled in
// axis-major, mode, time-minor order no matter how many workers ran, so the
// CSV is byte-identical for any worker count.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "closed_form.hpp"
#include "lindblad.hpp"
#include "metrics.hpp"
#include "model.hpp"

namespace cpbox::sweep {

inline constexpr std::string_view kCsvHeader =
    "t_scaled,delta_over_lambda,gamma_over_lambda,theta,nbar,mode,inversion,"
    "linear_entropy_raw,idempotency_defect,concurrence_2q,negativity,purity,"
    "mean_photons,trace_error,residual";

// Residual gate for closed form vs integrator at gamma = 0.
inline constexpr double kEquivalenceGate = 1e-6;

// Either a scalar or an inclusive linspace "min:max:points".
struct Axis {
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 1;
    bool is_axis = false;

    static Axis scalar(double v) { return Axis{v, v, 1, false}; }
    static Axis parse(const std::string& text);
    std::vector<double> values() const;
    std::string to_string() const;
};

enum class Mode { ClosedPrinted, ClosedCorrected, Lindblad, Both };
enum class Kind { Simulate, SweepDetuning, SweepDamping, Compare, Validate };

std::string_view mode_name(Mode m);

struct SweepConfig {
    double nbar = 10.0;
    double theta = 0.0;
    double beta_phase = 0.0;
    closed_form::Beta12 beta12 = closed_form::Beta12::Zero;
    double g_over_lambda = 0.35355339059327373;  // C_g << C_J limit, 1/(2 sqrt 2)
    Axis delta_over_lambda = Axis::scalar(0.0);
    Axis gamma_over_lambda = Axis::scalar(0.0);
    double t_max = 25.0;
    std::size_t t_points = 500;
    Mode mode = Mode::ClosedCorrected;
    std::optional<std::size_t> n_max;
    double tail_tolerance = 1e-10;
    lindblad::IntegratorConfig integrator;
    bool normalize = true;
    std::string out;          // empty: stdout
    std::size_t workers = 0;  // 0: available parallelism
    std::optional<long long> seed;  // reserved, dynamics are deterministic

    // Applies one "key = value" setting. Throws InvalidParameter on unknown
    // keys or unparsable values.
    void set(const std::string& key, const std::string& value);
    // Flat "key = value" file; '#' and ';' start comments.
    void load_file(const std::string& path);

    void validate() const;
    void check_kind(Kind kind) const;

    // Complete when c_j, c_g, c_f, omega and e_j are all set.
    std::optional<model::DeviceParams> device() const;
    // g in units of lambda: derived from the device when present.
    double coupling() const;

    std::size_t resolved_workers() const;
    model::FockTruncation truncation() const;
    // Every setting that affects the numbers, in a fixed order.
    std::vector<std::pair<std::string, std::string>> echo() const;

private:
    std::optional<double> c_j_, c_g_, c_f_, omega_, e_j_, k_b_t_;
};

struct GridPoint {
    double delta = 0.0;
    double gamma = 0.0;
};

struct SweepRecord {
    GridPoint point;
    double theta = 0.0;
    double nbar = 0.0;
    Mode mode = Mode::ClosedCorrected;
    metrics::MetricRow row;
    std::optional<double> residual;
};

std::vector<GridPoint> grid(const SweepConfig& cfg);
std::vector<double> time_grid(const SweepConfig& cfg);

// Shared, read-only inputs of one run.
struct Prepared {
    model::FockTruncation truncation;
    model::InitialState initial;
    std::vector<double> times;
    std::vector<GridPoint> points;
};

Prepared prepare(const SweepConfig& cfg);
model::ReducedParams params_at(const SweepConfig& cfg, const GridPoint& p);

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

std::string format_double(double v);
void write_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<SweepRecord>& recs);

struct RunInfo {
    double wall_seconds = 0.0;
    std::size_t workers = 1;
    std::size_t rows = 0;
};
// Non-deterministic run facts, kept out of the CSV itself.
void write_run_manifest(std::ostream& os, const SweepConfig& cfg, const RunInfo& info);

struct CompareEntry {
    GridPoint point;
    double max_residual = 0.0;          // max |rho_closed - rho_oracle| over t
    double printed_trace_deficit = 0.0; // max |1 - Tr rho_printed(t)/Tr rho_printed(0)|
    double printed_hermiticity = 0.0;   // max |rho - rho^dagger| of the printed form
    double max_d_inversion = 0.0;
    double max_d_defect = 0.0;
    double max_d_negativity = 0.0;
    bool gated = false;  // gamma == 0
    bool pass = true;
};

struct CompareReport {
    std::vector<CompareEntry> entries;
    bool gate_passed = true;
    std::string text;
};

CompareReport compare_report(const SweepConfig& cfg);
void write_compare_csv(std::ostream& os, const CompareReport& report);

struct ValidationCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = true;
    bool gate = false;  // closed-form equivalence rather than integrator health
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    std::vector<model::RegimeWarning> warnings;
    bool numerical_ok = true;
    bool gate_ok = true;
    std::string text;
};

ValidationReport validate_point(const SweepConfig& cfg);

}  // namespace cpbox::sweep
