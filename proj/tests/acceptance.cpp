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

// Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   cpbox_acceptance          run all criteria
//   cpbox_acceptance c4 c7    run a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "closed_form.hpp"
#include "lindblad.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "oracles.hpp"
#include "sweep.hpp"

namespace {

using namespace cpbox;

// ---- pinned tolerances --------------------------------------------------------

constexpr double kDephasingRelTol = 1e-8;  // C1
constexpr double kDephasingMaxSeconds = 5.0;
constexpr double kGateTol = 1e-6;  // C2
constexpr double kGateMaxSeconds = 60.0;
constexpr double kBlockEigTol = 1e-12;  // C3
constexpr double kCollapseMaxInversion = 0.15;  // C4
constexpr double kRevivalMinInversion = 0.3;
constexpr double kRevivalWindow = 0.15;  // relative to the revival time
constexpr double kDefectAtZeroTol = 1e-9;  // C5
constexpr double kHalfRevivalWindow = 0.15;
constexpr double kCollapseTimeWindow = 0.15;  // relative to the collapse time
constexpr double kMajorMaxFraction = 0.5;
constexpr double kPlateauThreshold = 0.9;  // C6
constexpr double kPlateauHalfBand = 0.05;
constexpr double kSlopeRatio = 0.01;  // C7
constexpr double kDecayRatio = 0.10;
constexpr double kBellTol = 1e-10;  // C8
constexpr double kWernerTol = 1e-10;
constexpr double kSchmidtTol = 1e-9;
constexpr double kTraceTol = 1e-8;  // C9
constexpr double kHermTol = 1e-10;
constexpr double kMinEigTol = -1e-8;
constexpr double kExcitationDriftTol = 1e-8;
constexpr double kConservationIntegratorTol = 1e-10;

// ---- shared setup -------------------------------------------------------------

constexpr double kNbar = 10.0;
constexpr double kG = 0.35355339059327373;  // 1 / (2 sqrt 2)
constexpr double kIntegratorTol = 1e-9;

struct Result {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

struct Setup {
    model::ReducedParams params;
    model::FockTruncation trunc;
    model::InitialState init;
};

Setup setup(double g, double delta, double gamma, double theta, std::size_t n_max = 0) {
    Setup s;
    s.params = {g, delta, gamma, 1.0};
    const double alpha = std::sqrt(kNbar);
    s.trunc = n_max ? model::FockTruncation{n_max, 1e-10} : model::choose_truncation(alpha, 1e-10);
    s.init = model::make_initial_state(theta, model::coherent_amplitudes(alpha, 0.0, s.trunc));
    return s;
}

std::vector<DensityMatrix> oracle_run(const Setup& s, const std::vector<double>& times,
                                      double tolerance = kIntegratorTol) {
    const auto h = lindblad::build_hamiltonian(s.params, s.trunc);
    lindblad::IntegratorConfig cfg;
    cfg.tolerance = tolerance;
    return lindblad::evolve(h, s.params.gamma, model::initial_density(s.init), times.back(), cfg,
                            times)
        .states;
}

std::vector<DensityMatrix> closed_run(const Setup& s, const std::vector<double>& times) {
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back(closed_form::joint_state(s.params, s.init, t, {}, true).rho);
    }
    return out;
}

template <class F>
std::vector<double> series(const std::vector<DensityMatrix>& states, F f) {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& r : states) out.push_back(f(r));
    return out;
}

double inversion(const DensityMatrix& r) {
    return metrics::atomic_inversion(metrics::partial_trace_field(r));
}
double defect(const DensityMatrix& r) {
    return metrics::idempotency_defect(metrics::partial_trace_field(r));
}

// Revival time in scaled units, g t_r = 2 pi sqrt(nbar).
double revival_time() { return 2.0 * std::numbers::pi * std::sqrt(kNbar) / kG; }

// ---- criteria -------------------------------------------------------------------

Result c1_dephasing() {
    const auto t0 = std::chrono::steady_clock::now();
    const double gamma = 0.1;
    const Setup s = setup(0.0, 0.0, gamma, 0.0);
    const std::vector<double> times = {0.5, 1.0, 2.0, 5.0};
    const DensityMatrix rho0 = model::initial_density(s.init);
    const auto states = oracle_run(s, times);

    double worst = 0.0;
    const auto nf = static_cast<Eigen::Index>(s.trunc.n_max + 1);
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (Eigen::Index n = 0; n < nf; ++n) {
            for (Eigen::Index m = 0; m < nf; ++m) {
                const oracle::cplx r0 = rho0.matrix()(2 * n, 2 * m);
                if (r0 == 0.0) continue;
                const double dn = static_cast<double>(n - m);
                const double law = std::exp(-gamma * dn * dn * times[k]);
                const oracle::cplx ratio = states[k].matrix()(2 * n, 2 * m) / r0;
                if (law == 0.0) {
                    worst = std::max(worst, std::abs(ratio) > 0.0 ? 1.0 : 0.0);
                } else {
                    worst = std::max(worst, std::abs(ratio - law) / law);
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= kDephasingRelTol && secs < kDephasingMaxSeconds,
            "max relative error " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Result c2_gate() {
    const auto t0 = std::chrono::steady_clock::now();
    const Setup s = setup(kG, 0.0, 0.0, 0.0, 40);
    const auto times = linspace(0.0, 25.0, 200);
    const auto oracle_states = oracle_run(s, times);
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto closed = closed_form::joint_state(s.params, s.init, times[k], {}, true);
        worst = std::max(worst, oracle::max_abs(closed.rho.matrix() - oracle_states[k].matrix()));
    }
    const double secs = seconds_since(t0);
    return {worst <= kGateTol && secs < kGateMaxSeconds,
            "max |drho| " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Result c3_blocks() {
    double worst = 0.0;
    for (double ratio : {0.0, 1.0, 3.0}) {
        const model::ReducedParams p{kG, ratio * kG, 0.0, 1.0};
        const auto h = lindblad::build_hamiltonian(p, {31, 1e-10});
        for (std::size_t n = 0; n <= 30; ++n) {
            const auto e = static_cast<Eigen::Index>(basis_index(n, Qubit::Excited));
            const auto g = static_cast<Eigen::Index>(basis_index(n + 1, Qubit::Ground));
            Eigen::Matrix2cd block;
            block << h.matrix()(e, e), h.matrix()(e, g), h.matrix()(g, e), h.matrix()(g, g);
            const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(block).eigenvalues();
            const double mu = model::rabi_frequency(p, n);
            const double mu_ref = std::sqrt(p.delta * p.delta + p.g * p.g * static_cast<double>(n + 1));
            worst = std::max({worst, std::abs(ev(0) + mu), std::abs(ev(1) - mu),
                              std::abs(mu - mu_ref)});
        }
    }
    return {worst <= kBlockEigTol, "max eigenvalue error " + fmt("%.2e", worst)};
}

// Collapse window for the inversion: g t in [0.25, 0.6] of g t_r. The revival
// peak is the largest |W| after 0.6 t_r.
Result c4_collapse_revival() {
    const Setup s = setup(kG, 0.0, 0.0, 0.0);
    const double tr = revival_time();
    const auto times = linspace(0.0, 1.25 * tr, 1251);
    Result res;
    for (const auto& [name, states] :
         {std::pair{std::string("corrected"), closed_run(s, times)},
          std::pair{std::string("oracle"), oracle_run(s, times)}}) {
        const auto w = series(states, inversion);
        double collapse = 0.0;
        double peak = 0.0;
        double peak_t = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double t = times[k];
            if (t >= 0.25 * tr && t <= 0.6 * tr) collapse = std::max(collapse, std::abs(w[k]));
            if (t > 0.6 * tr && std::abs(w[k]) > peak) {
                peak = std::abs(w[k]);
                peak_t = t;
            }
        }
        const bool ok = collapse < kCollapseMaxInversion && peak > kRevivalMinInversion &&
                        std::abs(peak_t / tr - 1.0) <= kRevivalWindow;
        res.pass = res.pass && ok;
        res.detail += name + ": collapse max|W| " + fmt("%.3f", collapse) + ", revival |W| " +
                      fmt("%.3f", peak) + " at t/t_r " + fmt("%.3f", peak_t / tr) + "; ";
    }
    return res;
}

// The first maximum is taken at the collapse time t_c = sqrt(2)/g, where the
// Gaussian inversion envelope exp(-(g t)^2 / 2) falls to 1/e. Rabi ripples
// below half the largest defect are not counted as maxima.
Result c5_defect_extremes() {
    const Setup s = setup(kG, 0.0, 0.0, 0.0);
    const double tr = revival_time();
    const auto times = linspace(0.0, tr, 2001);
    const auto d = series(closed_run(s, times), defect);

    const double at_zero = std::abs(d.front());
    const double d_max = *std::max_element(d.begin(), d.end());

    double min_t = -1.0;
    double min_v = 2.0;
    for (std::size_t k = 1; k + 1 < d.size(); ++k) {
        const double t = times[k];
        if (t < 0.25 * tr || t > 0.75 * tr) continue;
        if (d[k] <= d[k - 1] && d[k] <= d[k + 1] && d[k] < min_v) {
            min_v = d[k];
            min_t = t;
        }
    }
    double max_t = -1.0;
    for (std::size_t k = 1; k + 1 < d.size(); ++k) {
        if (d[k] >= d[k - 1] && d[k] >= d[k + 1] && d[k] >= kMajorMaxFraction * d_max) {
            max_t = times[k];
            break;
        }
    }
    const double t_c = std::numbers::sqrt2 / kG;
    const bool ok = at_zero <= kDefectAtZeroTol && min_t > 0.0 &&
                    std::abs(min_t / (0.5 * tr) - 1.0) <= kHalfRevivalWindow &&
                    std::abs(max_t / t_c - 1.0) <= kCollapseTimeWindow;
    return {ok, "defect(0) " + fmt("%.1e", at_zero) + ", min at t/(t_r/2) " +
                    fmt("%.3f", min_t / (0.5 * tr)) + " (" + fmt("%.3f", min_v) +
                    "), first major max at t/t_c " + fmt("%.3f", max_t / t_c)};
}

Result c6_plateau() {
    const Setup s = setup(kG, 0.0, 0.1, 0.0);
    const auto times = linspace(0.0, 25.0, 501);
    const auto d = series(oracle_run(s, times), defect);
    const auto first = std::find_if(d.begin(), d.end(), [](double v) { return v >= kPlateauThreshold; });
    if (first == d.end()) return {false, "defect never reaches " + fmt("%.2f", kPlateauThreshold)};
    const auto [lo, hi] = std::minmax_element(first, d.end());
    const double width = *hi - *lo;
    const double t_first = times[static_cast<std::size_t>(first - d.begin())];
    return {width <= 2.0 * kPlateauHalfBand,
            "reaches " + fmt("%.3f", *first) + " at t " + fmt("%.2f", t_first) +
                ", then spans [" + fmt("%.4f", *lo) + ", " + fmt("%.4f", *hi) + "] width " +
                fmt("%.4f", width)};
}

Result c7_entanglement() {
    const double t_end = 25.0;
    const auto times = linspace(0.0, t_end, 501);
    const double dt = times[1] - times[0];

    const auto n0 = series(oracle_run(setup(kG, 0.0, 0.1, 0.0), times), metrics::negativity);
    double early_peak = 0.0;
    double late_sum = 0.0;
    std::size_t late_count = 0;
    for (std::size_t k = 0; k + 1 < n0.size(); ++k) {
        const double slope = std::abs(n0[k + 1] - n0[k]) / dt;
        if (times[k + 1] <= 0.25 * t_end) early_peak = std::max(early_peak, slope);
        if (times[k] >= 0.75 * t_end) {
            late_sum += slope;
            ++late_count;
        }
    }
    const double late_mean = late_sum / static_cast<double>(late_count);
    const bool plateau = late_mean < kSlopeRatio * early_peak && n0.back() > 0.0;

    const auto n45 = series(oracle_run(setup(kG, 0.0, 0.1, std::numbers::pi / 4.0), times),
                            metrics::negativity);
    const double peak45 = *std::max_element(n45.begin(), n45.end());
    const bool decays = peak45 > 0.0 && n45.back() < kDecayRatio * peak45;

    return {plateau && decays,
            "theta=0: late |dN/dt| " + fmt("%.2e", late_mean) + " vs early peak " +
                fmt("%.2e", early_peak) + ", N(end) " + fmt("%.2e", n0.back()) +
                (plateau ? " ok" : " FAIL") + "; theta=pi/4: N(end) " + fmt("%.2e", n45.back()) +
                " vs peak " + fmt("%.2e", peak45) + (decays ? " ok" : " FAIL")};
}

Result c8_metric_oracles() {
    double bell_err = std::abs(metrics::concurrence_two_qubit(oracle::bell_phi_plus()) - 1.0);
    double werner_err = 0.0;
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
        werner_err = std::max(werner_err, std::abs(metrics::concurrence_two_qubit(oracle::werner(p)) -
                                                   oracle::werner_concurrence(p)));
    }
    oracle::Random rng(20261017);
    double schmidt_err = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index dim = 2 * (2 + i % 7);
        const oracle::Vec psi = rng.pure(dim);
        const DensityMatrix rho(psi * psi.adjoint());
        schmidt_err = std::max(schmidt_err, std::abs(metrics::negativity(rho) -
                                                     oracle::schmidt_negativity(psi)));
    }
    return {bell_err <= kBellTol && werner_err <= kWernerTol && schmidt_err <= kSchmidtTol,
            "Bell " + fmt("%.1e", bell_err) + ", Werner " + fmt("%.1e", werner_err) +
                ", Schmidt " + fmt("%.1e", schmidt_err)};
}

Result c9_conservation() {
    const auto times = linspace(0.0, 25.0, 200);
    double trace = 0.0;
    double herm = 0.0;
    double min_eig = 0.0;
    double drift = 0.0;
    for (double gamma : {0.0, 0.1}) {
        const Setup s = setup(kG, 0.0, gamma, 0.0);
        const auto states = oracle_run(s, times, kConservationIntegratorTol);
        const oracle::Mat excitation =
            oracle::number_joint(s.trunc.n_max) +
            Eigen::kroneckerProduct(oracle::Mat::Identity(static_cast<Eigen::Index>(s.trunc.n_max + 1),
                                                          static_cast<Eigen::Index>(s.trunc.n_max + 1)),
                                    oracle::Mat(oracle::sigma_plus() * oracle::sigma_plus().adjoint()))
                .eval();
        const double x0 = (states.front().matrix() * excitation).trace().real();
        for (const auto& r : states) {
            trace = std::max(trace, r.trace_error());
            herm = std::max(herm, r.hermiticity_error());
            min_eig = std::min(min_eig, r.min_eigenvalue());
            if (gamma == 0.0) {
                drift = std::max(drift, std::abs((r.matrix() * excitation).trace().real() - x0));
            }
        }
    }
    return {trace < kTraceTol && herm < kHermTol && min_eig > kMinEigTol &&
                drift < kExcitationDriftTol,
            "trace " + fmt("%.1e", trace) + ", Hermiticity " + fmt("%.1e", herm) +
                ", min eigenvalue " + fmt("%.1e", min_eig) + ", excitation drift " +
                fmt("%.1e", drift)};
}

Result c10_determinism() {
    auto csv_at = [](const char* workers) {
        sweep::SweepConfig cfg;
        cfg.set("nbar", "4");
        cfg.set("t_max", "10");
        cfg.set("t_points", "101");
        cfg.set("mode", "both");
        cfg.set("gamma_over_lambda", "0:0.2:5");
        cfg.set("delta_over_lambda", "0.1");
        cfg.set("workers", workers);
        cfg.validate();
        std::ostringstream os;
        sweep::write_csv(os, cfg, sweep::run_sweep(cfg));
        return os.str();
    };
    const std::string one = csv_at("1");
    const std::string eight = csv_at("8");
    return {one == eight && !one.empty(),
            std::to_string(one.size()) + " bytes, " + (one == eight ? "identical" : "different")};
}

struct Criterion {
    const char* id;
    const char* title;
    std::function<Result()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {"c1", "dephasing analytic law", c1_dephasing},
        {"c2", "closed form vs integrator gate", c2_gate},
        {"c3", "excitation block eigenvalues", c3_blocks},
        {"c4", "collapse and revival", c4_collapse_revival},
        {"c5", "idempotency defect extremes", c5_defect_extremes},
        {"c6", "damped defect plateau", c6_plateau},
        {"c7", "negativity asymptotics", c7_entanglement},
        {"c8", "metric oracles", c8_metric_oracles},
        {"c9", "conservation suite", c9_conservation},
        {"c10", "sweep determinism", c10_determinism},
    };
    std::vector<std::string> selected(argv + 1, argv + argc);

    int failures = 0;
    for (const auto& c : all) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
            continue;
        }
        Result r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s %s: %s\n", r.pass ? "PASS" : "FAIL", c.id, c.title, r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
