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

#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "version.hpp"

namespace cpbox::sweep {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw Error(ErrorKind::InvalidParameter,
                "invalid value '" + value + "' for key '" + key + "'");
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
        bad_value(key, text);
    }
    return out;
}

long long parse_int(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) bad_value(key, text);
    return out;
}

std::size_t parse_size(const std::string& key, const std::string& text) {
    const long long v = parse_int(key, text);
    if (v < 0) bad_value(key, text);
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, text);
}

std::string point_label(const GridPoint& p) {
    std::ostringstream os;
    os << "grid point delta/lambda=" << format_double(p.delta)
       << " gamma/lambda=" << format_double(p.gamma);
    return os.str();
}

// Runs fn(i) for i in [0, n) over a work queue; results come back in index
// order. The first failure by index is rethrown, annotated with its grid point.
template <class T, class F>
std::vector<T> parallel_map(const std::vector<GridPoint>& points, std::size_t workers, F fn) {
    const std::size_t n = points.size();
    std::vector<T> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = fn(points[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), n);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const Error& e) {
            throw Error(e.kind(), point_label(points[i]) + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorKind::Numerical, point_label(points[i]) + ": " + e.what());
        }
    }
    return results;
}

double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b) {
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

std::vector<closed_form::JointState> closed_states(const SweepConfig& cfg, const Prepared& prep,
                                                   const model::ReducedParams& params,
                                                   closed_form::Variant variant,
                                                   bool normalize) {
    const closed_form::Mode mode{variant, cfg.beta12};
    std::vector<closed_form::JointState> out;
    out.reserve(prep.times.size());
    for (double t : prep.times) {
        out.push_back(closed_form::joint_state(params, prep.initial, t, mode, normalize));
    }
    return out;
}

lindblad::Trajectory oracle_states(const SweepConfig& cfg, const Prepared& prep,
                                   const model::ReducedParams& params) {
    const lindblad::JointHamiltonian h = lindblad::build_hamiltonian(params, prep.truncation);
    const DensityMatrix rho0 = model::initial_density(prep.initial);
    return lindblad::evolve(h, params.gamma, rho0, cfg.t_max, cfg.integrator, prep.times);
}

std::vector<SweepRecord> run_point(const SweepConfig& cfg, const Prepared& prep,
                                   const GridPoint& point) {
    const model::ReducedParams params = params_at(cfg, point);
    std::vector<SweepRecord> recs;

    auto push = [&](Mode tag, const DensityMatrix& rho, double t, double trace_error,
                    std::optional<double> residual) {
        SweepRecord r;
        r.point = point;
        r.theta = cfg.theta;
        r.nbar = cfg.nbar;
        r.mode = tag;
        r.row = metrics::metric_row(rho, t, trace_error);
        r.residual = residual;
        recs.push_back(std::move(r));
    };
    auto push_closed = [&](Mode tag, const std::vector<closed_form::JointState>& states,
                           const std::vector<double>* residuals) {
        for (std::size_t k = 0; k < states.size(); ++k) {
            std::optional<double> res;
            if (residuals) res = (*residuals)[k];
            push(tag, states[k].rho, prep.times[k], std::abs(states[k].trace_deficit), res);
        }
    };
    auto push_oracle = [&](const lindblad::Trajectory& traj,
                           const std::vector<double>* residuals) {
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            std::optional<double> res;
            if (residuals) res = (*residuals)[k];
            push(Mode::Lindblad, traj.states[k], prep.times[k], traj.states[k].trace_error(), res);
        }
    };

    switch (cfg.mode) {
        case Mode::ClosedPrinted:
            push_closed(Mode::ClosedPrinted,
                        closed_states(cfg, prep, params, closed_form::Variant::AsPrinted,
                                      cfg.normalize),
                        nullptr);
            break;
        case Mode::ClosedCorrected:
            push_closed(Mode::ClosedCorrected,
                        closed_states(cfg, prep, params, closed_form::Variant::Corrected,
                                      cfg.normalize),
                        nullptr);
            break;
        case Mode::Lindblad:
            push_oracle(oracle_states(cfg, prep, params), nullptr);
            break;
        case Mode::Both: {
            const auto closed = closed_states(cfg, prep, params,
                                              closed_form::Variant::Corrected, cfg.normalize);
            const auto traj = oracle_states(cfg, prep, params);
            std::vector<double> residuals(closed.size());
            for (std::size_t k = 0; k < closed.size(); ++k) {
                residuals[k] = max_abs_diff(closed[k].rho, traj.states[k]);
            }
            push_closed(Mode::ClosedCorrected, closed, &residuals);
            push_oracle(traj, &residuals);
            break;
        }
    }
    return recs;
}

}  // namespace

// ---------------------------------------------------------------------------
// Axis

Axis Axis::parse(const std::string& text) {
    const std::string v = trim(text);
    if (v.find(':') == std::string::npos) return scalar(parse_double("axis", v));
    std::vector<std::string> parts;
    std::stringstream ss(v);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) bad_value("axis", text);
    Axis a;
    a.min = parse_double("axis", parts[0]);
    a.max = parse_double("axis", parts[1]);
    a.points = parse_size("axis", parts[2]);
    a.is_axis = true;
    return a;
}

std::vector<double> Axis::values() const {
    if (!is_axis) return {min};
    std::vector<double> out;
    out.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        out.push_back(points == 1 ? min
                                  : min + (max - min) * static_cast<double>(i) /
                                              static_cast<double>(points - 1));
    }
    return out;
}

std::string Axis::to_string() const {
    if (!is_axis) return format_double(min);
    return format_double(min) + ":" + format_double(max) + ":" + std::to_string(points);
}

std::string_view mode_name(Mode m) {
    switch (m) {
        case Mode::ClosedPrinted: return "closed_printed";
        case Mode::ClosedCorrected: return "closed_corrected";
        case Mode::Lindblad: return "lindblad";
        case Mode::Both: return "both";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// SweepConfig

void SweepConfig::set(const std::string& raw_key, const std::string& value) {
    const std::string key = trim(raw_key);
    const std::string v = trim(value);
    if (key == "nbar") {
        nbar = parse_double(key, v);
    } else if (key == "theta") {
        theta = parse_double(key, v);
    } else if (key == "beta_phase") {
        beta_phase = parse_double(key, v);
    } else if (key == "beta12") {
        if (v == "zero") beta12 = closed_form::Beta12::Zero;
        else if (v == "double") beta12 = closed_form::Beta12::DoublePhase;
        else bad_value(key, v);
    } else if (key == "g_over_lambda") {
        g_over_lambda = parse_double(key, v);
    } else if (key == "delta_over_lambda") {
        delta_over_lambda = Axis::parse(v);
    } else if (key == "gamma_over_lambda") {
        gamma_over_lambda = Axis::parse(v);
    } else if (key == "t_max") {
        t_max = parse_double(key, v);
    } else if (key == "t_points") {
        t_points = parse_size(key, v);
    } else if (key == "mode") {
        if (v == "closed_printed") mode = Mode::ClosedPrinted;
        else if (v == "closed_corrected") mode = Mode::ClosedCorrected;
        else if (v == "lindblad") mode = Mode::Lindblad;
        else if (v == "both") mode = Mode::Both;
        else bad_value(key, v);
    } else if (key == "n_max") {
        if (v == "auto") n_max.reset();
        else n_max = parse_size(key, v);
    } else if (key == "tail_tolerance") {
        tail_tolerance = parse_double(key, v);
    } else if (key == "integrator") {
        if (v == "rk45") integrator.method = lindblad::Method::RK45Adaptive;
        else if (v == "rk4") integrator.method = lindblad::Method::RK4Fixed;
        else bad_value(key, v);
    } else if (key == "tolerance") {
        integrator.tolerance = parse_double(key, v);
    } else if (key == "dt") {
        integrator.dt = parse_double(key, v);
    } else if (key == "renorm_interval") {
        integrator.renorm_interval = parse_size(key, v);
    } else if (key == "normalize") {
        normalize = parse_bool(key, v);
    } else if (key == "out") {
        out = v;
    } else if (key == "workers") {
        workers = parse_size(key, v);
    } else if (key == "seed") {
        seed = parse_int(key, v);
    } else if (key == "c_j") {
        c_j_ = parse_double(key, v);
    } else if (key == "c_g") {
        c_g_ = parse_double(key, v);
    } else if (key == "c_f") {
        c_f_ = parse_double(key, v);
    } else if (key == "omega") {
        omega_ = parse_double(key, v);
    } else if (key == "e_j") {
        e_j_ = parse_double(key, v);
    } else if (key == "k_b_t") {
        k_b_t_ = parse_double(key, v);
    } else {
        throw Error(ErrorKind::InvalidParameter, "unknown configuration key '" + key + "'");
    }
}

void SweepConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + path + "'");
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::InvalidParameter,
                        path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        set(line.substr(0, eq), line.substr(eq + 1));
    }
}

std::optional<model::DeviceParams> SweepConfig::device() const {
    if (!(c_j_ && c_g_ && c_f_ && omega_ && e_j_)) return std::nullopt;
    model::DeviceParams d;
    d.c_j = *c_j_;
    d.c_g = *c_g_;
    d.c_f = *c_f_;
    d.omega = *omega_;
    d.e_j = *e_j_;
    d.thermal_energy = k_b_t_;
    return d;
}

double SweepConfig::coupling() const {
    if (const auto d = device()) return model::reduce_params(*d, 0.0).g;
    return g_over_lambda;
}

void SweepConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidParameter, msg); };
    if (!(nbar >= 0.0)) fail("nbar must be >= 0");
    if (!(theta >= 0.0 && theta < std::numbers::pi / 2)) fail("theta must lie in [0, pi/2)");
    if (!(coupling() >= 0.0)) fail("g_over_lambda must be >= 0");
    if (delta_over_lambda.is_axis && gamma_over_lambda.is_axis) {
        fail("only one of delta_over_lambda and gamma_over_lambda may be an axis");
    }
    if (t_points < 2) fail("t_points must be >= 2");
    if (!(t_max >= 0.0)) fail("t_max must be >= 0");
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) fail("tail_tolerance must be in (0, 1)");
    for (double g : gamma_over_lambda.values()) {
        if (!(g >= 0.0)) fail("gamma_over_lambda must be >= 0");
    }
    if (n_max && *n_max < 1) fail("n_max must be >= 1");
    if ((c_j_ || c_g_ || c_f_ || omega_ || e_j_) && !device()) {
        fail("device description needs all of c_j, c_g, c_f, omega, e_j");
    }
    integrator.validate();
}

void SweepConfig::check_kind(Kind kind) const {
    validate();
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidParameter, msg); };
    switch (kind) {
        case Kind::Simulate:
            if (delta_over_lambda.is_axis || gamma_over_lambda.is_axis) {
                fail("simulate runs a single point; give scalar delta and gamma");
            }
            break;
        case Kind::SweepDetuning:
            if (!delta_over_lambda.is_axis) {
                fail("sweep-detuning needs delta_over_lambda as min:max:points");
            }
            break;
        case Kind::SweepDamping:
            if (!gamma_over_lambda.is_axis) {
                fail("sweep-damping needs gamma_over_lambda as min:max:points");
            }
            break;
        case Kind::Compare:
        case Kind::Validate:
            break;
    }
}

std::size_t SweepConfig::resolved_workers() const {
    if (workers > 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

model::FockTruncation SweepConfig::truncation() const {
    if (n_max) return model::FockTruncation{*n_max, tail_tolerance};
    return model::choose_truncation(std::sqrt(nbar), tail_tolerance);
}

std::vector<std::pair<std::string, std::string>> SweepConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("nbar", format_double(nbar));
    out.emplace_back("theta", format_double(theta));
    out.emplace_back("beta_phase", format_double(beta_phase));
    out.emplace_back("beta12", beta12 == closed_form::Beta12::Zero ? "zero" : "double");
    out.emplace_back("g_over_lambda", format_double(coupling()));
    out.emplace_back("delta_over_lambda", delta_over_lambda.to_string());
    out.emplace_back("gamma_over_lambda", gamma_over_lambda.to_string());
    out.emplace_back("t_max", format_double(t_max));
    out.emplace_back("t_points", std::to_string(t_points));
    out.emplace_back("mode", std::string(mode_name(mode)));
    out.emplace_back("n_max", n_max ? std::to_string(*n_max) : "auto");
    out.emplace_back("tail_tolerance", format_double(tail_tolerance));
    out.emplace_back("integrator",
                     integrator.method == lindblad::Method::RK45Adaptive ? "rk45" : "rk4");
    out.emplace_back("tolerance", format_double(integrator.tolerance));
    out.emplace_back("dt", format_double(integrator.dt));
    out.emplace_back("renorm_interval", std::to_string(integrator.renorm_interval));
    out.emplace_back("normalize", normalize ? "true" : "false");
    if (const auto d = device()) {
        out.emplace_back("c_j", format_double(d->c_j));
        out.emplace_back("c_g", format_double(d->c_g));
        out.emplace_back("c_f", format_double(d->c_f));
        out.emplace_back("omega", format_double(d->omega));
        out.emplace_back("e_j", format_double(d->e_j));
        if (d->thermal_energy) out.emplace_back("k_b_t", format_double(*d->thermal_energy));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grid and preparation

std::vector<GridPoint> grid(const SweepConfig& cfg) {
    std::vector<GridPoint> out;
    for (double d : cfg.delta_over_lambda.values()) {
        for (double g : cfg.gamma_over_lambda.values()) out.push_back({d, g});
    }
    return out;
}

std::vector<double> time_grid(const SweepConfig& cfg) {
    std::vector<double> out(cfg.t_points);
    for (std::size_t i = 0; i < cfg.t_points; ++i) {
        out[i] = cfg.t_max * static_cast<double>(i) / static_cast<double>(cfg.t_points - 1);
    }
    return out;
}

Prepared prepare(const SweepConfig& cfg) {
    cfg.validate();
    Prepared p;
    p.points = grid(cfg);
    if (p.points.empty()) throw Error(ErrorKind::InvalidParameter, "no grid points");
    p.truncation = cfg.truncation();
    p.initial = model::make_initial_state(
        cfg.theta,
        model::coherent_amplitudes(std::sqrt(cfg.nbar), cfg.beta_phase, p.truncation));
    p.times = time_grid(cfg);
    return p;
}

model::ReducedParams params_at(const SweepConfig& cfg, const GridPoint& p) {
    model::ReducedParams r;
    r.g = cfg.coupling();
    r.delta = p.delta;
    r.gamma = p.gamma;
    if (const auto d = cfg.device()) r.lambda_scale = model::reduce_params(*d, 0.0).lambda_scale;
    return r;
}

// ---------------------------------------------------------------------------
// Sweep

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    const Prepared prep = prepare(cfg);
    auto per_point = parallel_map<std::vector<SweepRecord>>(
        prep.points, cfg.resolved_workers(),
        [&](const GridPoint& p) { return run_point(cfg, prep, p); });

    std::vector<SweepRecord> out;
    for (auto& v : per_point) {
        out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

void write_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<SweepRecord>& recs) {
    const model::FockTruncation trunc = cfg.truncation();
    os << "# cpbox " << kVersion << "\n";
    for (const auto& [k, v] : cfg.echo()) os << "# " << k << " = " << v << "\n";
    os << "# resolved n_max = " << trunc.n_max << "\n";
    os << "# poisson tail above n_max = "
       << format_double(model::poisson_tail(cfg.nbar, trunc.n_max)) << "\n";
    os << "# concurrence_2q is approximate: qubit x two dominant field eigenvectors\n";
    os << "# idempotency_defect = 2 * linear_entropy_raw\n";
    os << kCsvHeader << "\n";

    std::string line;
    for (const SweepRecord& r : recs) {
        line.clear();
        auto field = [&](const std::string& s) {
            line += s;
            line += ',';
        };
        field(format_double(r.row.t));
        field(format_double(r.point.delta));
        field(format_double(r.point.gamma));
        field(format_double(r.theta));
        field(format_double(r.nbar));
        field(std::string(mode_name(r.mode)));
        field(format_double(r.row.inversion));
        field(format_double(r.row.linear_entropy_raw));
        field(format_double(r.row.idempotency_defect));
        field(r.row.concurrence_2q ? format_double(*r.row.concurrence_2q) : std::string());
        field(format_double(r.row.negativity));
        field(format_double(r.row.purity));
        field(format_double(r.row.mean_photons));
        field(format_double(r.row.trace_error));
        if (r.residual) line += format_double(*r.residual);
        os << line << "\n";
    }
}

void write_run_manifest(std::ostream& os, const SweepConfig& cfg, const RunInfo& info) {
    os << "# cpbox " << kVersion << " run manifest\n";
    for (const auto& [k, v] : cfg.echo()) os << "# " << k << " = " << v << "\n";
    os << "# workers = " << info.workers << "\n";
    os << "# rows = " << info.rows << "\n";
    os << "# wall_seconds = " << format_double(info.wall_seconds) << "\n";
}

// ---------------------------------------------------------------------------
// Compare

CompareReport compare_report(const SweepConfig& cfg_in) {
    SweepConfig cfg = cfg_in;
    cfg.mode = Mode::Both;
    const Prepared prep = prepare(cfg);

    CompareReport report;
    report.entries = parallel_map<CompareEntry>(
        prep.points, cfg.resolved_workers(), [&](const GridPoint& p) {
            const model::ReducedParams params = params_at(cfg, p);
            const auto closed =
                closed_states(cfg, prep, params, closed_form::Variant::Corrected, true);
            const auto printed =
                closed_states(cfg, prep, params, closed_form::Variant::AsPrinted, false);
            const auto traj = oracle_states(cfg, prep, params);

            CompareEntry e;
            e.point = p;
            e.gated = (p.gamma == 0.0);
            const double printed_t0 = printed.front().trace_before_normalization;
            for (std::size_t k = 0; k < prep.times.size(); ++k) {
                e.max_residual = std::max(e.max_residual, max_abs_diff(closed[k].rho, traj.states[k]));
                e.printed_trace_deficit =
                    std::max(e.printed_trace_deficit,
                             std::abs(1.0 - printed[k].trace_before_normalization / printed_t0));
                e.printed_hermiticity =
                    std::max(e.printed_hermiticity, printed[k].hermiticity_defect);

                const metrics::QubitState qc = metrics::partial_trace_field(closed[k].rho);
                const metrics::QubitState qo = metrics::partial_trace_field(traj.states[k]);
                e.max_d_inversion = std::max(
                    e.max_d_inversion,
                    std::abs(metrics::atomic_inversion(qc) - metrics::atomic_inversion(qo)));
                e.max_d_defect = std::max(
                    e.max_d_defect,
                    std::abs(metrics::idempotency_defect(qc) - metrics::idempotency_defect(qo)));
                e.max_d_negativity = std::max(
                    e.max_d_negativity, std::abs(metrics::negativity(closed[k].rho) -
                                                 metrics::negativity(traj.states[k])));
            }
            e.pass = !e.gated || e.max_residual <= kEquivalenceGate;
            return e;
        });

    std::ostringstream os;
    os << "closed form (corrected) vs integrator over " << report.entries.size()
       << " grid point(s), " << prep.times.size() << " times each\n";
    os << "delta/lambda  gamma/lambda  max_residual  printed_trace_deficit  status\n";
    for (const CompareEntry& e : report.entries) {
        report.gate_passed = report.gate_passed && e.pass;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%12.6g  %12.6g  %12.4e  %21.4e  %s\n", e.point.delta,
                      e.point.gamma, e.max_residual, e.printed_trace_deficit,
                      !e.gated ? "info (gamma > 0)" : (e.pass ? "PASS" : "FAIL"));
        os << buf;
    }

    std::vector<const CompareEntry*> worst;
    for (const auto& e : report.entries) worst.push_back(&e);
    std::stable_sort(worst.begin(), worst.end(), [](const CompareEntry* a, const CompareEntry* b) {
        return a->max_residual > b->max_residual;
    });
    if (worst.size() > 5) worst.resize(5);
    os << "worst offenders:\n";
    for (const CompareEntry* e : worst) {
        os << "  delta/lambda=" << format_double(e->point.delta)
           << " gamma/lambda=" << format_double(e->point.gamma)
           << " residual=" << format_double(e->max_residual)
           << " d_inversion=" << format_double(e->max_d_inversion)
           << " d_defect=" << format_double(e->max_d_defect)
           << " d_negativity=" << format_double(e->max_d_negativity) << "\n";
    }
    os << "gate (gamma = 0, residual <= " << kEquivalenceGate
       << "): " << (report.gate_passed ? "PASS" : "FAIL") << "\n";
    report.text = os.str();
    return report;
}

void write_compare_csv(std::ostream& os, const CompareReport& report) {
    os << "delta_over_lambda,gamma_over_lambda,max_residual,printed_trace_deficit,"
          "printed_hermiticity,max_d_inversion,max_d_idempotency_defect,max_d_negativity,"
          "gated,pass\n";
    for (const CompareEntry& e : report.entries) {
        os << format_double(e.point.delta) << ',' << format_double(e.point.gamma) << ','
           << format_double(e.max_residual) << ',' << format_double(e.printed_trace_deficit)
           << ',' << format_double(e.printed_hermiticity) << ','
           << format_double(e.max_d_inversion) << ',' << format_double(e.max_d_defect) << ','
           << format_double(e.max_d_negativity) << ',' << (e.gated ? 1 : 0) << ','
           << (e.pass ? 1 : 0) << "\n";
    }
}

// ---------------------------------------------------------------------------
// Validate

ValidationReport validate_point(const SweepConfig& cfg_in) {
    SweepConfig cfg = cfg_in;
    cfg.delta_over_lambda = Axis::scalar(cfg.delta_over_lambda.values().at(0));
    cfg.gamma_over_lambda = Axis::scalar(cfg.gamma_over_lambda.values().at(0));
    const Prepared prep = prepare(cfg);
    const GridPoint point = prep.points.front();
    const model::ReducedParams params = params_at(cfg, point);

    ValidationReport rep;
    if (const auto d = cfg.device()) rep.warnings = model::validate_regime(*d);

    auto check = [&](std::string name, double value, double threshold, bool gate = false) {
        ValidationCheck c{std::move(name), value, threshold, value <= threshold, gate};
        if (!c.pass) (gate ? rep.gate_ok : rep.numerical_ok) = false;
        rep.checks.push_back(std::move(c));
    };

    check("poisson tail above n_max", model::poisson_tail(cfg.nbar, prep.truncation.n_max),
          cfg.tail_tolerance);

    const lindblad::Trajectory traj = oracle_states(cfg, prep, params);
    const double n0 = lindblad::excitation_number(traj.states.front());
    double tr = 0.0, herm = 0.0, neg_eig = 0.0, drift = 0.0;
    for (const DensityMatrix& s : traj.states) {
        tr = std::max(tr, s.trace_error());
        herm = std::max(herm, s.hermiticity_error());
        neg_eig = std::max(neg_eig, -s.min_eigenvalue());
        drift = std::max(drift, std::abs(lindblad::excitation_number(s) - n0));
    }
    check("integrator trace error", tr, 1e-8);
    check("integrator hermiticity error", herm, 1e-10);
    check("integrator negative eigenvalue", neg_eig, 1e-8);
    if (params.gamma == 0.0) check("excitation number drift", drift, 1e-8);

    const auto closed = closed_states(cfg, prep, params, closed_form::Variant::Corrected, false);
    double closed_tr = 0.0, residual = 0.0;
    for (std::size_t k = 0; k < closed.size(); ++k) {
        closed_tr = std::max(closed_tr, std::abs(closed[k].trace_deficit));
        residual = std::max(residual, max_abs_diff(closed[k].rho, traj.states[k]));
    }
    check("corrected closed form trace error", closed_tr, 1e-12);
    if (params.gamma == 0.0) {
        check("closed form vs integrator residual", residual, kEquivalenceGate, true);
    }

    std::ostringstream os;
    os << "validating delta/lambda=" << format_double(point.delta)
       << " gamma/lambda=" << format_double(point.gamma) << " g/lambda="
       << format_double(params.g) << " n_max=" << prep.truncation.n_max << "\n";
    for (const auto& c : rep.checks) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "  [%s] %-36s %.3e (limit %.1e)\n",
                      c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.threshold);
        os << buf;
    }
    if (params.gamma > 0.0) {
        os << "  [INFO] closed form vs integrator residual " << format_double(residual)
           << " (gamma > 0, not gated)\n";
    }
    for (const auto& w : rep.warnings) os << "  [WARN] " << w.code << ": " << w.message << "\n";
    rep.text = os.str();
    return rep;
}

}  // namespace cpbox::sweep
