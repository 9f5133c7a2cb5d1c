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

#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cpbox::model {

namespace {

// "<<" means a ratio below this; "~" means within this factor.
constexpr double kMuchLess = 0.1;
constexpr double kComparable = 3.0;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

std::string ratio_message(const char* what, double ratio) {
    std::ostringstream os;
    os << what << " (ratio " << ratio << ")";
    return os.str();
}

}  // namespace

void ReducedParams::validate() const {
    if (!std::isfinite(g) || g < 0.0) {
        throw Error(ErrorKind::InvalidParameter, "coupling g must be finite and >= 0");
    }
    if (!std::isfinite(delta)) {
        throw Error(ErrorKind::InvalidParameter, "detuning must be finite");
    }
    if (!std::isfinite(gamma) || gamma < 0.0) {
        throw Error(ErrorKind::InvalidParameter, "damping gamma must be finite and >= 0");
    }
}

double InitialState::excited_weight() const {
    const double c = std::cos(theta);
    return c * c;
}

double InitialState::ground_weight() const {
    const double s = std::sin(theta);
    return s * s;
}

Vector InitialState::field_vector() const {
    Vector v(static_cast<Eigen::Index>(field.amplitudes.size()));
    for (std::size_t n = 0; n < field.amplitudes.size(); ++n) {
        v(static_cast<Eigen::Index>(n)) = field.amplitudes[n];
    }
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    return v;
}

ReducedParams reduce_params(const DeviceParams& device, double gamma_raw) {
    if (!positive_finite(device.c_j) || !positive_finite(device.c_g) ||
        !positive_finite(device.c_f)) {
        throw Error(ErrorKind::InvalidParameter, "capacitances must be strictly positive");
    }
    if (!positive_finite(device.omega)) {
        throw Error(ErrorKind::InvalidParameter, "cavity frequency must be strictly positive");
    }
    if (!std::isfinite(device.e_j)) {
        throw Error(ErrorKind::InvalidParameter, "Josephson energy must be finite");
    }
    if (!std::isfinite(gamma_raw) || gamma_raw < 0.0) {
        throw Error(ErrorKind::InvalidParameter, "raw damping rate must be >= 0");
    }

    const double e = kElementaryCharge;
    const double lambda = std::sqrt(e * e * device.omega / (kHbar * device.c_f));

    ReducedParams p;
    p.lambda_scale = lambda;
    p.g = device.c_j / (device.c_j + device.c_g) / (2.0 * std::numbers::sqrt2);
    p.delta = (device.e_j - kHbar * device.omega) / (2.0 * kHbar) / lambda;
    p.gamma = gamma_raw / lambda;
    return p;
}

double charging_energy(const DeviceParams& device) {
    const double e = kElementaryCharge;
    return e * e / (2.0 * (device.c_g + device.c_j));
}

std::vector<RegimeWarning> validate_regime(const DeviceParams& device) {
    std::vector<RegimeWarning> out;
    const double e_c = charging_energy(device);
    const double photon = kHbar * device.omega;

    if (device.thermal_energy && *device.thermal_energy > 0.0) {
        const double r = *device.thermal_energy / device.e_j;
        if (!(r < kMuchLess)) {
            out.push_back({"thermal", ratio_message("k_B T not << E_J", r)});
        }
    }
    {
        const double r = device.e_j / photon;
        if (!(r <= kComparable && r >= 1.0 / kComparable)) {
            out.push_back({"josephson-photon", ratio_message("E_J not ~ hbar omega", r)});
        }
    }
    {
        const double r = photon / e_c;
        if (!(r < kMuchLess)) {
            out.push_back({"photon-charging", ratio_message("hbar omega not << E_c", r)});
        }
    }
    {
        const double r = device.e_j / e_c;
        if (!(r < kMuchLess)) {
            out.push_back({"josephson-charging", ratio_message("E_J not << E_c", r)});
        }
    }
    return out;
}

double rabi_frequency(const ReducedParams& params, std::size_t n) {
    return std::sqrt(params.delta * params.delta +
                     params.g * params.g * static_cast<double>(n + 1));
}

double poisson_tail(double nbar, std::size_t n_max) {
    if (nbar <= 0.0) return 0.0;
    const double log_nbar = std::log(nbar);
    auto log_pmf = [&](double k) { return -nbar + k * log_nbar - std::lgamma(k + 1.0); };

    double sum = 0.0;
    double k = static_cast<double>(n_max) + 1.0;
    for (;; k += 1.0) {
        const double term = std::exp(log_pmf(k));
        sum += term;
        // Past the mode the terms fall off geometrically with ratio nbar/(k+1).
        if (k > nbar && (term == 0.0 || term < 1e-18 * sum)) break;
    }
    return sum;
}

FockTruncation choose_truncation(double alpha_abs, double tail_tolerance) {
    if (!std::isfinite(alpha_abs) || alpha_abs < 0.0) {
        throw Error(ErrorKind::InvalidParameter, "|alpha| must be >= 0");
    }
    if (!(tail_tolerance > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "tail tolerance must be > 0");
    }
    const double nbar = alpha_abs * alpha_abs;
    const auto floor_n = static_cast<std::size_t>(
        std::max(4.0, std::ceil(nbar + 6.0 * std::sqrt(nbar))));

    std::size_t n = 0;
    while (poisson_tail(nbar, n) >= tail_tolerance) ++n;
    return FockTruncation{std::max(n, floor_n), tail_tolerance};
}

CoherentAmplitudes coherent_amplitudes(double alpha_abs, double beta_phase,
                                       const FockTruncation& trunc) {
    if (!std::isfinite(alpha_abs) || alpha_abs < 0.0) {
        throw Error(ErrorKind::InvalidParameter, "|alpha| must be >= 0");
    }
    if (trunc.n_max < 1) {
        throw Error(ErrorKind::InvalidParameter, "n_max must be >= 1");
    }
    const double nbar = alpha_abs * alpha_abs;
    CoherentAmplitudes out;
    out.alpha_abs = alpha_abs;
    out.beta_phase = beta_phase;
    out.tail_mass = poisson_tail(nbar, trunc.n_max);
    if (out.tail_mass >= trunc.tail_tolerance) {
        std::ostringstream os;
        os << "truncation n_max=" << trunc.n_max << " leaves Poisson tail " << out.tail_mass
           << " >= tolerance " << trunc.tail_tolerance << "; increase n_max";
        throw Error(ErrorKind::TruncationTooSmall, os.str());
    }

    out.amplitudes.assign(trunc.n_max + 1, cplx{0.0, 0.0});
    if (alpha_abs == 0.0) {
        out.amplitudes[0] = 1.0;
        return out;
    }
    // log|b_{n+1}| = log|b_n| + log|alpha| - log(n+1)/2, phase n*beta.
    const double log_alpha = std::log(alpha_abs);
    double log_mag = -0.5 * nbar;
    for (std::size_t n = 0; n <= trunc.n_max; ++n) {
        if (n > 0) log_mag += log_alpha - 0.5 * std::log(static_cast<double>(n));
        out.amplitudes[n] = std::polar(std::exp(log_mag), static_cast<double>(n) * beta_phase);
    }
    return out;
}

InitialState make_initial_state(double theta, CoherentAmplitudes field) {
    if (!std::isfinite(theta) || theta < 0.0 || theta >= std::numbers::pi / 2) {
        throw Error(ErrorKind::InvalidParameter, "theta must lie in [0, pi/2)");
    }
    if (field.amplitudes.size() < 2) {
        throw Error(ErrorKind::InvalidParameter, "field amplitudes need n_max >= 1");
    }
    return InitialState{theta, std::move(field)};
}

DensityMatrix initial_density(const InitialState& init) {
    const Vector b = init.field_vector();
    const std::size_t n_max = init.n_max();
    DensityMatrix rho = DensityMatrix::zero(n_max);
    Matrix& m = rho.matrix();
    const double we = init.excited_weight();
    const double wg = init.ground_weight();
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t k = 0; k <= n_max; ++k) {
            const cplx bb = b(static_cast<Eigen::Index>(n)) *
                            std::conj(b(static_cast<Eigen::Index>(k)));
            const auto ie = static_cast<Eigen::Index>(basis_index(n, Qubit::Excited));
            const auto je = static_cast<Eigen::Index>(basis_index(k, Qubit::Excited));
            m(ie, je) = we * bb;
            m(ie + 1, je + 1) = wg * bb;
        }
    }
    return rho;
}

}  // namespace cpbox::model
