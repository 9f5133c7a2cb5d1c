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

// Physical parameters of a Cooper-pair box in a single-mode cavity, their
// reduction to natural units, the dressed-state Rabi frequencies and the
// truncated coherent-state amplitudes of the cavity field.
//
// After reduce_params every rate is measured in units of the reference rate
// lambda = sqrt(e^2 omega / (hbar C_F)) and every time as lambda * t, with
// hbar = 1.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "types.hpp"

namespace cpbox::model {

inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kHbar = 1.054571817e-34;              // J s

struct DeviceParams {
    double c_j = 0.0;    // junction capacitance, F
    double c_g = 0.0;    // gate capacitance, F
    double c_f = 0.0;    // field capacitance parameter, F
    double omega = 0.0;  // cavity angular frequency, rad/s
    double e_j = 0.0;    // Josephson energy, J
    std::optional<double> thermal_energy;  // k_B T, J
};

struct ReducedParams {
    double g = 0.0;      // coupling, units of lambda
    double delta = 0.0;  // half detuning (E_J - hbar omega)/(2 hbar), units of lambda
    double gamma = 0.0;  // phase-damping rate, units of lambda
    double lambda_scale = 1.0;  // rad/s, informational

    // Throws InvalidParameter on negative or non-finite rates.
    void validate() const;
};

struct FockTruncation {
    std::size_t n_max = 4;
    double tail_tolerance = 1e-10;
};

struct CoherentAmplitudes {
    double alpha_abs = 0.0;
    double beta_phase = 0.0;
    std::vector<cplx> amplitudes;  // b_n, n = 0..n_max, not renormalized
    double tail_mass = 0.0;        // Poisson mass above n_max

    std::size_t n_max() const { return amplitudes.size() - 1; }
    double mean_photons() const { return alpha_abs * alpha_abs; }
};

// Factorized initial state cos^2(theta)|e><e| + sin^2(theta)|g><g| times |alpha><alpha|.
struct InitialState {
    double theta = 0.0;
    CoherentAmplitudes field;

    double excited_weight() const;
    double ground_weight() const;
    // Field amplitudes rescaled to unit norm on the truncated space.
    Vector field_vector() const;
    std::size_t n_max() const { return field.n_max(); }
};

struct RegimeWarning {
    std::string code;
    std::string message;
};

ReducedParams reduce_params(const DeviceParams& device, double gamma_raw);

double charging_energy(const DeviceParams& device);

// Advisory only: checks k_B T << E_J ~ hbar omega << E_c and E_J << E_c.
std::vector<RegimeWarning> validate_regime(const DeviceParams& device);

// mu_n = sqrt(delta^2 + g^2 (n + 1)).
double rabi_frequency(const ReducedParams& params, std::size_t n);

// Poisson probability mass strictly above n_max, by direct summation.
double poisson_tail(double nbar, std::size_t n_max);

FockTruncation choose_truncation(double alpha_abs, double tail_tolerance);

CoherentAmplitudes coherent_amplitudes(double alpha_abs, double beta_phase,
                                       const FockTruncation& trunc);

InitialState make_initial_state(double theta, CoherentAmplitudes field);

// rho(0) on the joint basis.
DensityMatrix initial_density(const InitialState& init);

}  // namespace cpbox::model
