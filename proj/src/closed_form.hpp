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

// Analytical dressed-state solution for the joint qubit-cavity density matrix
// under phase damping.
//
// Two variants are provided:
//
//  * AsPrinted evaluates the published solution literally. It carries a global
//    exp(-gamma t / 2) factor, population coefficients (cos mu_nm + cos mu'_nm)
//    without the factor 1/2, and cross terms proportional to sin(mu_n t - mu_m t).
//    The result is neither trace preserving nor Hermitian for t > 0; both
//    defects are reported in JointState rather than repaired.
//
//  * Corrected is the exact Jaynes-Cummings evolution in the rotating frame
//    (generalized Rabi amplitudes in each excitation block) with every bare
//    basis element |n,q><m,q'| multiplied by exp(-gamma t (n - m)^2). It is
//    exact at gamma = 0 and trace preserving, Hermitian and positive for all t.
//
// Both variants live on the same truncated space as the numerical integrator:
// |n_max, e> has no partner |n_max + 1, g> and evolves with phase exp(-i delta t).

#include <utility>
#include <vector>

#include "model.hpp"
#include "types.hpp"

namespace cpbox::closed_form {

enum class Variant { AsPrinted, Corrected };

// Interpretation of the phase beta_12 = beta - beta* in the printed solution.
// With beta real it vanishes (Zero); DoublePhase reads it as 2*beta.
enum class Beta12 { Zero, DoublePhase };

struct Mode {
    Variant variant = Variant::Corrected;
    Beta12 beta12 = Beta12::Zero;
};

struct JointState {
    DensityMatrix rho;
    double trace_before_normalization = 1.0;
    double trace_deficit = 0.0;  // 1 - trace before normalization
    double hermiticity_defect = 0.0;
};

JointState joint_state(const model::ReducedParams& params, const model::InitialState& init,
                       double t, Mode mode, bool normalize);

// W(t) = P_e - P_g of the reduced qubit state at each time.
std::vector<std::pair<double, double>> inversion_series(const model::ReducedParams& params,
                                                        const model::InitialState& init,
                                                        const std::vector<double>& times,
                                                        Mode mode);

// Pure-state Jaynes-Cummings vector at time t for a definite initial qubit
// state and the (normalized) field amplitudes b.
Vector jaynes_cummings_state(const model::ReducedParams& params, const Vector& b, Qubit start,
                             double t);

}  // namespace cpbox::closed_form
