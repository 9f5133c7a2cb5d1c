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

#include <optional>

#include "types.hpp"

namespace cpbox::metrics {

using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

// Reduced qubit state in the {|e>, |g>} basis.
class QubitState {
public:
    QubitState() : m_(Matrix2::Zero()) {}
    explicit QubitState(const Matrix2& m) : m_(m) {}

    const Matrix2& matrix() const { return m_; }
    double excited() const { return m_(0, 0).real(); }
    double ground() const { return m_(1, 1).real(); }

private:
    Matrix2 m_;
};

struct MetricRow {
    double t = 0.0;
    double inversion = 0.0;
    double linear_entropy_raw = 0.0;  // 1 - Tr rho_J^2, in [0, 1/2]
    double idempotency_defect = 0.0;  // 2 * linear_entropy_raw, in [0, 1]
    std::optional<double> concurrence_2q;  // approximate, see concurrence_effective
    bool concurrence_reliable = true;
    double negativity = 0.0;
    double purity = 1.0;
    double mean_photons = 0.0;
    double trace_error = 0.0;
};

QubitState partial_trace_field(const DensityMatrix& rho);
Matrix partial_trace_qubit(const DensityMatrix& rho);

double purity(const QubitState& q);
double linear_entropy(const QubitState& q);
// Linear entropy rescaled to [0, 1]: 0 for a pure, 1 for the maximally mixed qubit.
double idempotency_defect(const QubitState& q);
double atomic_inversion(const QubitState& q);

// Wootters concurrence from the spectrum of rho * (sy sy) rho^* (sy sy).
// Throws InvalidParameter for non-Hermitian or non-unit-trace input.
double concurrence_two_qubit(const Matrix4& rho);

struct ConcurrenceEstimate {
    double value = 0.0;
    bool reliable = true;  // false when the field spectrum is degenerate at rank 2
};

// Concurrence of the qubit (x) field state after projecting the field onto
// the two dominant eigenvectors of its reduced state. An approximation: the
// joint system is 2 x (n_max+1), not two qubits.
ConcurrenceEstimate concurrence_effective(const DensityMatrix& rho);

// (||rho^{T_qubit}||_1 - 1)/2, i.e. the magnitude of the negative spectrum of
// the partial transpose over the qubit.
double negativity(const DensityMatrix& rho);

double mean_photons(const DensityMatrix& rho);

// All observables of one state. trace_error defaults to |Tr rho - 1| and can
// be overridden with a pre-normalization value.
MetricRow metric_row(const DensityMatrix& rho, double t,
                     std::optional<double> trace_error = std::nullopt);

}  // namespace cpbox::metrics
