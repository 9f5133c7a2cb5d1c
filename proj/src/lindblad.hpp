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

// Direct time integration of the phase-damping master equation
//
//   d rho/dt = -i [H, rho] + gamma (2 N rho N - N^2 rho - rho N^2),  N = a^dagger a,
//
// in the frame rotating at the cavity frequency. This is the reference that the
// analytical solutions are checked against.

#include <cstddef>
#include <vector>

#include "model.hpp"
#include "types.hpp"

namespace cpbox::lindblad {

// Rotating-frame Hamiltonian delta*sz + coupling, coupling elements
// <n,e|H|n+1,g> = -i g sqrt(n+1). Each row has at most one off-diagonal entry,
// which liouvillian_apply exploits.
class JointHamiltonian {
public:
    JointHamiltonian(Matrix m, model::ReducedParams params);

    const Matrix& matrix() const { return m_; }
    const model::ReducedParams& params() const { return params_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

    // Band view: H = diag(diagonal) + sum_i coupling[i] |i><partner[i]|.
    const std::vector<double>& diagonal() const { return diag_; }
    const std::vector<Eigen::Index>& partner() const { return partner_; }
    const std::vector<cplx>& coupling() const { return coupling_; }

private:
    Matrix m_;
    model::ReducedParams params_;
    std::vector<double> diag_;
    std::vector<Eigen::Index> partner_;  // -1 when the row is uncoupled
    std::vector<cplx> coupling_;
};

// RK45Adaptive is Dormand-Prince 5(4) with the diagonal part of the generator
// (detuning phases and dephasing) applied exactly as an integrating factor.
enum class Method { RK4Fixed, RK45Adaptive };

struct IntegratorConfig {
    Method method = Method::RK45Adaptive;
    double dt = 0.01;          // RK4Fixed step, scaled time
    double tolerance = 1e-9;   // RK45Adaptive local error tolerance
    std::size_t renorm_interval = 0;  // accepted steps between trace renormalizations, 0 = never

    void validate() const;
};

// Minimum eigenvalue below which a sampled state is rejected.
inline constexpr double kPositivityFloor = -1e-6;

struct Trajectory {
    std::vector<DensityMatrix> states;  // one per sample time
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

JointHamiltonian build_hamiltonian(const model::ReducedParams& params,
                                   const model::FockTruncation& trunc);

// d rho/dt. out must not alias rho.
void liouvillian_apply(const JointHamiltonian& h, double gamma, const Matrix& rho, Matrix& out);
Matrix liouvillian_apply(const JointHamiltonian& h, double gamma, const DensityMatrix& rho);

Trajectory evolve(const JointHamiltonian& h, double gamma, const DensityMatrix& rho0,
                  double t_end, const IntegratorConfig& cfg,
                  const std::vector<double>& sample_times);

// Tr[rho (N + |e><e|)], conserved by the coupling.
double excitation_number(const DensityMatrix& rho);

}  // namespace cpbox::lindblad
