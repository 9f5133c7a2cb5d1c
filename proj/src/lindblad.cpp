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

#include "lindblad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

namespace cpbox::lindblad {

namespace {

using Index = Eigen::Index;

constexpr cplx kI{0.0, 1.0};

void check_samples(const std::vector<double>& samples, double t_end) {
    double prev = 0.0;
    for (double t : samples) {
        if (!std::isfinite(t) || t < prev || t > t_end) {
            throw Error(ErrorKind::InvalidParameter,
                        "sample times must be ascending and inside [0, t_end]");
        }
        prev = t;
    }
}

void check_state(const Matrix& rho, double t) {
    if (!rho.allFinite()) {
        std::ostringstream os;
        os << "non-finite density matrix at t=" << t;
        throw Error(ErrorKind::Numerical, os.str());
    }
    const double min_eig = hermitian_eigenvalues(rho).minCoeff();
    if (min_eig < kPositivityFloor) {
        std::ostringstream os;
        os << "positivity violated at t=" << t << " (min eigenvalue " << min_eig
           << "); population is leaking past n_max, increase the truncation";
        throw Error(ErrorKind::Numerical, os.str());
    }
}

void renormalize(Matrix& rho) {
    const double tr = rho.trace().real();
    if (tr != 0.0) rho /= tr;
}

// Off-diagonal part of -i[H, rho]: the exchange terms only.
void coupling_apply(const JointHamiltonian& h, const Matrix& rho, Matrix& out) {
    const Index d = static_cast<Index>(h.dim());
    const auto& partner = h.partner();
    const auto& coupling = h.coupling();
    out.resize(d, d);
    for (Index j = 0; j < d; ++j) {
        const Index pj = partner[static_cast<std::size_t>(j)];
        const cplx cj = std::conj(coupling[static_cast<std::size_t>(j)]);
        for (Index i = 0; i < d; ++i) {
            const Index pi = partner[static_cast<std::size_t>(i)];
            cplx comm{0.0, 0.0};
            if (pi >= 0) comm += coupling[static_cast<std::size_t>(i)] * rho(pi, j);
            if (pj >= 0) comm -= rho(i, pj) * cj;
            out(i, j) = -kI * comm;
        }
    }
}

// Dormand-Prince 5(4) tableau.
struct DP {
    static constexpr double c[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
    static constexpr double a[7][6] = {
        {},
        {1.0 / 5.0},
        {3.0 / 40.0, 9.0 / 40.0},
        {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
        {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
        {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
        {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0},
    };
    // 5th-order weights equal the last row of a (FSAL); e = b - b*.
    static constexpr double e[7] = {71.0 / 57600.0,      0.0,          -71.0 / 16695.0,
                                    71.0 / 1920.0,       -17253.0 / 339200.0,
                                    22.0 / 525.0,        -1.0 / 40.0};
};

// Fixed-step RK4 on the full generator, and an integrating-factor (Lawson)
// Dormand-Prince stepper: the diagonal generator L_ij = -i(d_i - d_j) -
// gamma (n_i - n_j)^2 is applied exactly through exp(c h L) and only the
// exchange terms are integrated. Pure dephasing is then reproduced to
// rounding, including the stiff far off-diagonal coherences.
class Stepper {
public:
    Stepper(const JointHamiltonian& h, double gamma) : h_(h), gamma_(gamma) {
        const Index d = static_cast<Index>(h.dim());
        for (Matrix* m : {&tmp_, &next_, &err_}) m->resize(d, d);
        for (Matrix& k : k_) k.resize(d, d);
        factors_.reserve(16);
    }

    void rk4(Matrix& y, double h) {
        Matrix& k1 = k_[0];
        Matrix& k2 = k_[1];
        Matrix& k3 = k_[2];
        Matrix& k4 = k_[3];
        liouvillian_apply(h_, gamma_, y, k1);
        tmp_ = y + (0.5 * h) * k1;
        liouvillian_apply(h_, gamma_, tmp_, k2);
        tmp_ = y + (0.5 * h) * k2;
        liouvillian_apply(h_, gamma_, tmp_, k3);
        tmp_ = y + h * k3;
        liouvillian_apply(h_, gamma_, tmp_, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        fsal_valid_ = false;
    }

    // One trial step; returns the scaled error norm. On acceptance the caller
    // calls accept(y).
    double dopri(const Matrix& y, double h, double tol) {
        if (h != factors_h_) {
            factors_.clear();
            factors_h_ = h;
        }
        if (!fsal_valid_) {
            coupling_apply(h_, y, k_[0]);
            fsal_valid_ = true;
        }
        for (int s = 1; s < 7; ++s) {
            Matrix& u = (s == 6) ? next_ : tmp_;
            u = factor(DP::c[s]).cwiseProduct(y);
            for (int l = 0; l < s; ++l) {
                if (DP::a[s][l] == 0.0) continue;
                u += (h * DP::a[s][l]) * factor(DP::c[s] - DP::c[l]).cwiseProduct(k_[l]);
            }
            coupling_apply(h_, u, k_[s]);
        }
        err_.setZero();
        for (int l = 0; l < 7; ++l) {
            if (DP::e[l] == 0.0) continue;
            err_ += (h * DP::e[l]) * factor(1.0 - DP::c[l]).cwiseProduct(k_[l]);
        }

        double err = 0.0;
        for (Index j = 0; j < y.cols(); ++j) {
            for (Index i = 0; i < y.rows(); ++i) {
                const double scale =
                    tol * (1.0 + std::max(std::abs(y(i, j)), std::abs(next_(i, j))));
                err = std::max(err, std::abs(err_(i, j)) / scale);
            }
        }
        return err;
    }

    void accept(Matrix& y) {
        y.swap(next_);
        k_[0].swap(k_[6]);
        fsal_valid_ = true;
    }
    void invalidate() { fsal_valid_ = false; }

private:
    // exp(c h L) for the current trial step, cached per distinct c.
    const Matrix& factor(double c) {
        for (auto& [key, m] : factors_) {
            if (key == c) return m;
        }
        // exp(c h L)_ij = p_i conj(p_j) q_|n_i - n_j|, p_i = exp(-i d_i c h).
        const double ch = c * factors_h_;
        const Index d = static_cast<Index>(h_.dim());
        const auto& diag = h_.diagonal();
        Vector p(d);
        for (Index i = 0; i < d; ++i) {
            p(i) = std::polar(1.0, -diag[static_cast<std::size_t>(i)] * ch);
        }
        std::vector<double> q(static_cast<std::size_t>(d / 2));
        for (std::size_t k = 0; k < q.size(); ++k) {
            q[k] = std::exp(-gamma_ * ch * static_cast<double>(k * k));
        }
        Matrix m(d, d);
        for (Index j = 0; j < d; ++j) {
            const cplx pj = std::conj(p(j));
            for (Index i = 0; i < d; ++i) {
                const Index dn = i / 2 > j / 2 ? i / 2 - j / 2 : j / 2 - i / 2;
                m(i, j) = p(i) * pj * q[static_cast<std::size_t>(dn)];
            }
        }
        factors_.emplace_back(c, std::move(m));
        return factors_.back().second;
    }

    const JointHamiltonian& h_;
    double gamma_;
    std::array<Matrix, 7> k_;
    Matrix tmp_, next_, err_;
    std::vector<std::pair<double, Matrix>> factors_;
    double factors_h_ = -1.0;
    bool fsal_valid_ = false;
};

}  // namespace

JointHamiltonian::JointHamiltonian(Matrix m, model::ReducedParams params)
    : m_(std::move(m)), params_(params) {
    const Index d = m_.rows();
    if (d != m_.cols() || d < 2 || d % 2 != 0) {
        throw Error(ErrorKind::DimensionMismatch, "Hamiltonian must be square, even dimension");
    }
    diag_.assign(static_cast<std::size_t>(d), 0.0);
    partner_.assign(static_cast<std::size_t>(d), -1);
    coupling_.assign(static_cast<std::size_t>(d), cplx{0.0, 0.0});
    for (Index i = 0; i < d; ++i) {
        diag_[static_cast<std::size_t>(i)] = m_(i, i).real();
        for (Index j = 0; j < d; ++j) {
            if (i == j || m_(i, j) == cplx{0.0, 0.0}) continue;
            if (partner_[static_cast<std::size_t>(i)] != -1) {
                throw Error(ErrorKind::InvalidParameter,
                            "Hamiltonian row couples to more than one state");
            }
            partner_[static_cast<std::size_t>(i)] = j;
            coupling_[static_cast<std::size_t>(i)] = m_(i, j);
        }
    }
}

void IntegratorConfig::validate() const {
    if (method == Method::RK4Fixed && !(dt > 0.0 && std::isfinite(dt))) {
        throw Error(ErrorKind::InvalidParameter, "RK4 step must be > 0");
    }
    if (method == Method::RK45Adaptive && !(tolerance > 0.0 && std::isfinite(tolerance))) {
        throw Error(ErrorKind::InvalidParameter, "integrator tolerance must be > 0");
    }
}

JointHamiltonian build_hamiltonian(const model::ReducedParams& params,
                                   const model::FockTruncation& trunc) {
    params.validate();
    const std::size_t n_max = trunc.n_max;
    const Index d = static_cast<Index>(2 * (n_max + 1));
    Matrix h = Matrix::Zero(d, d);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const auto e = static_cast<Index>(basis_index(n, Qubit::Excited));
        const auto g = static_cast<Index>(basis_index(n, Qubit::Ground));
        h(e, e) = params.delta;
        h(g, g) = -params.delta;
        if (n < n_max) {
            const auto g_up = static_cast<Index>(basis_index(n + 1, Qubit::Ground));
            const double c = params.g * std::sqrt(static_cast<double>(n + 1));
            h(e, g_up) = -kI * c;
            h(g_up, e) = kI * c;
        }
    }
    return JointHamiltonian(std::move(h), params);
}

void liouvillian_apply(const JointHamiltonian& h, double gamma, const Matrix& rho, Matrix& out) {
    const Index d = static_cast<Index>(h.dim());
    if (rho.rows() != d || rho.cols() != d) {
        throw Error(ErrorKind::DimensionMismatch, "density matrix does not match Hamiltonian");
    }
    out.resize(d, d);
    const auto& diag = h.diagonal();
    const auto& partner = h.partner();
    const auto& coupling = h.coupling();

    for (Index j = 0; j < d; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        const Index pj = partner[uj];
        const cplx cj = std::conj(coupling[uj]);  // H(pj, j)
        const double nj = static_cast<double>(j / 2);
        for (Index i = 0; i < d; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const Index pi = partner[ui];
            // [H, rho]_ij = (d_i - d_j) rho_ij + H(i,pi) rho(pi,j) - rho(i,pj) H(pj,j)
            cplx comm = (diag[ui] - diag[uj]) * rho(i, j);
            if (pi >= 0) comm += coupling[ui] * rho(pi, j);
            if (pj >= 0) comm -= rho(i, pj) * cj;
            const double dn = static_cast<double>(i / 2) - nj;
            out(i, j) = -kI * comm - (gamma * dn * dn) * rho(i, j);
        }
    }
}

Matrix liouvillian_apply(const JointHamiltonian& h, double gamma, const DensityMatrix& rho) {
    Matrix out;
    liouvillian_apply(h, gamma, rho.matrix(), out);
    return out;
}

Trajectory evolve(const JointHamiltonian& h, double gamma, const DensityMatrix& rho0,
                  double t_end, const IntegratorConfig& cfg,
                  const std::vector<double>& sample_times) {
    cfg.validate();
    if (!std::isfinite(gamma) || gamma < 0.0) {
        throw Error(ErrorKind::InvalidParameter, "gamma must be >= 0");
    }
    if (!std::isfinite(t_end) || t_end < 0.0) {
        throw Error(ErrorKind::InvalidParameter, "t_end must be >= 0");
    }
    if (rho0.dim() != h.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "initial state does not match Hamiltonian");
    }
    check_samples(sample_times, t_end);

    Trajectory traj;
    traj.states.reserve(sample_times.size());
    Matrix y = rho0.matrix();
    Stepper stepper(h, gamma);
    double t = 0.0;
    double h_try = std::min(0.01, std::max(t_end, 1e-3));
    std::size_t since_renorm = 0;

    auto after_step = [&] {
        if (cfg.renorm_interval > 0 && ++since_renorm >= cfg.renorm_interval) {
            renormalize(y);
            since_renorm = 0;
            stepper.invalidate();
        }
    };

    for (double target : sample_times) {
        while (t < target) {
            const double remaining = target - t;
            if (remaining <= 1e-14 * std::max(1.0, target)) {
                t = target;
                break;
            }
            if (cfg.method == Method::RK4Fixed) {
                const double step = std::min(cfg.dt, remaining);
                stepper.rk4(y, step);
                t = (step == remaining) ? target : t + step;
                ++traj.accepted_steps;
                after_step();
                continue;
            }

            const bool clipped = h_try >= remaining;
            const double step = clipped ? remaining : h_try;
            const double err = stepper.dopri(y, step, cfg.tolerance);
            const double factor =
                err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                stepper.accept(y);
                t = clipped ? target : t + step;
                ++traj.accepted_steps;
                // A step shortened to land on a sample says nothing about the
                // natural step size.
                if (!clipped || factor < 1.0) h_try = step * factor;
                after_step();
            } else {
                ++traj.rejected_steps;
                h_try = step * factor;
                if (h_try < 1e-12 * std::max(1.0, t)) {
                    std::ostringstream os;
                    os << "step size underflow at t=" << t;
                    throw Error(ErrorKind::Numerical, os.str());
                }
            }
        }
        check_state(y, t);
        traj.states.emplace_back(y);
    }
    return traj;
}

double excitation_number(const DensityMatrix& rho) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        const double n = static_cast<double>(photon_of(i)) +
                         (qubit_of(i) == Qubit::Excited ? 1.0 : 0.0);
        sum += n * rho(i, i).real();
    }
    return sum;
}

}  // namespace cpbox::lindblad
