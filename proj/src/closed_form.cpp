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

#include "closed_form.hpp"

#include <cmath>

#include "metrics.hpp"

namespace cpbox::closed_form {

namespace {

using Index = Eigen::Index;

constexpr cplx kI{0.0, 1.0};

Index idx(std::size_t n, Qubit q) { return static_cast<Index>(basis_index(n, q)); }

// sin(mu t) / mu, continuous at mu = 0.
double sin_over(double mu, double t) {
    return mu == 0.0 ? t : std::sin(mu * t) / mu;
}

void check_basis(const model::InitialState& init) {
    if (init.field.amplitudes.size() < 2) {
        throw Error(ErrorKind::DimensionMismatch, "field amplitudes need n_max >= 1");
    }
}

// Bare-basis dephasing kernel exp(-gamma t (n_i - n_j)^2) applied elementwise.
void apply_dephasing(Matrix& m, double gamma, double t) {
    if (gamma == 0.0 || t == 0.0) return;
    const Index d = m.rows();
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) {
            const double dn = static_cast<double>(i / 2) - static_cast<double>(j / 2);
            m(i, j) *= std::exp(-gamma * t * dn * dn);
        }
    }
}

Matrix printed_component(const model::ReducedParams& p, const Vector& b, Qubit start, double t,
                         const Mode& mode, double beta) {
    const std::size_t n_max = static_cast<std::size_t>(b.size()) - 1;
    const Index d = static_cast<Index>(2 * (n_max + 1));
    Matrix m = Matrix::Zero(d, d);

    const double beta12 = (mode.beta12 == Beta12::DoublePhase) ? 2.0 * beta : 0.0;
    const cplx ph = std::polar(1.0, -beta12);
    const double global = std::exp(-0.5 * p.gamma * t);

    // Frequency of the dressed pair containing b-index k.
    auto nu = [&](std::size_t k) -> double {
        if (start == Qubit::Excited) return model::rabi_frequency(p, k);
        return k == 0 ? 0.0 : model::rabi_frequency(p, k - 1);
    };

    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t k = 0; k <= n_max; ++k) {
            const double dn = static_cast<double>(n) - static_cast<double>(k);
            const cplx coef = b(static_cast<Index>(n)) * std::conj(b(static_cast<Index>(k))) *
                              global * std::exp(-p.gamma * t * dn * dn);
            const double a = (nu(n) - nu(k)) * t;
            const double a2 = (nu(n) + nu(k)) * t;
            const cplx same = coef * ph * (std::cos(a) + std::cos(a2));
            const cplx other = coef * ph * (std::cos(a) - std::cos(a2));
            const cplx cross_lo = coef * (-0.5 * kI) * ph * std::sin(a);
            const cplx cross_hi = coef * (0.5 * kI) * std::conj(ph) * std::sin(a);

            if (start == Qubit::Excited) {
                // |n,e><k,e|, |n,e><k+1,g|, |n+1,g><k,e|, |n+1,g><k+1,g|
                m(idx(n, Qubit::Excited), idx(k, Qubit::Excited)) += same;
                if (k < n_max) m(idx(n, Qubit::Excited), idx(k + 1, Qubit::Ground)) += cross_lo;
                if (n < n_max) m(idx(n + 1, Qubit::Ground), idx(k, Qubit::Excited)) += cross_hi;
                if (n < n_max && k < n_max) {
                    m(idx(n + 1, Qubit::Ground), idx(k + 1, Qubit::Ground)) += other;
                }
            } else {
                // Mirror image: |n,g> pairs with |n-1,e>.
                m(idx(n, Qubit::Ground), idx(k, Qubit::Ground)) += same;
                if (k > 0) m(idx(n, Qubit::Ground), idx(k - 1, Qubit::Excited)) += cross_lo;
                if (n > 0) m(idx(n - 1, Qubit::Excited), idx(k, Qubit::Ground)) += cross_hi;
                if (n > 0 && k > 0) {
                    m(idx(n - 1, Qubit::Excited), idx(k - 1, Qubit::Excited)) += other;
                }
            }
        }
    }
    return m;
}

}  // namespace

Vector jaynes_cummings_state(const model::ReducedParams& p, const Vector& b, Qubit start,
                             double t) {
    const std::size_t n_max = static_cast<std::size_t>(b.size()) - 1;
    Vector psi = Vector::Zero(static_cast<Index>(2 * (n_max + 1)));

    // Block n spans {|n,e>, |n+1,g>} with H = delta sz + G sy, G = g sqrt(n+1).
    for (std::size_t k = 0; k <= n_max; ++k) {
        const cplx bk = b(static_cast<Index>(k));
        if (start == Qubit::Excited) {
            if (k == n_max) {
                psi(idx(k, Qubit::Excited)) += bk * std::polar(1.0, -p.delta * t);
                continue;
            }
            const double mu = model::rabi_frequency(p, k);
            const double coupling = p.g * std::sqrt(static_cast<double>(k + 1));
            const double so = sin_over(mu, t);
            psi(idx(k, Qubit::Excited)) += bk * cplx(std::cos(mu * t), -p.delta * so);
            psi(idx(k + 1, Qubit::Ground)) += bk * (coupling * so);
        } else {
            if (k == 0) {
                psi(idx(0, Qubit::Ground)) += bk * std::polar(1.0, p.delta * t);
                continue;
            }
            const std::size_t block = k - 1;
            const double mu = model::rabi_frequency(p, block);
            const double coupling = p.g * std::sqrt(static_cast<double>(block + 1));
            const double so = sin_over(mu, t);
            psi(idx(block, Qubit::Excited)) += bk * (-coupling * so);
            psi(idx(k, Qubit::Ground)) += bk * cplx(std::cos(mu * t), p.delta * so);
        }
    }
    return psi;
}

JointState joint_state(const model::ReducedParams& params, const model::InitialState& init,
                       double t, Mode mode, bool normalize) {
    params.validate();
    check_basis(init);
    if (!std::isfinite(t) || t < 0.0) {
        throw Error(ErrorKind::InvalidParameter, "time must be finite and >= 0");
    }

    const Vector b = init.field_vector();
    const double we = init.excited_weight();
    const double wg = init.ground_weight();
    const Index d = static_cast<Index>(2 * (init.n_max() + 1));
    Matrix m = Matrix::Zero(d, d);

    if (mode.variant == Variant::Corrected) {
        if (we > 0.0) {
            const Vector psi = jaynes_cummings_state(params, b, Qubit::Excited, t);
            m.noalias() += we * psi * psi.adjoint();
        }
        if (wg > 0.0) {
            const Vector psi = jaynes_cummings_state(params, b, Qubit::Ground, t);
            m.noalias() += wg * psi * psi.adjoint();
        }
        apply_dephasing(m, params.gamma, t);
    } else {
        const double beta = init.field.beta_phase;
        if (we > 0.0) m += we * printed_component(params, b, Qubit::Excited, t, mode, beta);
        if (wg > 0.0) m += wg * printed_component(params, b, Qubit::Ground, t, mode, beta);
    }

    JointState out;
    out.trace_before_normalization = m.trace().real();
    out.trace_deficit = 1.0 - out.trace_before_normalization;
    out.hermiticity_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (mode.variant == Variant::Corrected && out.hermiticity_defect > 1e-10) {
        throw Error(ErrorKind::Numerical, "corrected closed form lost Hermiticity");
    }
    if (normalize && std::abs(out.trace_deficit) > 1e-12 &&
        out.trace_before_normalization != 0.0) {
        m /= out.trace_before_normalization;
    }
    out.rho = DensityMatrix(std::move(m));
    return out;
}

std::vector<std::pair<double, double>> inversion_series(const model::ReducedParams& params,
                                                        const model::InitialState& init,
                                                        const std::vector<double>& times,
                                                        Mode mode) {
    std::vector<std::pair<double, double>> out;
    out.reserve(times.size());
    double prev = 0.0;
    for (double t : times) {
        if (t < prev) {
            throw Error(ErrorKind::InvalidParameter, "times must be nonnegative and ascending");
        }
        prev = t;
        const JointState js = joint_state(params, init, t, mode, true);
        out.emplace_back(t, metrics::atomic_inversion(metrics::partial_trace_field(js.rho)));
    }
    return out;
}

}  // namespace cpbox::closed_form
