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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>

namespace cpbox::metrics {

namespace {

using Index = Eigen::Index;

constexpr double kFieldGapFloor = 1e-12;

Matrix4 sigma_yy() {
    Matrix4 yy = Matrix4::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    return yy;
}

// The square roots of the eigenvalues of rho (sy sy) rho^* (sy sy) are the
// singular values of A^dag (sy sy) A^*, rho = A A^dag. The factored form keeps
// zero eigenvalues at rounding level instead of sqrt(rounding).
double concurrence_unchecked(const Matrix4& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix4> es(0.5 * (rho + rho.adjoint()));
    Matrix4 a = es.eigenvectors();
    for (int i = 0; i < 4; ++i) a.col(i) *= std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    const Matrix4 tau = a.adjoint() * sigma_yy() * a.conjugate();
    const Eigen::Vector4d s = Eigen::JacobiSVD<Matrix4>(tau).singularValues();  // descending
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

void require_even(const DensityMatrix& rho) {
    if (rho.dim() % 2 != 0 || rho.dim() < 2) {
        throw Error(ErrorKind::DimensionMismatch, "joint dimension must be even");
    }
}

}  // namespace

QubitState partial_trace_field(const DensityMatrix& rho) {
    require_even(rho);
    const Matrix& m = rho.matrix();
    Matrix2 out = Matrix2::Zero();
    for (Index n = 0; n < m.rows() / 2; ++n) {
        for (Index q = 0; q < 2; ++q) {
            for (Index p = 0; p < 2; ++p) out(q, p) += m(2 * n + q, 2 * n + p);
        }
    }
    return QubitState(out);
}

Matrix partial_trace_qubit(const DensityMatrix& rho) {
    require_even(rho);
    const Matrix& m = rho.matrix();
    const Index nf = m.rows() / 2;
    Matrix out(nf, nf);
    for (Index k = 0; k < nf; ++k) {
        for (Index n = 0; n < nf; ++n) out(n, k) = m(2 * n, 2 * k) + m(2 * n + 1, 2 * k + 1);
    }
    return out;
}

double purity(const QubitState& q) { return (q.matrix() * q.matrix()).trace().real(); }

double linear_entropy(const QubitState& q) { return 1.0 - purity(q); }

double idempotency_defect(const QubitState& q) { return 2.0 * linear_entropy(q); }

double atomic_inversion(const QubitState& q) { return q.excited() - q.ground(); }

double concurrence_two_qubit(const Matrix4& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8) {
        throw Error(ErrorKind::InvalidParameter, "two-qubit state is not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-8) {
        throw Error(ErrorKind::InvalidParameter, "two-qubit state does not have unit trace");
    }
    return concurrence_unchecked(rho);
}

ConcurrenceEstimate concurrence_effective(const DensityMatrix& rho) {
    require_even(rho);
    const Matrix sym = 0.5 * (rho.matrix() + rho.matrix().adjoint());
    const Matrix field = partial_trace_qubit(DensityMatrix(sym));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (field + field.adjoint()));
    const Index nf = field.rows();

    ConcurrenceEstimate out;
    if (nf > 2) {
        const auto& ev = es.eigenvalues();  // ascending
        out.reliable = (ev(nf - 2) - ev(nf - 3)) >= kFieldGapFloor;
    }

    // Basis of the projected field: the top two eigenvectors.
    Matrix v(nf, 2);
    v.col(0) = es.eigenvectors().col(nf - 1);
    v.col(1) = es.eigenvectors().col(nf - 2);

    // block_{(q,a),(p,b)} = <q, v_a| rho |p, v_b>
    Matrix4 block;
    for (Index q = 0; q < 2; ++q) {
        for (Index p = 0; p < 2; ++p) {
            const Matrix sub = sym(Eigen::seqN(q, nf, 2), Eigen::seqN(p, nf, 2));
            block.block<2, 2>(2 * q, 2 * p) = v.adjoint() * sub * v;
        }
    }
    const double tr = block.trace().real();
    if (tr <= 0.0) {
        out.value = 0.0;
        out.reliable = false;
        return out;
    }
    block /= tr;
    out.value = concurrence_unchecked(block);
    return out;
}

double negativity(const DensityMatrix& rho) {
    require_even(rho);
    const Matrix& m = rho.matrix();
    const Index d = m.rows();
    Matrix pt(d, d);
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) {
            // Swap the qubit labels, keep the photon labels.
            pt(i, j) = m(2 * (i / 2) + (j % 2), 2 * (j / 2) + (i % 2));
        }
    }
    const Eigen::VectorXd ev = hermitian_eigenvalues(pt);
    double neg = 0.0;
    for (Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < 0.0) neg -= ev(i);
    }
    return neg;
}

double mean_photons(const DensityMatrix& rho) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        sum += static_cast<double>(photon_of(i)) * rho(i, i).real();
    }
    return sum;
}

MetricRow metric_row(const DensityMatrix& rho, double t, std::optional<double> trace_error) {
    const QubitState q = partial_trace_field(rho);
    MetricRow row;
    row.t = t;
    row.inversion = atomic_inversion(q);
    row.purity = purity(q);
    row.linear_entropy_raw = 1.0 - row.purity;
    row.idempotency_defect = 2.0 * row.linear_entropy_raw;
    const ConcurrenceEstimate c = concurrence_effective(rho);
    row.concurrence_2q = c.value;
    row.concurrence_reliable = c.reliable;
    row.negativity = negativity(rho);
    row.mean_photons = mean_photons(rho);
    row.trace_error = trace_error.value_or(rho.trace_error());
    return row;
}

}  // namespace cpbox::metrics
