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

#include "types.hpp"

#include <cmath>

namespace cpbox {

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 2 || m_.rows() % 2 != 0) {
        throw Error(ErrorKind::DimensionMismatch,
                    "density matrix must be square with even dimension >= 2");
    }
}

DensityMatrix DensityMatrix::zero(std::size_t n_max) {
    const auto d = static_cast<Eigen::Index>(2 * (n_max + 1));
    return DensityMatrix(Matrix::Zero(d, d));
}

double DensityMatrix::trace_error() const { return std::abs(trace() - 1.0); }

double DensityMatrix::hermiticity_error() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    return hermitian_eigenvalues(m_).minCoeff();
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    const Matrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace cpbox
