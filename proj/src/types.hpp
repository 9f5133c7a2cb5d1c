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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cpbox {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class ErrorKind {
    InvalidParameter,
    TruncationTooSmall,
    DimensionMismatch,
    Numerical,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

enum class Qubit : int { Excited = 0, Ground = 1 };

// Joint basis {|n,e>, |n,g>} with index(n, q) = 2n + q.
constexpr std::size_t basis_index(std::size_t n, Qubit q) {
    return 2 * n + static_cast<std::size_t>(q);
}
constexpr std::size_t photon_of(std::size_t index) { return index / 2; }
constexpr Qubit qubit_of(std::size_t index) {
    return (index % 2 == 0) ? Qubit::Excited : Qubit::Ground;
}

// Dense joint density matrix over the truncated qubit (x) Fock basis.
class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(Matrix m);

    static DensityMatrix zero(std::size_t n_max);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    std::size_t n_max() const { return dim() / 2 - 1; }

    const Matrix& matrix() const { return m_; }
    Matrix& matrix() { return m_; }

    cplx operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    double trace() const { return m_.trace().real(); }
    double trace_error() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;

private:
    Matrix m_;
};

// Ascending eigenvalues of the Hermitian part (m + m^dagger)/2.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

}  // namespace cpbox
