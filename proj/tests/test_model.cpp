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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "model.hpp"
#include "oracles.hpp"

using namespace cpbox;
using namespace cpbox::model;

namespace {

DeviceParams typical_device() {
    DeviceParams d;
    d.c_j = 1e-15;
    d.c_g = 1e-17;
    d.c_f = 1e-11;
    d.omega = 1e10;
    d.e_j = kHbar * d.omega;
    return d;
}

bool has_code(const std::vector<RegimeWarning>& w, const std::string& code) {
    return std::any_of(w.begin(), w.end(), [&](const auto& x) { return x.code == code; });
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("reduced coupling limits") {
    DeviceParams d = typical_device();
    d.c_g = 1e-24;
    CHECK(reduce_params(d, 0.0).g == doctest::Approx(1.0 / (2.0 * std::numbers::sqrt2)).epsilon(1e-8));
    CHECK(reduce_params(d, 0.0).g == doctest::Approx(0.35355).epsilon(1e-5));

    d.c_g = d.c_j;
    CHECK(reduce_params(d, 0.0).g == doctest::Approx(0.17678).epsilon(1e-4));
    CHECK(reduce_params(d, 0.0).g == doctest::Approx(1.0 / (4.0 * std::numbers::sqrt2)).epsilon(1e-14));
}

TEST_CASE("resonance gives zero detuning") {
    const ReducedParams p = reduce_params(typical_device(), 0.0);
    CHECK(p.delta == 0.0);
    CHECK(p.lambda_scale == doctest::Approx(oracle::lambda_si(1e-11, 1e10)).epsilon(1e-14));
}

TEST_CASE("damping and detuning are scaled by lambda") {
    DeviceParams d = typical_device();
    d.e_j = 1.5 * kHbar * d.omega;
    const double lam = oracle::lambda_si(d.c_f, d.omega);
    const ReducedParams p = reduce_params(d, 0.1 * lam);
    CHECK(p.gamma == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(p.delta == doctest::Approx(0.25 * d.omega / lam).epsilon(1e-12));
}

TEST_CASE("reduced Rabi frequency matches the device-unit formula") {
    const double cjs[] = {1e-15, 2e-15};
    const double cgs[] = {1e-17, 1e-15, 3e-15};
    const double ejs[] = {1.0, 0.7, 1.9};
    for (double cj : cjs) {
        for (double cg : cgs) {
            for (double ej : ejs) {
                DeviceParams d = typical_device();
                d.c_j = cj;
                d.c_g = cg;
                d.e_j = ej * kHbar * d.omega;
                const ReducedParams p = reduce_params(d, 0.0);
                for (std::size_t n : {0u, 1u, 5u, 30u}) {
                    const double expect =
                        oracle::rabi_si(cj, cg, d.c_f, d.omega, d.e_j, n) / p.lambda_scale;
                    CHECK(rabi_frequency(p, n) == doctest::Approx(expect).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("rabi frequency examples") {
    ReducedParams p;
    p.g = 1.0;
    CHECK(rabi_frequency(p, 0) == 1.0);
    CHECK(rabi_frequency(p, 3) == 2.0);
    p.g = 0.3;
    p.delta = 0.9;
    CHECK(rabi_frequency(p, 0) == doctest::Approx(0.3 * std::sqrt(10.0)).epsilon(1e-15));
}

TEST_CASE("parameter validation") {
    DeviceParams d = typical_device();
    d.c_j = 0.0;
    CHECK_THROWS_AS(reduce_params(d, 0.0), Error);
    CHECK_THROWS_AS(reduce_params(typical_device(), -1.0), Error);
    ReducedParams p;
    p.gamma = -0.1;
    CHECK_THROWS_AS(p.validate(), Error);
    p.gamma = 0.0;
    p.g = std::nan("");
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("regime checks") {
    DeviceParams d = typical_device();
    CHECK(validate_regime(d).empty());

    DeviceParams strong = d;
    strong.e_j = 100.0 * charging_energy(d);
    CHECK(has_code(validate_regime(strong), "josephson-charging"));

    DeviceParams hot = d;
    hot.thermal_energy = d.e_j;
    CHECK(has_code(validate_regime(hot), "thermal"));

    DeviceParams cold = d;
    cold.thermal_energy = 1e-3 * d.e_j;
    CHECK(!has_code(validate_regime(cold), "thermal"));
}

TEST_CASE("poisson tail matches direct summation") {
    for (double nbar : {0.5, 4.0, 10.0, 25.0}) {
        for (std::size_t n : {5u, 15u, 30u, 45u}) {
            const double expect = oracle::poisson_tail(nbar, n);
            CHECK(poisson_tail(nbar, n) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
    CHECK(poisson_tail(0.0, 3) == 0.0);
}

TEST_CASE("truncation choice") {
    CHECK(choose_truncation(0.0, 1e-10).n_max == 4);

    const FockTruncation t = choose_truncation(std::sqrt(10.0), 1e-10);
    CHECK(t.n_max >= 29);
    CHECK(oracle::poisson_tail(10.0, t.n_max) < 1e-10);
    CHECK(choose_truncation(std::sqrt(10.0), 1e-3).n_max < t.n_max);

    CHECK_THROWS_AS(choose_truncation(-1.0, 1e-10), Error);
    CHECK_THROWS_AS(choose_truncation(1.0, 0.0), Error);
}

TEST_CASE("truncation is monotone in the tolerance") {
    std::size_t prev = 0;
    for (double tol : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
        const std::size_t n = choose_truncation(std::sqrt(10.0), tol).n_max;
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("coherent amplitudes") {
    const CoherentAmplitudes vac = coherent_amplitudes(0.0, 0.0, FockTruncation{6, 1e-10});
    CHECK(vac.amplitudes[0] == cplx(1.0, 0.0));
    for (std::size_t n = 1; n <= 6; ++n) CHECK(vac.amplitudes[n] == cplx(0.0, 0.0));

    const CoherentAmplitudes c = coherent_amplitudes(std::sqrt(10.0), 0.0, FockTruncation{40, 1e-10});
    CHECK(std::norm(c.amplitudes[10]) == doctest::Approx(0.12511).epsilon(1e-4));
    for (std::size_t n = 0; n <= 40; ++n) {
        CHECK(std::norm(c.amplitudes[n]) ==
              doctest::Approx(oracle::poisson_pmf(10.0, n)).epsilon(1e-12));
    }
    CHECK(c.tail_mass < 1e-10);

    const CoherentAmplitudes ph = coherent_amplitudes(2.0, 0.7, FockTruncation{30, 1e-10});
    for (std::size_t n = 0; n <= 30; ++n) {
        if (n == 0) continue;
        CHECK(std::arg(ph.amplitudes[n] / std::abs(ph.amplitudes[n])) ==
              doctest::Approx(std::remainder(0.7 * static_cast<double>(n), 2 * std::numbers::pi))
                  .epsilon(1e-10));
    }
}

TEST_CASE("truncation too small is an error") {
    CHECK_THROWS_AS(coherent_amplitudes(std::sqrt(10.0), 0.0, FockTruncation{15, 1e-10}), Error);
    try {
        coherent_amplitudes(std::sqrt(10.0), 0.0, FockTruncation{15, 1e-10});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TruncationTooSmall);
    }
}

TEST_CASE("initial state") {
    const auto field = coherent_amplitudes(std::sqrt(3.0), 0.2, choose_truncation(std::sqrt(3.0), 1e-10));
    CHECK_THROWS_AS(make_initial_state(-0.1, field), Error);
    CHECK_THROWS_AS(make_initial_state(std::numbers::pi / 2, field), Error);

    const InitialState s = make_initial_state(std::numbers::pi / 6, field);
    CHECK(s.excited_weight() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(s.ground_weight() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s.field_vector().norm() == doctest::Approx(1.0).epsilon(1e-15));

    const DensityMatrix rho = initial_density(s);
    CHECK(rho.trace_error() < 1e-14);
    CHECK(rho.hermiticity_error() < 1e-15);
    CHECK(rho.min_eigenvalue() > -1e-14);

    // Product structure: rho = rho_J (x) |alpha><alpha|.
    const oracle::Vec b = s.field_vector();
    oracle::Mat qubit = oracle::Mat::Zero(2, 2);
    qubit(0, 0) = 0.75;
    qubit(1, 1) = 0.25;
    const oracle::Mat expect = Eigen::kroneckerProduct(oracle::Mat(b * b.adjoint()), qubit).eval();
    CHECK(oracle::max_abs(rho.matrix() - expect) < 1e-15);
}

TEST_CASE("density matrix shape is validated") {
    CHECK_THROWS_AS(DensityMatrix(Matrix::Zero(3, 3)), Error);
    CHECK_THROWS_AS(DensityMatrix(Matrix::Zero(4, 2)), Error);
    CHECK(DensityMatrix::zero(3).dim() == 8);
    CHECK(DensityMatrix::zero(3).n_max() == 3);
}

}  // TEST_SUITE
