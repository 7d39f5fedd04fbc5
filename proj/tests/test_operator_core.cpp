// Copyright 2026 The collisim Authors
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

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "collisim/operator_core.hpp"
#include "oracles.hpp"

using namespace collisim;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

TensorSpace two_qubits() { return TensorSpace({{"A", 2}, {"B", 2}}); }

}  // namespace

TEST_CASE("kron") {
    SUBCASE("identity") {
        CHECK(max_abs(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) -
                      ComplexMatrix::Identity(4, 4)) == 0.0);
    }
    SUBCASE("basis bookkeeping") {
        const ComplexMatrix m = kron(transition(1, 1, 2), transition(0, 0, 2));
        ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
        expected(2, 2) = 1.0;
        CHECK(max_abs(m - expected) == 0.0);
    }
    SUBCASE("sigma_x (x) sigma_z") {
        ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
        expected(0, 2) = 1.0;
        expected(1, 3) = -1.0;
        expected(2, 0) = 1.0;
        expected(3, 1) = -1.0;
        CHECK(max_abs(kron(pauli_x(), pauli_z()) - expected) == 0.0);
    }
    SUBCASE("trace factorizes") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const ComplexMatrix a = testing::random_matrix(rng, 2 + trial % 3);
            const ComplexMatrix b = testing::random_matrix(rng, 3);
            CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) <= 1e-12 * (1 + std::abs(a.trace() * b.trace())));
        }
    }
}

TEST_CASE("partial_trace") {
    std::mt19937_64 rng(11);

    SUBCASE("product state keeps its factor") {
        const ComplexMatrix ra = testing::random_density(rng, 2);
        const ComplexMatrix rb = testing::random_density(rng, 2);
        const DensityOperator rho(two_qubits(), kron(ra, rb));
        const DensityOperator reduced = partial_trace(rho, {"A"});
        CHECK(reduced.space() == TensorSpace({{"A", 2}}));
        CHECK(max_abs(reduced.matrix() - ra) <= 1e-14);
        CHECK(max_abs(partial_trace(rho, {"B"}).matrix() - rb) <= 1e-14);
    }
    SUBCASE("Bell state reduces to I/2") {
        ComplexVector bell = ComplexVector::Zero(4);
        bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
        const DensityOperator rho(two_qubits(), bell * bell.adjoint());
        const ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
        CHECK(max_abs(partial_trace(rho, {"A"}).matrix() - half) <= 1e-15);
        CHECK(max_abs(partial_trace(rho, {"B"}).matrix() - half) <= 1e-15);
    }
    SUBCASE("keeping every label is the identity") {
        const DensityOperator rho(two_qubits(), testing::random_density(rng, 4));
        CHECK(max_abs(partial_trace(rho, {"A", "B"}).matrix() - rho.matrix()) == 0.0);
    }
    SUBCASE("matches index-loop oracle on A1 (x) A2 (x) S") {
        const TensorSpace space({{"A1", 2}, {"A2", 2}, {"S", 3}});
        for (int trial = 0; trial < 10; ++trial) {
            const ComplexMatrix m = testing::random_density(rng, 12);
            CHECK(max_abs(partial_trace(m, space, {"S"}) - testing::trace_first_two(m, 2, 2, 3)) <= 1e-14);
        }
    }
    SUBCASE("tracing in stages composes") {
        const TensorSpace space({{"A1", 2}, {"A2", 2}, {"S", 3}});
        for (int trial = 0; trial < 10; ++trial) {
            const DensityOperator rho(space, testing::random_density(rng, 12));
            const DensityOperator staged = partial_trace(partial_trace(rho, {"A2", "S"}), {"S"});
            const DensityOperator direct = partial_trace(rho, {"S"});
            CHECK(max_abs(staged.matrix() - direct.matrix()) <= 1e-12);
            CHECK(std::abs(direct.matrix().trace() - Complex(1.0)) <= 1e-12);
        }
    }
    SUBCASE("unknown label") {
        const DensityOperator rho(two_qubits(), testing::random_density(rng, 4));
        try {
            partial_trace(rho, {"C"});
            FAIL("expected labeling error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::labeling);
        }
        CHECK_THROWS_AS(partial_trace(rho, {}), Error);
    }
}

TEST_CASE("expm_hermitian_propagator") {
    SUBCASE("zero generator") {
        CHECK(max_abs(expm_hermitian_propagator(ComplexMatrix::Zero(3, 3), 2.5) - ComplexMatrix::Identity(3, 3)) <= 1e-15);
    }
    SUBCASE("Pauli rotation") {
        const double t = std::numbers::pi / 2;
        const ComplexMatrix expected = std::cos(t) * ComplexMatrix::Identity(2, 2) - Complex(0, std::sin(t)) * pauli_x();
        CHECK(max_abs(expm_hermitian_propagator(pauli_x(), t) - expected) <= 1e-15);
        CHECK(max_abs(expm_hermitian_propagator(pauli_x(), t) - Complex(0, -1) * pauli_x()) <= 1e-15);
    }
    SUBCASE("unitary and equal to the Taylor oracle") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> time(-50.0, 50.0);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 2 + trial % 11;
            const ComplexMatrix h = testing::random_hermitian(rng, n);
            const double t = time(rng);
            const ComplexMatrix u = expm_hermitian_propagator(h, t);
            CHECK(is_unitary(u, 1e-10));
            const ComplexMatrix reference = testing::taylor_expm(Complex(0, -t) * h);
            CHECK(max_abs(u - reference) <= 1e-8);
        }
    }
    SUBCASE("non-Hermitian input") {
        ComplexMatrix m = pauli_x();
        m(0, 1) = 2.0;
        try {
            expm_hermitian_propagator(m, 1.0);
            FAIL("expected precondition error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::precondition);
        }
    }
}

TEST_CASE("thermal_qubit") {
    SUBCASE("infinite temperature") {
        const auto rho = thermal_qubit(0.0);
        CHECK(rho.matrix()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("ground-state limit") {
        const auto rho = thermal_qubit(50.0);
        CHECK(std::abs(rho.matrix()(0, 0).real() - 1.0) <= 1e-15);
        CHECK(std::abs(rho.matrix()(1, 1).real()) <= 1e-15);
    }
    SUBCASE("x = 1") {
        // 1 / (e + 1)
        CHECK(std::abs(thermal_qubit(1.0).matrix()(1, 1).real() - 0.2689414213699951) <= 1e-15);
    }
    SUBCASE("inverted ancilla") {
        const auto rho = thermal_qubit(-50.0);
        CHECK(std::abs(rho.matrix()(1, 1).real() - 1.0) <= 1e-15);
    }
    SUBCASE("Boltzmann ratio") {
        for (double x : {-3.0, -0.7, 1e-4, 0.5, 2.0, 6.0}) {
            const auto m = thermal_qubit(x).matrix();
            CHECK(std::abs(m(1, 1).real() / m(0, 0).real() - std::exp(-x)) <= 1e-12 * std::exp(-x));
        }
    }
    SUBCASE("non-finite exponent") {
        CHECK_THROWS_AS(thermal_qubit(std::nan("")), Error);
        CHECK_THROWS_AS(thermal_qubit(INFINITY), Error);
    }
}

TEST_CASE("commutator and anticommutator") {
    CHECK(max_abs(commutator(pauli_x(), pauli_y()) - Complex(0, 2) * pauli_z()) <= 1e-15);
    std::mt19937_64 rng(5);
    const ComplexMatrix a = testing::random_matrix(rng, 3);
    CHECK(max_abs(anticommutator(a, a) - 2.0 * a * a) <= 1e-13);
    CHECK(max_abs(commutator(ComplexMatrix::Identity(3, 3), a)) == 0.0);
    CHECK_THROWS_AS(commutator(a, pauli_x()), Error);
}

TEST_CASE("density operator invariants") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 0.6;
    m(1, 1) = 0.4;
    CHECK_NOTHROW(DensityOperator(TensorSpace({{"S", 2}}), m));

    ComplexMatrix bad_trace = m;
    bad_trace(0, 0) = 0.7;
    CHECK_THROWS_AS(DensityOperator(TensorSpace({{"S", 2}}), bad_trace), NumericError);

    ComplexMatrix negative = m;
    negative(0, 0) = 1.1;
    negative(1, 1) = -0.1;
    CHECK_THROWS_AS(DensityOperator(TensorSpace({{"S", 2}}), negative), NumericError);

    ComplexMatrix skew = m;
    skew(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityOperator(TensorSpace({{"S", 2}}), skew), NumericError);

    CHECK_THROWS_AS(DensityOperator(TensorSpace({{"S", 3}}), m), Error);
    CHECK_THROWS_AS(TensorSpace({{"A", 2}, {"A", 2}}), Error);
}
