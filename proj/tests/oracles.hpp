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

#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <cmath>
#include <random>

#include "collisim/operator_core.hpp"

namespace collisim::testing {

// exp(a) by scaling and squaring of a truncated Taylor series.
inline ComplexMatrix taylor_expm(const ComplexMatrix& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
    const ComplexMatrix scaled = a / std::ldexp(1.0, squarings);
    const auto n = a.rows();
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    ComplexMatrix sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

// Tr over the first two factors of a (d1 x d2 x d3) operator, written as
// explicit index loops.
inline ComplexMatrix trace_first_two(const ComplexMatrix& m, int d1, int d2, int d3) {
    ComplexMatrix out = ComplexMatrix::Zero(d3, d3);
    for (int a = 0; a < d1; ++a)
        for (int b = 0; b < d2; ++b)
            for (int i = 0; i < d3; ++i)
                for (int j = 0; j < d3; ++j) out(i, j) += m((a * d2 + b) * d3 + i, (a * d2 + b) * d3 + j);
    return out;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(normal(rng), normal(rng));
    return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, int n) {
    const ComplexMatrix m = random_matrix(rng, n);
    return 0.5 * (m + m.adjoint());
}

// Random full-rank density matrix G G^dag / tr(G G^dag).
inline ComplexMatrix random_density(std::mt19937_64& rng, int n) {
    const ComplexMatrix g = random_matrix(rng, n);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return 0.5 * (rho + rho.adjoint());
}

}  // namespace collisim::testing
