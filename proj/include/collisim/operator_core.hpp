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

// Dense complex linear algebra and quantum-state primitives for the small
// Hilbert spaces of the collision model (dimension 12 at most, 144 for the
// superoperator used by the Runge-Kutta propagator).
//
// Tensor-factor convention: composite spaces are ordered A1 (x) A2 (x) S and
// flattened row-major, so the basis index of |a1, a2, s> is a1*6 + a2*3 + s.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "collisim/error.hpp"

namespace collisim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
// Allowed |tr - 1| accumulated over a long run; each step still preserves
// the trace to kTraceTol.
inline constexpr double kCumulativeTraceTol = 1e-8;
inline constexpr double kPositivityFloor = -1e-9;

struct Subsystem {
    std::string label;
    int dim = 0;

    bool operator==(const Subsystem&) const = default;
};

// Ordered list of labeled tensor factors.
class TensorSpace {
public:
    TensorSpace() = default;
    explicit TensorSpace(std::vector<Subsystem> factors);

    const std::vector<Subsystem>& factors() const noexcept { return factors_; }
    int total_dim() const noexcept;
    bool contains(std::string_view label) const noexcept;
    // Throws labeling error if absent.
    std::size_t position(std::string_view label) const;

    bool operator==(const TensorSpace&) const = default;

private:
    std::vector<Subsystem> factors_;
};

// Worst-case deviations of a matrix from being a density operator.
struct StateDiagnostics {
    double hermiticity_defect = 0.0;  // max |m - m^dagger| elementwise
    double trace_defect = 0.0;        // |tr m - 1|
    double min_eigenvalue = 0.0;

    bool valid() const noexcept {
        return hermiticity_defect <= kHermiticityTol && trace_defect <= kTraceTol &&
               min_eigenvalue >= kPositivityFloor;
    }
};

StateDiagnostics diagnose(const ComplexMatrix& m);

// Hermitian, unit-trace, positive-semidefinite matrix on a labeled space.
// Construction validates; nothing is renormalized.
class DensityOperator {
public:
    DensityOperator(TensorSpace space, ComplexMatrix matrix);

    const TensorSpace& space() const noexcept { return space_; }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

    // Diagonal entries (real parts).
    std::vector<double> populations() const;

private:
    TensorSpace space_;
    ComplexMatrix matrix_;
};

bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);
double max_abs(const ComplexMatrix& m);

// |k><kp| on a dim-level system.
ComplexMatrix transition(int k, int kp, int dim);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Trace over every factor not listed in keep. Kept factors retain their
// original order. The matrix-level overload performs no state validation.
ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorSpace& space,
                            const std::vector<std::string>& keep);
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep);

// Eigendecomposition of a Hermitian matrix, reusable for many times t.
class HermitianSpectrum {
public:
    explicit HermitianSpectrum(const ComplexMatrix& h);

    const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
    const ComplexMatrix& eigenvectors() const noexcept { return eigenvectors_; }

    // exp(-i h t) = sum_m exp(-i eps_m t) |m><m|
    ComplexMatrix propagator(double t) const;

private:
    Eigen::VectorXd eigenvalues_;
    ComplexMatrix eigenvectors_;
};

ComplexMatrix expm_hermitian_propagator(const ComplexMatrix& h, double t);

// Gibbs state of a qubit with thermal exponent x = omega * beta, basis order
// (|0>, |1>): diag(e^x, 1) / (e^x + 1). Negative x gives an inverted qubit.
DensityOperator thermal_qubit(double x, std::string label = "A");

}  // namespace collisim
