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

#include "collisim/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace collisim {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::domain: return "domain";
        case ErrorKind::labeling: return "labeling";
        case ErrorKind::dimension: return "dimension";
        case ErrorKind::singularity: return "singularity";
        case ErrorKind::degenerate_frequency: return "degenerate-frequency";
        case ErrorKind::numeric: return "numeric";
        case ErrorKind::config: return "config";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

TensorSpace::TensorSpace(std::vector<Subsystem> factors) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].dim < 1) {
            throw Error(ErrorKind::precondition, "subsystem '" + factors_[i].label + "' has dimension < 1");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (factors_[j].label == factors_[i].label) {
                throw Error(ErrorKind::labeling, "duplicate subsystem label '" + factors_[i].label + "'");
            }
        }
    }
}

int TensorSpace::total_dim() const noexcept {
    int d = 1;
    for (const auto& f : factors_) d *= f.dim;
    return d;
}

bool TensorSpace::contains(std::string_view label) const noexcept {
    return std::any_of(factors_.begin(), factors_.end(), [&](const Subsystem& f) { return f.label == label; });
}

std::size_t TensorSpace::position(std::string_view label) const {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].label == label) return i;
    }
    throw Error(ErrorKind::labeling, "unknown subsystem label '" + std::string(label) + "'");
}

StateDiagnostics diagnose(const ComplexMatrix& m) {
    StateDiagnostics d;
    d.hermiticity_defect = max_abs(m - m.adjoint());
    d.trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
    // Eigenvalues of the Hermitian part; the anti-Hermitian residue is
    // already reported by hermiticity_defect.
    const ComplexMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue solver failed while diagnosing a state");
    }
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    return d;
}

DensityOperator::DensityOperator(TensorSpace space, ComplexMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.total_dim()) {
        throw Error(ErrorKind::dimension, "density matrix dimension does not match its tensor space");
    }
    const StateDiagnostics d = diagnose(matrix_);
    if (!d.valid()) {
        throw NumericError("invalid density operator: hermiticity defect " + sci(d.hermiticity_defect) +
                           ", trace defect " + sci(d.trace_defect) + ", min eigenvalue " +
                           sci(d.min_eigenvalue));
    }
}

std::vector<double> DensityOperator::populations() const {
    std::vector<double> p(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i) p[static_cast<std::size_t>(i)] = matrix_(i, i).real();
    return p;
}

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const auto n = m.rows();
    return max_abs(m * m.adjoint() - ComplexMatrix::Identity(n, n)) <= tol;
}

ComplexMatrix transition(int k, int kp, int dim) {
    if (k < 0 || kp < 0 || k >= dim || kp >= dim) {
        throw Error(ErrorKind::precondition, "transition operator level out of range");
    }
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(k, kp) = 1.0;
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {

void require_same_square(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw Error(ErrorKind::dimension, "operands must be square matrices of equal dimension");
    }
}

}  // namespace

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_square(a, b);
    return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_square(a, b);
    return a * b + b * a;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorSpace& space,
                            const std::vector<std::string>& keep) {
    if (keep.empty()) {
        throw Error(ErrorKind::precondition, "partial_trace needs at least one kept subsystem");
    }
    const auto& factors = space.factors();
    const std::size_t n = factors.size();
    if (m.rows() != space.total_dim() || m.cols() != space.total_dim()) {
        throw Error(ErrorKind::dimension, "matrix dimension does not match tensor space");
    }

    std::vector<bool> kept(n, false);
    for (const auto& label : keep) kept[space.position(label)] = true;

    // Row-major strides of the full space.
    std::vector<int> stride(n, 1);
    for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * factors[i].dim;

    std::vector<std::size_t> kept_pos, traced_pos;
    for (std::size_t i = 0; i < n; ++i) (kept[i] ? kept_pos : traced_pos).push_back(i);

    auto offsets = [&](const std::vector<std::size_t>& positions) {
        // Full-space offset for every multi-index over the given factors,
        // enumerated row-major in the listed order.
        std::vector<int> out{0};
        for (std::size_t p : positions) {
            std::vector<int> next;
            next.reserve(out.size() * static_cast<std::size_t>(factors[p].dim));
            for (int base : out) {
                for (int k = 0; k < factors[p].dim; ++k) next.push_back(base + k * stride[p]);
            }
            out = std::move(next);
        }
        return out;
    };
    const std::vector<int> kept_off = offsets(kept_pos);
    const std::vector<int> traced_off = offsets(traced_pos);

    const auto d = static_cast<Eigen::Index>(kept_off.size());
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            Complex acc = 0.0;
            for (int t : traced_off) acc += m(kept_off[i] + t, kept_off[j] + t);
            out(i, j) = acc;
        }
    }
    return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep) {
    ComplexMatrix reduced = partial_trace(rho.matrix(), rho.space(), keep);
    std::vector<Subsystem> factors;
    for (const auto& f : rho.space().factors()) {
        if (std::find(keep.begin(), keep.end(), f.label) != keep.end()) factors.push_back(f);
    }
    return DensityOperator(TensorSpace(std::move(factors)), std::move(reduced));
}

HermitianSpectrum::HermitianSpectrum(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) {
        throw Error(ErrorKind::dimension, "Hamiltonian must be square");
    }
    if (!is_hermitian(h, kHermiticityTol)) {
        throw Error(ErrorKind::precondition, "matrix exponential requires a Hermitian generator (defect " +
                                                 std::to_string(max_abs(h - h.adjoint())) + ")");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericError("Hermitian eigensolver did not converge");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

ComplexMatrix HermitianSpectrum::propagator(double t) const {
    const Eigen::Index n = eigenvalues_.size();
    ComplexVector phases(n);
    for (Eigen::Index m = 0; m < n; ++m) phases(m) = std::polar(1.0, -eigenvalues_(m) * t);
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

ComplexMatrix expm_hermitian_propagator(const ComplexMatrix& h, double t) {
    return HermitianSpectrum(h).propagator(t);
}

DensityOperator thermal_qubit(double x, std::string label) {
    if (!std::isfinite(x)) {
        throw Error(ErrorKind::domain, "thermal exponent must be finite");
    }
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0 / (1.0 + std::exp(-x));
    m(1, 1) = 1.0 / (1.0 + std::exp(x));
    return DensityOperator(TensorSpace({{std::move(label), 2}}), std::move(m));
}

}  // namespace collisim
