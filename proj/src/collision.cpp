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

#include "collisim/collision.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace collisim {

namespace {

const std::vector<std::string> kKeepSystem{"S"};

ComplexMatrix as_qutrit(const DensityOperator& rho_s) {
    if (rho_s.dim() == kSystemDim) return rho_s.matrix();
    if (rho_s.dim() == 2) return embed_qubit(rho_s).matrix();
    throw Error(ErrorKind::dimension, "system state must be 2- or 3-level");
}

ComplexMatrix ancilla_product(const ModelParams& p) {
    auto [eta1, eta2] = ancilla_pair(p);
    return kron(eta1.matrix(), eta2.matrix());
}

std::array<double, 3> diagonal3(const ComplexMatrix& rho) {
    return {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()};
}

// Square matrix power by repeated squaring.
// Superoperators are assembled and powered in extended precision: the
// powered map is applied up to ~1e5 times per run, so its trace-row error
// would otherwise accumulate linearly.
using WideComplex = std::complex<long double>;
using WideMatrix = Eigen::Matrix<WideComplex, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Matrix>
Matrix matrix_power(Matrix base, long exponent) {
    Matrix result = Matrix::Identity(base.rows(), base.cols());
    while (exponent > 0) {
        if (exponent & 1) result = result * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

void track(Trajectory& traj, const StateDiagnostics& d) {
    traj.worst.hermiticity_defect = std::max(traj.worst.hermiticity_defect, d.hermiticity_defect);
    traj.worst.trace_defect = std::max(traj.worst.trace_defect, d.trace_defect);
    traj.worst.min_eigenvalue = std::min(traj.worst.min_eigenvalue, d.min_eigenvalue);
    traj.cumulative_trace_drift = std::max(traj.cumulative_trace_drift, d.trace_defect);
}

void check_state(const ComplexMatrix& rho, long step, Trajectory& traj) {
    const StateDiagnostics d = diagnose(rho);
    track(traj, d);
    if (d.hermiticity_defect > kHermiticityTol || d.trace_defect > kCumulativeTraceTol ||
        d.min_eigenvalue < kPositivityFloor) {
        throw NumericError("state at step " + std::to_string(step) + " violates density-operator invariants " +
                               "(hermiticity " + sci(d.hermiticity_defect) + ", trace " +
                               sci(d.trace_defect) + ", min eigenvalue " +
                               sci(d.min_eigenvalue) + ")",
                           step);
    }
}

}  // namespace

const char* to_string(PropagatorChoice::Kind kind) noexcept {
    return kind == PropagatorChoice::Kind::spectral ? "spectral" : "runge_kutta";
}

long PropagatorChoice::default_substeps(const ModelParams& p) {
    const double scale = std::max(std::abs(p.delta), p.g);
    return std::max(1L, static_cast<long>(std::ceil(64.0 * scale * p.tau)));
}

PropagatorChoice PropagatorChoice::runge_kutta_default(const ModelParams& p) {
    return runge_kutta(default_substeps(p));
}

ComplexMatrix liouvillian_matrix(const ComplexMatrix& h) {
    const auto n = h.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    // vec(A X B) = (B^T (x) A) vec(X) for column stacking.
    return Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
}

ComplexMatrix rk4_liouville_step(const ComplexMatrix& h, const ComplexMatrix& sigma, double dt) {
    const Complex minus_i(0.0, -1.0);
    auto rhs = [&](const ComplexMatrix& s) -> ComplexMatrix { return minus_i * (h * s - s * h); };
    const ComplexMatrix k1 = rhs(sigma);
    const ComplexMatrix k2 = rhs(sigma + 0.5 * dt * k1);
    const ComplexMatrix k3 = rhs(sigma + 0.5 * dt * k2);
    const ComplexMatrix k4 = rhs(sigma + dt * k3);
    return sigma + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

CollisionPropagator::CollisionPropagator(const ComplexMatrix& h, double tau, PropagatorChoice choice)
    : choice_(choice) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::domain, "collision duration must be >= 0");
    if (choice_.kind == PropagatorChoice::Kind::spectral) {
        unitary_ = HermitianSpectrum(h).propagator(tau);
        return;
    }
    if (choice_.substeps < 1) throw Error(ErrorKind::precondition, "Runge-Kutta substeps must be >= 1");
    if (!is_hermitian(h, kHermiticityTol)) {
        throw Error(ErrorKind::precondition, "Liouville propagation requires a Hermitian Hamiltonian");
    }
    // For a linear right-hand side L, one RK4 step of size dt is exactly the
    // degree-4 Taylor polynomial of dt L; substeps of it compose by powering.
    const long double dt = static_cast<long double>(tau) / static_cast<long double>(choice_.substeps);
    const WideMatrix a = dt * liouvillian_matrix(h).cast<WideComplex>();
    const auto n2 = a.rows();
    const WideMatrix a2 = a * a;
    const WideMatrix a3 = a2 * a;
    const WideMatrix a4 = a3 * a;
    const WideMatrix one_step = WideMatrix::Identity(n2, n2) + a + a2 / WideComplex(2.0L) +
                                a3 / WideComplex(6.0L) + a4 / WideComplex(24.0L);
    superoperator_ = matrix_power(one_step, choice_.substeps).cast<Complex>();
}

ComplexMatrix CollisionPropagator::evolve(const ComplexMatrix& sigma) const {
    if (choice_.kind == PropagatorChoice::Kind::spectral) {
        return unitary_ * sigma * unitary_.adjoint();
    }
    const auto n = sigma.rows();
    ComplexVector v = Eigen::Map<const ComplexVector>(sigma.data(), n * n);
    ComplexVector out = superoperator_ * v;
    return Eigen::Map<const ComplexMatrix>(out.data(), n, n);
}

CollisionEngine::CollisionEngine(const ModelParams& p, const ComplexMatrix& h, PropagatorChoice choice)
    : ancilla_state_(ancilla_product(p)), propagator_(h, p.tau, choice) {
    if (h.rows() != kCollisionDim || h.cols() != kCollisionDim) {
        throw Error(ErrorKind::dimension, "collision Hamiltonian must act on A1 (x) A2 (x) S");
    }
}

ComplexMatrix CollisionEngine::step_matrix(const ComplexMatrix& rho_s) const {
    const ComplexMatrix sigma = kron(ancilla_state_, rho_s);
    return partial_trace(propagator_.evolve(sigma), collision_space(), kKeepSystem);
}

DensityOperator CollisionEngine::step(const DensityOperator& rho_s) const {
    return DensityOperator(system_space(), step_matrix(as_qutrit(rho_s)));
}

DensityOperator collision_step(const DensityOperator& rho_s, const ModelParams& p, const ComplexMatrix& h,
                               PropagatorChoice prop) {
    return CollisionEngine(p, h, prop).step(rho_s);
}

Trajectory run_collisions(const DensityOperator& rho0, const ModelParams& p, EvolutionMode mode,
                          PropagatorChoice prop, RunOptions options) {
    p.validate();
    const ComplexMatrix h = mode == EvolutionMode::original ? build_h_prime(p) : build_v(p);
    const CollisionEngine engine(p, h, prop);

    Trajectory traj;
    traj.source = mode == EvolutionMode::original ? "orig" : "eff";
    traj.entries.reserve(static_cast<std::size_t>(p.n_steps) + 1);

    ComplexMatrix rho = as_qutrit(rho0);
    auto record = [&](long n) {
        TrajectoryEntry e;
        e.step = n;
        e.t = static_cast<double>(n) * p.tau;
        e.populations = diagonal3(rho);
        if (options.snapshot_stride > 0 && n % options.snapshot_stride == 0) e.snapshot = rho;
        traj.entries.push_back(std::move(e));
    };

    check_state(rho, 0, traj);
    record(0);
    for (long n = 1; n <= p.n_steps; ++n) {
        const double previous_trace = rho.trace().real();
        rho = engine.step_matrix(rho);
        if (std::abs(rho.trace().real() - previous_trace) > kTraceTol) {
            throw NumericError("collision " + std::to_string(n) + " did not preserve the trace", n);
        }
        check_state(rho, n, traj);
        record(n);
    }
    return traj;
}

Trajectory closed_evolution(const DensityOperator& sigma0, const ComplexMatrix& h,
                            const std::vector<double>& t_grid) {
    if (sigma0.space() != collision_space()) {
        throw Error(ErrorKind::labeling, "closed evolution expects a state on A1 (x) A2 (x) S");
    }
    if (t_grid.empty() || !(t_grid.front() >= 0.0)) {
        throw Error(ErrorKind::precondition, "time grid must be nonempty and start at t >= 0");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw Error(ErrorKind::precondition, "time grid must be increasing");
    }
    const HermitianSpectrum spectrum(h);
    const TensorSpace space = collision_space();

    Trajectory traj;
    traj.entries.reserve(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const ComplexMatrix u = spectrum.propagator(t_grid[i]);
        const ComplexMatrix rho = partial_trace(u * sigma0.matrix() * u.adjoint(), space, kKeepSystem);
        check_state(rho, static_cast<long>(i), traj);
        TrajectoryEntry e;
        e.step = static_cast<long>(i);
        e.t = t_grid[i];
        e.populations = diagonal3(rho);
        traj.entries.push_back(std::move(e));
    }
    return traj;
}

ComplexMatrix second_order_map(const DensityOperator& rho_s, const ModelParams& p) {
    p.validate();
    const ComplexMatrix v = build_v(p);
    const ComplexMatrix sigma = kron(ancilla_product(p), as_qutrit(rho_s));
    const ComplexMatrix v2 = v * v;
    const Complex minus_i_tau(0.0, -p.tau);
    const ComplexMatrix increment =
        minus_i_tau * commutator(v, sigma) + p.tau * p.tau * (v * sigma * v - 0.5 * anticommutator(sigma, v2));
    return partial_trace(increment, collision_space(), kKeepSystem);
}

DensityOperator excited_a1_ground_s() {
    ComplexMatrix m = ComplexMatrix::Zero(kCollisionDim, kCollisionDim);
    const int i = basis_index(1, 0, 0);
    m(i, i) = 1.0;
    return DensityOperator(collision_space(), std::move(m));
}

}  // namespace collisim
