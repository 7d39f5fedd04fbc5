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

#include "collisim/lindblad.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace collisim {

namespace {

constexpr double kIntegratorTraceTol = 1e-9;
constexpr double kIntegratorHermiticityTol = 1e-12;

ComplexMatrix qubit_op(int k, int kp) { return transition(k, kp, 2); }
ComplexMatrix qutrit_op(int k, int kp) { return transition(k, kp, kSystemDim); }

}  // namespace

LindbladGenerator::LindbladGenerator(ComplexMatrix hamiltonian, std::vector<Dissipator> dissipators)
    : hamiltonian_(std::move(hamiltonian)), dissipators_(std::move(dissipators)) {
    if (hamiltonian_.rows() != hamiltonian_.cols() || hamiltonian_.rows() == 0) {
        throw Error(ErrorKind::dimension, "generator Hamiltonian must be a nonempty square matrix");
    }
    if (!is_hermitian(hamiltonian_, kHermiticityTol)) {
        throw Error(ErrorKind::precondition, "generator Hamiltonian must be Hermitian");
    }
    loss_.reserve(dissipators_.size());
    for (const auto& d : dissipators_) {
        if (d.jump.rows() != hamiltonian_.rows() || d.jump.cols() != hamiltonian_.cols()) {
            throw Error(ErrorKind::dimension, "jump operator dimension does not match the generator");
        }
        if (!std::isfinite(d.rate) || d.rate < 0.0) {
            throw Error(ErrorKind::domain, "dissipator rates must be finite and >= 0");
        }
        loss_.push_back(d.jump.adjoint() * d.jump);
    }
}

ComplexMatrix LindbladGenerator::apply(const ComplexMatrix& rho) const {
    if (rho.rows() != hamiltonian_.rows() || rho.cols() != hamiltonian_.cols()) {
        throw Error(ErrorKind::dimension, "state dimension does not match the generator");
    }
    ComplexMatrix out = Complex(0.0, -1.0) * commutator(hamiltonian_, rho);
    for (std::size_t k = 0; k < dissipators_.size(); ++k) {
        const auto& d = dissipators_[k];
        if (d.rate == 0.0) continue;
        out += d.rate * (d.jump * rho * d.jump.adjoint() - 0.5 * anticommutator(rho, loss_[k]));
    }
    return out;
}

double LindbladGenerator::max_rate() const noexcept {
    double m = 0.0;
    for (const auto& d : dissipators_) m = std::max(m, d.rate);
    return m;
}

double LindbladGenerator::total_rate() const noexcept {
    double s = 0.0;
    for (const auto& d : dissipators_) s += d.rate;
    return s;
}

double LindbladGenerator::hamiltonian_scale() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hamiltonian_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

LindbladGenerator generator_effective_qubit(const DerivedRates& rates) {
    if (!(rates.capital_gamma >= 0.0)) throw Error(ErrorKind::domain, "Gamma must be >= 0");
    std::vector<Dissipator> ds;
    ds.push_back({qubit_op(0, 1), rates.capital_gamma * std::exp(rates.x_s)});
    ds.push_back({qubit_op(1, 0), rates.capital_gamma});
    return LindbladGenerator(ComplexMatrix::Zero(2, 2), std::move(ds));
}

LindbladGenerator generator_qutrit_two_bath(const ModelParams& p) {
    p.validate();
    const DerivedRates r = derive_rates(p);
    std::vector<Dissipator> ds;
    ds.push_back({qutrit_op(2, 2), p.tau * p.delta * p.delta});
    ds.push_back({qutrit_op(0, 2), r.gamma1 * std::exp(p.x1)});
    ds.push_back({qutrit_op(2, 0), r.gamma1});
    ds.push_back({qutrit_op(1, 2), r.gamma2 * std::exp(p.x2)});
    ds.push_back({qutrit_op(2, 1), r.gamma2});
    // -i [delta s22, rho] = i delta [rho, s22]
    return LindbladGenerator(p.delta * qutrit_op(2, 2), std::move(ds));
}

double default_time_step(const LindbladGenerator& gen) {
    const double scale = gen.total_rate() + gen.hamiltonian_scale();
    return scale > 0.0 ? 0.02 / scale : std::numeric_limits<double>::infinity();
}

Trajectory integrate(const LindbladGenerator& gen, const DensityOperator& rho0, double t_end, double dt,
                     IntegrateOptions options) {
    if (rho0.dim() != gen.dim()) throw Error(ErrorKind::dimension, "state dimension does not match the generator");
    if (gen.dim() > kSystemDim) throw Error(ErrorKind::dimension, "trajectories record at most three levels");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error(ErrorKind::domain, "t_end must be finite and >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::domain, "dt must be finite and > 0");
    if (options.record_every < 1) throw Error(ErrorKind::precondition, "record_every must be >= 1");
    if (t_end > 0.0 && dt > t_end) throw Error(ErrorKind::precondition, "dt must not exceed t_end");
    const double guard = dt * (gen.max_rate() + gen.hamiltonian_scale());
    if (guard > kStabilityBound) {
        throw Error(ErrorKind::precondition, "stability guard violated: dt * (max rate + |H|) = " +
                                                 sci(guard) + " > " + sci(kStabilityBound));
    }

    // Integer step count; tolerate t_end/dt landing a hair off an integer.
    const double ratio = t_end / dt;
    const long rounded = std::lround(ratio);
    const bool exact = std::abs(ratio - static_cast<double>(rounded)) <= 1e-9 * std::max(1.0, ratio);
    const long n_steps = exact ? rounded : static_cast<long>(std::ceil(ratio));

    Trajectory traj;
    ComplexMatrix rho = rho0.matrix();
    const double initial_trace = rho.trace().real();
    auto record = [&](long i, double t) {
        TrajectoryEntry e;
        e.step = i / options.record_every;
        e.t = t;
        for (int k = 0; k < gen.dim(); ++k) e.populations[static_cast<std::size_t>(k)] = rho(k, k).real();
        traj.entries.push_back(std::move(e));
    };
    auto monitor = [&](long i) {
        const double drift = std::abs(rho.trace().real() - initial_trace);
        const double herm = max_abs(rho - rho.adjoint());
        traj.cumulative_trace_drift = std::max(traj.cumulative_trace_drift, drift);
        traj.worst.trace_defect = std::max(traj.worst.trace_defect, std::abs(rho.trace() - Complex(1.0)));
        traj.worst.hermiticity_defect = std::max(traj.worst.hermiticity_defect, herm);
        if (drift > kIntegratorTraceTol) {
            throw NumericError("integrator trace drift " + sci(drift) + " at step " + std::to_string(i), i);
        }
        if (herm > kIntegratorHermiticityTol) {
            throw NumericError("integrator hermiticity defect " + sci(herm) + " at step " +
                                   std::to_string(i),
                               i);
        }
        if (i % options.record_every == 0) {
            const double min_eig = diagnose(rho).min_eigenvalue;
            traj.worst.min_eigenvalue = std::min(traj.worst.min_eigenvalue, min_eig);
            if (min_eig < kPositivityFloor) {
                throw NumericError("integrator state lost positivity at step " + std::to_string(i), i);
            }
        }
    };

    monitor(0);
    record(0, 0.0);
    for (long i = 1; i <= n_steps; ++i) {
        const double t_prev = static_cast<double>(i - 1) * dt;
        const double h = (i == n_steps) ? t_end - t_prev : dt;
        const ComplexMatrix k1 = gen.apply(rho);
        const ComplexMatrix k2 = gen.apply(rho + 0.5 * h * k1);
        const ComplexMatrix k3 = gen.apply(rho + 0.5 * h * k2);
        const ComplexMatrix k4 = gen.apply(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        monitor(i);
        if (i % options.record_every == 0 || i == n_steps) {
            record(i, i == n_steps ? t_end : static_cast<double>(i) * dt);
        }
    }
    return traj;
}

// Master-equation trajectory sampled exactly at the collision times n tau:
// dt = tau / k for the smallest k that satisfies the default step size and
// the stability guard.
Trajectory integrate_stroboscopic(const LindbladGenerator& gen, const DensityOperator& rho0,
                                  const ModelParams& p, std::string source) {
    p.validate();
    const double dt_max = std::min(default_time_step(gen),
                             kStabilityBound / std::max(gen.max_rate() + gen.hamiltonian_scale(), 1e-300));
    const long k = std::max(1L, static_cast<long>(std::ceil(p.tau / dt_max)));
    Trajectory t = integrate(gen, rho0, static_cast<double>(p.n_steps) * p.tau, p.tau / static_cast<double>(k),
                             IntegrateOptions{k});
    for (auto& e : t.entries) e.t = static_cast<double>(e.step) * p.tau;
    t.source = std::move(source);
    return t;
}

double steady_residual(const LindbladGenerator& gen, const DensityOperator& rho) {
    return max_abs(gen.apply(rho.matrix()));
}

DensityOperator qutrit_balanced_steady_state(double x) {
    if (!std::isfinite(x)) throw Error(ErrorKind::domain, "thermal exponent must be finite");
    const double w = std::exp(-x);
    const double z = 2.0 + w;
    return qutrit_populations(1.0 / z, 1.0 / z, w / z);
}

}  // namespace collisim
