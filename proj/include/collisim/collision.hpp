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

// Stroboscopic repeated-interaction dynamics. Each collision prepares
// eta1 (x) eta2 (x) rho on A1 (x) A2 (x) S, evolves it for tau under a
// time-independent Hamiltonian and traces the ancillas out again.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "collisim/model.hpp"
#include "collisim/operator_core.hpp"

namespace collisim {

struct PropagatorChoice {
    enum class Kind { spectral, runge_kutta };

    Kind kind = Kind::spectral;
    long substeps = 1;  // runge_kutta only

    static PropagatorChoice spectral() { return {Kind::spectral, 1}; }
    static PropagatorChoice runge_kutta(long substeps) { return {Kind::runge_kutta, substeps}; }
    // Runge-Kutta with default_substeps(p).
    static PropagatorChoice runge_kutta_default(const ModelParams& p);

    // ceil(64 * max(|delta|, g) * tau): |delta| * dt <= 1/64.
    static long default_substeps(const ModelParams& p);
};

const char* to_string(PropagatorChoice::Kind kind) noexcept;

struct TrajectoryEntry {
    long step = 0;
    double t = 0.0;
    std::array<double, 3> populations{};
    std::optional<ComplexMatrix> snapshot;  // reduced state, every snapshot_stride steps
};

struct Trajectory {
    std::string source;
    std::vector<TrajectoryEntry> entries;
    // Worst values seen over every state of the run, including those not
    // recorded as entries.
    StateDiagnostics worst;
    double cumulative_trace_drift = 0.0;

    std::size_t size() const noexcept { return entries.size(); }
};

// One collision's unitary action sigma -> U sigma U^dagger on the composite
// space, precomputed for a fixed Hamiltonian and duration.
class CollisionPropagator {
public:
    CollisionPropagator(const ComplexMatrix& h, double tau, PropagatorChoice choice);

    ComplexMatrix evolve(const ComplexMatrix& sigma) const;
    const PropagatorChoice& choice() const noexcept { return choice_; }

private:
    PropagatorChoice choice_;
    ComplexMatrix unitary_;        // spectral
    ComplexMatrix superoperator_;  // runge_kutta, acting on column-stacked vec(sigma)
};

// A single classical RK4 step of d sigma/dt = -i [h, sigma].
ComplexMatrix rk4_liouville_step(const ComplexMatrix& h, const ComplexMatrix& sigma, double dt);

// Liouvillian L with vec(-i[h, s]) = L vec(s), vec stacking columns (the
// storage order of ComplexMatrix).
ComplexMatrix liouvillian_matrix(const ComplexMatrix& h);

// Collision-map engine bound to one parameter set and Hamiltonian.
class CollisionEngine {
public:
    CollisionEngine(const ModelParams& p, const ComplexMatrix& h, PropagatorChoice choice);

    // rho -> Tr_{A1,A2}[U (eta1 (x) eta2 (x) rho) U^dagger]. A 2-level input is
    // embedded into the qutrit first.
    DensityOperator step(const DensityOperator& rho_s) const;
    // Unvalidated version on a raw 3x3 matrix.
    ComplexMatrix step_matrix(const ComplexMatrix& rho_s) const;

private:
    ComplexMatrix ancilla_state_;  // eta1 (x) eta2
    CollisionPropagator propagator_;
};

DensityOperator collision_step(const DensityOperator& rho_s, const ModelParams& p, const ComplexMatrix& h,
                               PropagatorChoice prop);

enum class EvolutionMode { original, effective };

struct RunOptions {
    long snapshot_stride = 10;  // 0 disables snapshots
};

// n_steps + 1 entries, the first being rho0. Aborts with NumericError at
// the first state that fails the density-operator checks.
Trajectory run_collisions(const DensityOperator& rho0, const ModelParams& p, EvolutionMode mode,
                          PropagatorChoice prop, RunOptions options = {});

// Closed (no refresh) evolution of a composite state, S populations at each
// time of t_grid.
Trajectory closed_evolution(const DensityOperator& sigma0, const ComplexMatrix& h,
                            const std::vector<double>& t_grid);

// Increment rho_n - rho_{n-1} to second order in tau under V:
// Tr_A(-i tau [V, s] + tau^2 (V s V - {s, V^2}/2)).
ComplexMatrix second_order_map(const DensityOperator& rho_s, const ModelParams& p);

// Pure composite state |1_A1, 0_A2, 0_S>.
DensityOperator excited_a1_ground_s();

}  // namespace collisim
