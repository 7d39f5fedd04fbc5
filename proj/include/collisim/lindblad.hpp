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

// Continuous-time GKSL dynamics
//   d rho/dt = -i [H, rho] + sum_k r_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2)
// with a fixed-step classical RK4 integrator.

#include <string>
#include <vector>

#include "collisim/collision.hpp"
#include "collisim/model.hpp"
#include "collisim/operator_core.hpp"

namespace collisim {

struct Dissipator {
    ComplexMatrix jump;
    double rate = 0.0;
};

class LindbladGenerator {
public:
    LindbladGenerator(ComplexMatrix hamiltonian, std::vector<Dissipator> dissipators);

    int dim() const noexcept { return static_cast<int>(hamiltonian_.rows()); }
    const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }
    const std::vector<Dissipator>& dissipators() const noexcept { return dissipators_; }

    ComplexMatrix apply(const ComplexMatrix& rho) const;

    double max_rate() const noexcept;
    double total_rate() const noexcept;
    // Largest |eigenvalue| of the Hamiltonian part.
    double hamiltonian_scale() const;

private:
    ComplexMatrix hamiltonian_;
    std::vector<Dissipator> dissipators_;
    // Precomputed L^dag L per dissipator.
    std::vector<ComplexMatrix> loss_;
};

// Effective qubit: lowering |0><1| at Gamma e^{x_s}, raising |1><0| at Gamma.
LindbladGenerator generator_effective_qubit(const DerivedRates& rates);

// Qutrit coupled to both baths through level 2, in the frame rotating with
// -delta s22: H = delta s22, dephasing s22 at tau delta^2, and
// |0><2| at gamma1 e^{x1}, |2><0| at gamma1, |1><2| at gamma2 e^{x2},
// |2><1| at gamma2.
LindbladGenerator generator_qutrit_two_bath(const ModelParams& p);

// dt * (max_rate + hamiltonian_scale) must not exceed this.
inline constexpr double kStabilityBound = 0.1;

// 0.02 / (total_rate + hamiltonian_scale); infinite for a null generator.
double default_time_step(const LindbladGenerator& gen);

struct IntegrateOptions {
    long record_every = 1;  // keep every k-th integrator state
};

// Integrates from t = 0 to t_end in steps of dt; the last step is shortened
// only if t_end is not a multiple of dt. Entries carry the integrator step
// index divided by record_every. Throws NumericError if the trace drifts by
// more than 1e-9 or hermiticity by more than 1e-12, and precondition when
// the stability guard fails.
Trajectory integrate(const LindbladGenerator& gen, const DensityOperator& rho0, double t_end, double dt,
                     IntegrateOptions options = {});

// Integrates to n_steps * tau with dt = tau / k, k the smallest integer for
// which dt respects both default_time_step and the stability guard, and
// records one entry per collision time t = n tau.
Trajectory integrate_stroboscopic(const LindbladGenerator& gen, const DensityOperator& rho0, const ModelParams& p,
                                  std::string source);

// max |L(rho)| elementwise.
double steady_residual(const LindbladGenerator& gen, const DensityOperator& rho);

// Steady state of the delta = 0, x1 = x2 = x qutrit generator:
// p0 = p1 = 1/(2 + e^-x), p2 = e^-x/(2 + e^-x).
DensityOperator qutrit_balanced_steady_state(double x);

}  // namespace collisim
