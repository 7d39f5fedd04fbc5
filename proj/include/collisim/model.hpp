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

// Hamiltonians, rates and analytic states of the off-resonant collision
// model: a Lambda-type qutrit S whose 0<->2 and 1<->2 transitions are driven
// by one ancilla qubit from bath 1 and one from bath 2 per collision.
//
// Units: g is the frequency unit. delta, alpha and all rates are in units of
// g, times (tau, t) in units of 1/g.

#include <optional>
#include <string>
#include <utility>

#include "collisim/operator_core.hpp"

namespace collisim {

inline constexpr int kAncillaDim = 2;
inline constexpr int kSystemDim = 3;
inline constexpr int kCollisionDim = kAncillaDim * kAncillaDim * kSystemDim;

// Detuning (in units of g) at and above which the far-off-resonant
// description is considered applicable.
inline constexpr double kFarOffResonantRatio = 20.0;

// Basis index of |a1, a2, s> in A1 (x) A2 (x) S.
constexpr int basis_index(int a1, int a2, int s) noexcept {
    return (a1 * kAncillaDim + a2) * kSystemDim + s;
}

TensorSpace collision_space();
TensorSpace system_space();

struct ModelParams {
    double g = 1.0;
    double delta = 0.0;
    double x1 = 0.0;  // omega_A1 * beta_1
    double x2 = 0.0;  // omega_A2 * beta_2
    std::optional<double> omega_a1;
    std::optional<double> omega_a2;
    double tau = 1.0;
    long n_steps = 1;

    // Throws config error naming the offending field.
    void validate() const;
    bool far_off_resonant() const noexcept { return delta >= kFarOffResonantRatio * g; }
};

// Effective coupling of the eliminated level:
// alpha_mn = (g_m g_n / 2) (1/delta_m + 1/delta_n).
double compute_alpha(double g_m, double g_n, double delta_m, double delta_n);

struct DerivedRates {
    double alpha = 0.0;
    double capital_gamma = 0.0;  // effective-qubit rate
    double x_s = 0.0;            // omega_S10 * beta_S = x1 - x2
    std::optional<double> beta_s;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double r_ratio = 0.0;  // g / delta
};

// beta_s is filled only when both ancilla frequencies are present and
// distinct. Zero detuning leaves alpha, capital_gamma and r_ratio at zero
// (the qutrit-two-bath rates remain meaningful there).
DerivedRates derive_rates(const ModelParams& p);

// Throws degenerate_frequency when omega_a1 == omega_a2, precondition when
// either frequency is missing.
double effective_beta(const ModelParams& p);

// H' = delta s22 + g (a1+ s02 + a2+ s12 + h.c.), time independent.
ComplexMatrix build_h_prime(const ModelParams& p);

// How the "+h.c." of the effective Hamiltonian treats the two diagonal level
// shifts. single: each shift appears once with -alpha. doubled: each shift
// gets -2 alpha. Only single reproduces the phases of build_h_prime; the
// other is kept for the regression test that demonstrates this.
enum class ShiftConvention { single, doubled };

ComplexMatrix build_h_eff(const ModelParams& p, ShiftConvention shifts = ShiftConvention::single);

// V = -alpha a1- a2+ s10 + h.c.: the effective Hamiltonian in the frame
// rotating with its level shifts.
ComplexMatrix build_v(const ModelParams& p);

// Thermal effective-qubit state diag(e^x, 1)/(1 + e^x), labeled "S".
DensityOperator steady_state_qubit(double x_s);

std::pair<DensityOperator, DensityOperator> ancilla_pair(const ModelParams& p);

// Zero-pads a qubit state on {0_S, 1_S} to the qutrit space.
DensityOperator embed_qubit(const DensityOperator& qubit);

// Diagonal qutrit state; populations must be nonnegative and sum to one.
DensityOperator qutrit_populations(double p0, double p1, double p2);

// Optional sink for non-fatal warnings (e.g. effective Hamiltonian requested
// outside the far-off-resonant regime). Default writes to std::clog.
using WarningHandler = void (*)(const std::string&);
void set_warning_handler(WarningHandler handler) noexcept;
void warn(const std::string& message);

}  // namespace collisim
