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

#include "collisim/model.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

namespace collisim {

namespace {

std::atomic<WarningHandler> g_warning_handler{nullptr};

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) {
        throw Error(ErrorKind::config, std::string("parameter '") + field + "' must be finite");
    }
}

void require_nonzero_detuning(const ModelParams& p) {
    if (p.delta == 0.0) {
        throw Error(ErrorKind::singularity, "zero detuning: adiabatic elimination is undefined");
    }
    if (!p.far_off_resonant()) {
        warn("effective Hamiltonian requested with delta = " + std::to_string(p.delta) + " g, below the " +
             std::to_string(kFarOffResonantRatio) + " g far-off-resonant threshold");
    }
}

// Embeds single-factor operators into A1 (x) A2 (x) S.
ComplexMatrix on_space(const ComplexMatrix& a1, const ComplexMatrix& a2, const ComplexMatrix& s) {
    return kron(kron(a1, a2), s);
}

ComplexMatrix id(int dim) { return ComplexMatrix::Identity(dim, dim); }

// sigma^{kk'} on an ancilla and on the system.
ComplexMatrix anc(int k, int kp) { return transition(k, kp, kAncillaDim); }
ComplexMatrix sys(int k, int kp) { return transition(k, kp, kSystemDim); }

}  // namespace

void set_warning_handler(WarningHandler handler) noexcept { g_warning_handler.store(handler); }

void warn(const std::string& message) {
    if (auto* handler = g_warning_handler.load()) {
        handler(message);
    } else {
        std::clog << "collisim warning: " << message << '\n';
    }
}

TensorSpace collision_space() {
    return TensorSpace({{"A1", kAncillaDim}, {"A2", kAncillaDim}, {"S", kSystemDim}});
}

TensorSpace system_space() { return TensorSpace({{"S", kSystemDim}}); }

// Hamiltonian builders accept g = 0 (coupling switched off); everything else
// goes through the strict ModelParams::validate.
static void check_builder_params(const ModelParams& p) {
    require_finite(p.g, "g");
    require_finite(p.delta, "delta");
    if (p.g < 0.0) throw Error(ErrorKind::config, "parameter 'g' must be >= 0");
}

void ModelParams::validate() const {
    require_finite(g, "g");
    require_finite(delta, "delta");
    require_finite(x1, "x1");
    require_finite(x2, "x2");
    require_finite(tau, "tau");
    if (omega_a1) require_finite(*omega_a1, "omega_a1");
    if (omega_a2) require_finite(*omega_a2, "omega_a2");
    if (g <= 0.0) throw Error(ErrorKind::config, "parameter 'g' must be > 0");
    if (tau <= 0.0) throw Error(ErrorKind::config, "parameter 'tau' must be > 0");
    if (n_steps < 1) throw Error(ErrorKind::config, "parameter 'n_steps' must be >= 1");
}

double compute_alpha(double g_m, double g_n, double delta_m, double delta_n) {
    if (delta_m == 0.0 || delta_n == 0.0) {
        throw Error(ErrorKind::singularity, "zero detuning: adiabatic elimination is undefined");
    }
    return 0.5 * g_m * g_n * (1.0 / delta_m + 1.0 / delta_n);
}

DerivedRates derive_rates(const ModelParams& p) {
    p.validate();
    DerivedRates r;
    if (p.delta != 0.0) {
        r.alpha = compute_alpha(p.g, p.g, p.delta, p.delta);
        r.r_ratio = p.g / p.delta;
        // 1 / ((1 + e^x1)(1 + e^-x2)): excited bath-1 ancilla times ground bath-2 ancilla.
        const double weight = (1.0 / (1.0 + std::exp(p.x1))) * (1.0 / (1.0 + std::exp(-p.x2)));
        r.capital_gamma = r.r_ratio * r.r_ratio * p.g * p.g * p.tau * weight;
    }
    r.x_s = p.x1 - p.x2;
    if (p.omega_a1 && p.omega_a2 && *p.omega_a1 != *p.omega_a2) r.beta_s = effective_beta(p);
    r.gamma1 = p.g * p.g * p.tau / (1.0 + std::exp(p.x1));
    r.gamma2 = p.g * p.g * p.tau / (1.0 + std::exp(p.x2));
    return r;
}

double effective_beta(const ModelParams& p) {
    if (!p.omega_a1 || !p.omega_a2) {
        throw Error(ErrorKind::precondition, "beta_s requires both omega_a1 and omega_a2");
    }
    if (*p.omega_a1 == *p.omega_a2) {
        throw Error(ErrorKind::degenerate_frequency, "beta_s is undefined for omega_a1 == omega_a2");
    }
    // x_m = omega_Am * beta_m, so the numerator is x1 - x2.
    return (p.x1 - p.x2) / (*p.omega_a1 - *p.omega_a2);
}

ComplexMatrix build_h_prime(const ModelParams& p) {
    check_builder_params(p);
    const ComplexMatrix coupling = p.g * on_space(anc(1, 0), id(2), sys(0, 2)) +
                                   p.g * on_space(id(2), anc(1, 0), sys(1, 2));
    return p.delta * on_space(id(2), id(2), sys(2, 2)) + coupling + coupling.adjoint();
}

ComplexMatrix build_v(const ModelParams& p) {
    check_builder_params(p);
    require_nonzero_detuning(p);
    const double alpha = compute_alpha(p.g, p.g, p.delta, p.delta);
    const ComplexMatrix exchange = -alpha * on_space(anc(0, 1), anc(1, 0), sys(1, 0));
    return exchange + exchange.adjoint();
}

ComplexMatrix build_h_eff(const ModelParams& p, ShiftConvention shifts) {
    ComplexMatrix h = build_v(p);
    const double alpha = compute_alpha(p.g, p.g, p.delta, p.delta);
    const double shift = shifts == ShiftConvention::single ? alpha : 2.0 * alpha;
    h -= shift * on_space(anc(1, 1), id(2), sys(0, 0));
    h -= shift * on_space(id(2), anc(1, 1), sys(1, 1));
    return h;
}

DensityOperator steady_state_qubit(double x_s) {
    if (!std::isfinite(x_s)) throw Error(ErrorKind::domain, "x_s must be finite");
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0 / (1.0 + std::exp(-x_s));
    m(1, 1) = 1.0 / (1.0 + std::exp(x_s));
    return DensityOperator(TensorSpace({{"S", 2}}), std::move(m));
}

std::pair<DensityOperator, DensityOperator> ancilla_pair(const ModelParams& p) {
    return {thermal_qubit(p.x1, "A1"), thermal_qubit(p.x2, "A2")};
}

DensityOperator embed_qubit(const DensityOperator& qubit) {
    if (qubit.dim() != 2) throw Error(ErrorKind::dimension, "embed_qubit expects a 2-level state");
    ComplexMatrix m = ComplexMatrix::Zero(kSystemDim, kSystemDim);
    m.topLeftCorner(2, 2) = qubit.matrix();
    return DensityOperator(system_space(), std::move(m));
}

DensityOperator qutrit_populations(double p0, double p1, double p2) {
    for (double v : {p0, p1, p2}) {
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::domain, "populations must be finite and >= 0");
    }
    ComplexMatrix m = ComplexMatrix::Zero(kSystemDim, kSystemDim);
    m(0, 0) = p0;
    m(1, 1) = p1;
    m(2, 2) = p2;
    return DensityOperator(system_space(), std::move(m));
}

}  // namespace collisim
