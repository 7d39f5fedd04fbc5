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

#include "collisim/collisim.h"

#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "collisim/collision.hpp"
#include "collisim/harness.hpp"
#include "collisim/lindblad.hpp"
#include "collisim/model.hpp"

struct collisim_params {
    collisim::ModelParams value;
};

struct collisim_trajectory {
    collisim::Trajectory value;
};

struct collisim_config {
    collisim::ScenarioConfig value;
};

struct collisim_report {
    collisim::ComparisonReport value;
    std::string text;
    std::string summary;
};

namespace {

thread_local std::string g_last_error;

collisim_status to_status(collisim::ErrorKind kind) {
    using collisim::ErrorKind;
    switch (kind) {
        case ErrorKind::precondition: return COLLISIM_ERR_INVALID_ARGUMENT;
        case ErrorKind::domain: return COLLISIM_ERR_DOMAIN;
        case ErrorKind::labeling: return COLLISIM_ERR_LABEL;
        case ErrorKind::dimension: return COLLISIM_ERR_DIMENSION;
        case ErrorKind::singularity: return COLLISIM_ERR_SINGULARITY;
        case ErrorKind::degenerate_frequency: return COLLISIM_ERR_DEGENERATE_FREQUENCY;
        case ErrorKind::numeric: return COLLISIM_ERR_NUMERIC;
        case ErrorKind::config: return COLLISIM_ERR_CONFIG;
        case ErrorKind::io: return COLLISIM_ERR_IO;
    }
    return COLLISIM_ERR_INTERNAL;
}

collisim_status fail(collisim_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

// Runs body, translating exceptions into status codes.
template <class F>
collisim_status guarded(F&& body) {
    try {
        g_last_error.clear();
        body();
        return COLLISIM_OK;
    } catch (const collisim::Error& e) {
        return fail(to_status(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(COLLISIM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(COLLISIM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(COLLISIM_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) throw collisim::Error(collisim::ErrorKind::precondition, std::string(what) + " is null");
}

collisim::DensityOperator diagonal_state(const double pops[3]) {
    require(pops, "initial_populations");
    return collisim::qutrit_populations(pops[0], pops[1], pops[2]);
}

collisim::ComplexMatrix hamiltonian(const collisim::ModelParams& p, collisim_hamiltonian which) {
    switch (which) {
        case COLLISIM_HAMILTONIAN_ORIGINAL: return collisim::build_h_prime(p);
        case COLLISIM_HAMILTONIAN_EFFECTIVE: return collisim::build_h_eff(p);
        case COLLISIM_HAMILTONIAN_ROTATED: return collisim::build_v(p);
    }
    throw collisim::Error(collisim::ErrorKind::precondition, "unknown Hamiltonian selector");
}

}  // namespace

extern "C" {

const char* collisim_version(void) { return "1.0.0"; }

const char* collisim_status_string(collisim_status status) {
    switch (status) {
        case COLLISIM_OK: return "ok";
        case COLLISIM_ERR_INVALID_ARGUMENT: return "invalid argument";
        case COLLISIM_ERR_DOMAIN: return "domain error";
        case COLLISIM_ERR_LABEL: return "labeling error";
        case COLLISIM_ERR_DIMENSION: return "dimension mismatch";
        case COLLISIM_ERR_SINGULARITY: return "singular detuning";
        case COLLISIM_ERR_DEGENERATE_FREQUENCY: return "degenerate ancilla frequencies";
        case COLLISIM_ERR_NUMERIC: return "numeric error";
        case COLLISIM_ERR_CONFIG: return "configuration error";
        case COLLISIM_ERR_IO: return "i/o error";
        case COLLISIM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* collisim_last_error(void) { return g_last_error.c_str(); }

collisim_status collisim_params_create(collisim_params** out) {
    return guarded([&] {
        require(out, "out");
        *out = new collisim_params{};
    });
}

void collisim_params_destroy(collisim_params* params) { delete params; }

collisim_status collisim_params_set(collisim_params* params, const char* key, double value) {
    return guarded([&] {
        require(params, "params");
        require(key, "key");
        auto& p = params->value;
        const std::string k = key;
        if (k == "g") {
            p.g = value;
        } else if (k == "delta") {
            p.delta = value;
        } else if (k == "x1") {
            p.x1 = value;
        } else if (k == "x2") {
            p.x2 = value;
        } else if (k == "omega_a1") {
            p.omega_a1 = value;
        } else if (k == "omega_a2") {
            p.omega_a2 = value;
        } else if (k == "tau") {
            p.tau = value;
        } else if (k == "n_steps") {
            if (value != std::floor(value) || !std::isfinite(value)) {
                throw collisim::Error(collisim::ErrorKind::domain, "n_steps must be an integer");
            }
            p.n_steps = static_cast<long>(value);
        } else {
            throw collisim::Error(collisim::ErrorKind::precondition, "unknown parameter '" + k + "'");
        }
    });
}

collisim_status collisim_params_get(const collisim_params* params, const char* key, double* value) {
    return guarded([&] {
        require(params, "params");
        require(key, "key");
        require(value, "value");
        const auto& p = params->value;
        const std::string k = key;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (k == "g") {
            *value = p.g;
        } else if (k == "delta") {
            *value = p.delta;
        } else if (k == "x1") {
            *value = p.x1;
        } else if (k == "x2") {
            *value = p.x2;
        } else if (k == "omega_a1") {
            *value = p.omega_a1.value_or(nan);
        } else if (k == "omega_a2") {
            *value = p.omega_a2.value_or(nan);
        } else if (k == "tau") {
            *value = p.tau;
        } else if (k == "n_steps") {
            *value = static_cast<double>(p.n_steps);
        } else {
            throw collisim::Error(collisim::ErrorKind::precondition, "unknown parameter '" + k + "'");
        }
    });
}

collisim_status collisim_params_validate(const collisim_params* params) {
    return guarded([&] {
        require(params, "params");
        params->value.validate();
    });
}

collisim_status collisim_params_derive(const collisim_params* params, collisim_rates* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        const auto r = collisim::derive_rates(params->value);
        *out = collisim_rates{r.alpha,  r.capital_gamma, r.x_s,    r.beta_s.value_or(std::numeric_limits<double>::quiet_NaN()),
                              r.gamma1, r.gamma2,        r.r_ratio};
    });
}

collisim_status collisim_build_hamiltonian(const collisim_params* params, collisim_hamiltonian which, double* out,
                                           size_t out_len) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        constexpr size_t n = collisim::kCollisionDim;
        if (out_len < 2 * n * n) {
            throw collisim::Error(collisim::ErrorKind::dimension, "output buffer needs 288 doubles");
        }
        const auto h = hamiltonian(params->value, which);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                const auto z = h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                out[2 * (i * n + j)] = z.real();
                out[2 * (i * n + j) + 1] = z.imag();
            }
        }
    });
}

collisim_status collisim_run_collisions(const collisim_params* params, const double initial_populations[3],
                                        collisim_mode mode, collisim_propagator propagator, long substeps,
                                        collisim_trajectory** out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        const auto& p = params->value;
        collisim::PropagatorChoice choice = collisim::PropagatorChoice::spectral();
        if (propagator == COLLISIM_PROPAGATOR_RUNGE_KUTTA) {
            choice = substeps > 0 ? collisim::PropagatorChoice::runge_kutta(substeps)
                                  : collisim::PropagatorChoice::runge_kutta_default(p);
        } else if (propagator != COLLISIM_PROPAGATOR_SPECTRAL) {
            throw collisim::Error(collisim::ErrorKind::precondition, "unknown propagator selector");
        }
        if (mode != COLLISIM_MODE_ORIGINAL && mode != COLLISIM_MODE_EFFECTIVE) {
            throw collisim::Error(collisim::ErrorKind::precondition, "unknown evolution mode");
        }
        auto traj = std::make_unique<collisim_trajectory>();
        traj->value = collisim::run_collisions(
            diagonal_state(initial_populations), p,
            mode == COLLISIM_MODE_ORIGINAL ? collisim::EvolutionMode::original : collisim::EvolutionMode::effective,
            choice);
        *out = traj.release();
    });
}

collisim_status collisim_run_master_equation(const collisim_params* params, collisim_equation equation,
                                             const double initial_populations[3], collisim_trajectory** out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        const auto& p = params->value;
        const auto rho = diagonal_state(initial_populations);
        auto traj = std::make_unique<collisim_trajectory>();
        if (equation == COLLISIM_EQUATION_EFFECTIVE_QUBIT) {
            if (initial_populations[2] != 0.0) {
                throw collisim::Error(collisim::ErrorKind::precondition, "effective-qubit equation needs p2 = 0");
            }
            const collisim::DensityOperator qubit(collisim::TensorSpace({{"S", 2}}), rho.matrix().topLeftCorner(2, 2));
            traj->value = collisim::integrate_stroboscopic(
                collisim::generator_effective_qubit(collisim::derive_rates(p)), qubit, p, "me5");
        } else if (equation == COLLISIM_EQUATION_QUTRIT_TWO_BATH) {
            traj->value = collisim::integrate_stroboscopic(collisim::generator_qutrit_two_bath(p), rho, p, "me10");
        } else {
            throw collisim::Error(collisim::ErrorKind::precondition, "unknown equation selector");
        }
        *out = traj.release();
    });
}

collisim_status collisim_closed_evolution(const collisim_params* params, collisim_hamiltonian which,
                                          double alpha_t_end, size_t grid_points, collisim_trajectory** out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        const auto& p = params->value;
        if (grid_points < 2) throw collisim::Error(collisim::ErrorKind::precondition, "grid_points must be >= 2");
        if (!(alpha_t_end > 0.0)) throw collisim::Error(collisim::ErrorKind::domain, "alpha_t_end must be > 0");
        const double t_end = alpha_t_end / collisim::compute_alpha(p.g, p.g, p.delta, p.delta);
        std::vector<double> grid(grid_points);
        for (size_t i = 0; i < grid_points; ++i) {
            grid[i] = t_end * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        }
        auto traj = std::make_unique<collisim_trajectory>();
        traj->value = collisim::closed_evolution(collisim::excited_a1_ground_s(), hamiltonian(p, which), grid);
        traj->value.source = which == COLLISIM_HAMILTONIAN_ORIGINAL ? "orig" : "eff";
        *out = traj.release();
    });
}

size_t collisim_trajectory_size(const collisim_trajectory* traj) { return traj ? traj->value.size() : 0; }

collisim_status collisim_trajectory_entry(const collisim_trajectory* traj, size_t index, long* step, double* t,
                                          double populations[3]) {
    return guarded([&] {
        require(traj, "trajectory");
        if (index >= traj->value.size()) {
            throw collisim::Error(collisim::ErrorKind::precondition, "trajectory index out of range");
        }
        const auto& e = traj->value.entries[index];
        if (step) *step = e.step;
        if (t) *t = e.t;
        if (populations) {
            for (int k = 0; k < 3; ++k) populations[k] = e.populations[static_cast<size_t>(k)];
        }
    });
}

const char* collisim_trajectory_source(const collisim_trajectory* traj) {
    return traj ? traj->value.source.c_str() : "";
}

collisim_status collisim_trajectory_write_csv(const collisim_trajectory* const* trajs, size_t count, const char* path) {
    return guarded([&] {
        require(trajs, "trajectories");
        require(path, "path");
        std::vector<collisim::Trajectory> all;
        for (size_t i = 0; i < count; ++i) {
            require(trajs[i], "trajectory");
            all.push_back(trajs[i]->value);
        }
        collisim::write_trajectory_csv(path, all);
    });
}

void collisim_trajectory_destroy(collisim_trajectory* traj) { delete traj; }

collisim_status collisim_config_load(const char* path, collisim_config** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new collisim_config{collisim::load_config(path)};
    });
}

collisim_status collisim_config_parse(const char* text, collisim_config** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new collisim_config{collisim::parse_config(text)};
    });
}

collisim_status collisim_config_validate(const collisim_config* cfg) {
    return guarded([&] {
        require(cfg, "config");
        collisim::validate_config(cfg->value);
    });
}

collisim_status collisim_config_set_output_dir(collisim_config* cfg, const char* dir) {
    return guarded([&] {
        require(cfg, "config");
        require(dir, "dir");
        cfg->value.output_path = dir;
    });
}

int collisim_config_is_sweep(const collisim_config* cfg) {
    return cfg && cfg->value.scenario == collisim::Scenario::sweep ? 1 : 0;
}

const char* collisim_config_scenario(const collisim_config* cfg) {
    return cfg ? collisim::to_string(cfg->value.scenario) : "";
}

void collisim_config_destroy(collisim_config* cfg) { delete cfg; }

collisim_status collisim_run_scenario(const collisim_config* cfg, collisim_report** out) {
    return guarded([&] {
        require(cfg, "config");
        require(out, "out");
        auto report = std::make_unique<collisim_report>();
        report->value = collisim::run_scenario(cfg->value);
        report->text = report->value.text();
        report->summary = report->value.summary();
        *out = report.release();
    });
}

int collisim_report_passed(const collisim_report* report) { return report && report->value.passed() ? 1 : 0; }

const char* collisim_report_text(const collisim_report* report) { return report ? report->text.c_str() : ""; }

const char* collisim_report_summary(const collisim_report* report) { return report ? report->summary.c_str() : ""; }

void collisim_report_destroy(collisim_report* report) { delete report; }

}  // extern "C"
