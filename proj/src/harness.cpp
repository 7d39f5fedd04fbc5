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

#include "collisim/harness.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "collisim/lindblad.hpp"

namespace collisim {

namespace fs = std::filesystem;

namespace {

constexpr double kFinalWindow = 0.1;
constexpr double kTransientFraction = 0.1;

// Scenario tolerances.
constexpr double kEliminationPopulationTol = 0.02;
constexpr double kEliminationLeakFactor = 6.0;  // max p2 <= 4 (g/delta)^2 * 1.5
constexpr double kRabiTol = 1e-9;
constexpr double kAgreementTol = 0.05;
constexpr double kSteadyPopulationTol = 0.02;
constexpr double kLeakageTol = 0.02;
constexpr double kOverlapTol = 0.05;
constexpr double kBreakdownMinDeviation = 0.1;
constexpr double kResidualTol = 1e-12;

const std::vector<std::string> kKnownKeys{
    "scenario",   "base_scenario", "g",           "delta",          "x1",          "x2",
    "omega_a1",   "omega_a2",      "tau",         "alpha_tau",      "n_steps",     "propagator",
    "substeps",   "initial_state", "initial_populations", "expect", "alpha_t_end", "grid_points",
    "snapshot_stride", "csv_stride", "workers",  "output_path",    "sweep_parameter", "sweep_values"};

Error config_error(const std::string& msg) { return Error(ErrorKind::config, msg); }

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    if (!value.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
        throw config_error("key '" + key + "': '" + value + "' is not a finite number");
    }
    return out;
}

long parse_integer(const std::string& key, const std::string& value) {
    long out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw config_error("key '" + key + "': '" + value + "' is not an integer");
    }
    return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw config_error("key '" + key + "' needs at least one value");
    return out;
}

Scenario parse_scenario(const std::string& key, const std::string& value) {
    if (value == "verify-elimination") return Scenario::verify_elimination;
    if (value == "collision-vs-me") return Scenario::collision_vs_me;
    if (value == "negative-temperature") return Scenario::negative_temperature;
    if (value == "beyond-far-off") return Scenario::beyond_far_off;
    if (value == "sweep") return Scenario::sweep;
    throw config_error("key '" + key + "': unknown scenario '" + value + "'");
}

bool has(const ScenarioConfig& cfg, std::string_view key) {
    return std::find(cfg.provided.begin(), cfg.provided.end(), key) != cfg.provided.end();
}

std::vector<std::string> required_keys(Scenario s) {
    switch (s) {
        case Scenario::verify_elimination: return {"delta"};
        case Scenario::collision_vs_me:
        case Scenario::negative_temperature:
        case Scenario::beyond_far_off: return {"delta", "x1", "x2", "n_steps"};
        case Scenario::sweep: return {"base_scenario", "sweep_parameter", "sweep_values"};
    }
    return {};
}

bool uses_collision_time(Scenario s) {
    return s == Scenario::collision_vs_me || s == Scenario::negative_temperature || s == Scenario::beyond_far_off;
}

bool uses_qubit_equation(Scenario s) {
    return s == Scenario::collision_vs_me || s == Scenario::negative_temperature;
}

void apply_axis_value(ScenarioConfig& cfg, const std::string& parameter, double value) {
    auto& p = cfg.params;
    if (parameter == "g") {
        p.g = value;
    } else if (parameter == "delta") {
        p.delta = value;
    } else if (parameter == "x1") {
        p.x1 = value;
    } else if (parameter == "x2") {
        p.x2 = value;
    } else if (parameter == "tau") {
        p.tau = value;
        cfg.alpha_tau.reset();
    } else if (parameter == "alpha_tau") {
        cfg.alpha_tau = value;
    } else if (parameter == "n_steps") {
        if (value != std::floor(value) || value < 1) throw config_error("sweep value for n_steps must be a positive integer");
        p.n_steps = static_cast<long>(value);
    } else {
        throw config_error("key 'sweep_parameter': cannot sweep '" + parameter + "'");
    }
    cfg.provided.push_back(parameter);
}

void check_writable(const fs::path& path) {
    fs::path probe = path.empty() ? fs::path(".") : path;
    std::error_code ec;
    if (fs::exists(probe, ec)) {
        if (!fs::is_directory(probe, ec)) throw config_error("key 'output_path': '" + path.string() + "' is not a directory");
    } else {
        probe = fs::absolute(probe, ec);
        while (!probe.empty() && !fs::exists(probe, ec)) probe = probe.parent_path();
    }
    if (probe.empty() || !fs::is_directory(probe, ec) || ::access(probe.c_str(), W_OK) != 0) {
        throw config_error("key 'output_path': '" + path.string() + "' is not writable");
    }
}

ComplexMatrix initial_matrix(const ScenarioConfig& cfg) {
    const auto pops = cfg.initial_populations.value_or(std::array<double, 3>{1.0, 0.0, 0.0});
    return qutrit_populations(pops[0], pops[1], pops[2]).matrix();
}

DensityOperator initial_qubit(const ScenarioConfig& cfg) {
    const ComplexMatrix m = initial_matrix(cfg);
    return DensityOperator(TensorSpace({{"S", 2}}), m.topLeftCorner(2, 2));
}

double max_population(const Trajectory& t, std::size_t level, std::size_t from = 0) {
    double m = 0.0;
    for (std::size_t i = from; i < t.entries.size(); ++i) m = std::max(m, t.entries[i].populations[level]);
    return m;
}

void add_diagnostics(ComparisonReport& r, const Trajectory& t) {
    r.quantities.emplace_back(t.source + ".worst_hermiticity_defect", t.worst.hermiticity_defect);
    r.quantities.emplace_back(t.source + ".worst_trace_defect", t.worst.trace_defect);
    r.quantities.emplace_back(t.source + ".min_eigenvalue", t.worst.min_eigenvalue);
}

ScenarioResult verify_elimination(const ScenarioConfig& cfg) {
    const ModelParams p = cfg.resolved_params();
    const double alpha = compute_alpha(p.g, p.g, p.delta, p.delta);
    const double t_end = cfg.alpha_t_end / alpha;
    std::vector<double> grid(static_cast<std::size_t>(cfg.grid_points));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = t_end * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    }

    const DensityOperator sigma0 = excited_a1_ground_s();
    ScenarioResult res;
    Trajectory orig = closed_evolution(sigma0, build_h_prime(p), grid);
    orig.source = "orig";
    Trajectory eff = closed_evolution(sigma0, build_h_eff(p), grid);
    eff.source = "eff";

    double rabi_dev = 0.0;
    for (const auto& e : eff.entries) {
        const double c = std::cos(alpha * e.t);
        rabi_dev = std::max(rabi_dev, std::abs(e.populations[0] - c * c));
    }

    auto& r = res.report;
    r.scenario = to_string(Scenario::verify_elimination);
    CurveComparison cmp = metrics(eff, orig);
    r.quantities.emplace_back("alpha", alpha);
    r.quantities.emplace_back("t_end", t_end);
    add_diagnostics(r, orig);
    add_diagnostics(r, eff);
    const double leak_bound = kEliminationLeakFactor * (p.g / p.delta) * (p.g / p.delta);
    r.checks.push_back(check_at_most("eff_vs_orig.max_dev_p0", cmp.max_abs_deviation[0], kEliminationPopulationTol));
    r.checks.push_back(check_at_most("eff_vs_orig.max_dev_p1", cmp.max_abs_deviation[1], kEliminationPopulationTol));
    r.checks.push_back(check_at_most("orig.max_p2", max_population(orig, 2), leak_bound));
    r.checks.push_back(check_at_most("eff.p0_vs_cos2_alpha_t", rabi_dev, kRabiTol));
    r.comparisons.push_back(std::move(cmp));
    res.trajectories.push_back(std::move(orig));
    res.trajectories.push_back(std::move(eff));
    return res;
}

ScenarioResult qubit_equation_scenario(const ScenarioConfig& cfg, Scenario which) {
    const ModelParams p = cfg.resolved_params();
    const DerivedRates rates = derive_rates(p);
    ScenarioResult res;
    Trajectory exact = run_collisions(DensityOperator(system_space(), initial_matrix(cfg)), p,
                                      EvolutionMode::original, cfg.propagator, RunOptions{cfg.snapshot_stride});
    const LindbladGenerator gen = generator_effective_qubit(rates);
    Trajectory me = integrate_stroboscopic(gen, initial_qubit(cfg), p, "me5");

    auto& r = res.report;
    r.scenario = to_string(which);
    CurveComparison cmp = metrics(exact, me);
    const DensityOperator steady = steady_state_qubit(rates.x_s);
    const double p0_ss = steady.matrix()(0, 0).real();
    const double p1_ss = steady.matrix()(1, 1).real();
    const auto& fw = cmp.final_window_a;

    r.quantities.emplace_back("alpha", rates.alpha);
    r.quantities.emplace_back("alpha_tau", rates.alpha * p.tau);
    r.quantities.emplace_back("capital_gamma", rates.capital_gamma);
    r.quantities.emplace_back("x_s", rates.x_s);
    if (rates.beta_s) r.quantities.emplace_back("beta_s", *rates.beta_s);
    r.quantities.emplace_back("steady.p0", p0_ss);
    r.quantities.emplace_back("steady.p1", p1_ss);
    r.quantities.emplace_back("orig_vs_me5.max_deviation", cmp.max_deviation());
    add_diagnostics(r, exact);
    add_diagnostics(r, me);

    if (which == Scenario::negative_temperature) {
        r.checks.push_back(check_at_most("final_window.p1_vs_steady", std::abs(fw[1] - p1_ss), kSteadyPopulationTol));
        r.checks.push_back(check_at_most("steady.residual", steady_residual(gen, steady), kResidualTol));
        if (rates.x_s < 0.0) r.checks.push_back(check_greater("population_inversion.p1_minus_p0", fw[1] - fw[0], 0.0));
    } else if (cfg.expect == Expectation::agreement) {
        r.checks.push_back(check_at_most("orig_vs_me5.max_deviation", cmp.max_deviation(), kAgreementTol));
        r.checks.push_back(check_at_most("final_window.p0_vs_steady", std::abs(fw[0] - p0_ss), kSteadyPopulationTol));
        r.checks.push_back(check_at_most("final_window.p1_vs_steady", std::abs(fw[1] - p1_ss), kSteadyPopulationTol));
        r.checks.push_back(check_at_most("orig.max_p2", max_population(exact, 2), kLeakageTol));
    } else {
        const auto from = static_cast<std::size_t>(std::ceil(kTransientFraction * static_cast<double>(p.n_steps)));
        double overlap = 0.0;
        for (std::size_t i = from; i < exact.entries.size(); ++i) {
            const auto& q = exact.entries[i].populations;
            overlap = std::max(overlap, std::abs(q[2] - q[1]));
        }
        r.checks.push_back(check_at_most("orig.max_abs_p2_minus_p1_after_transient", overlap, kOverlapTol));
        r.checks.push_back(check_at_least("orig_vs_me5.max_deviation", cmp.max_deviation(), kBreakdownMinDeviation));
    }
    r.comparisons.push_back(std::move(cmp));
    res.trajectories.push_back(std::move(exact));
    res.trajectories.push_back(std::move(me));
    return res;
}

ScenarioResult beyond_far_off(const ScenarioConfig& cfg) {
    const ModelParams p = cfg.resolved_params();
    const DerivedRates rates = derive_rates(p);
    const DensityOperator rho0(system_space(), initial_matrix(cfg));
    ScenarioResult res;
    Trajectory exact = run_collisions(rho0, p, EvolutionMode::original, cfg.propagator, RunOptions{cfg.snapshot_stride});
    const LindbladGenerator gen = generator_qutrit_two_bath(p);
    Trajectory me = integrate_stroboscopic(gen, rho0, p, "me10");

    auto& r = res.report;
    r.scenario = to_string(Scenario::beyond_far_off);
    CurveComparison cmp = metrics(exact, me);
    r.quantities.emplace_back("gamma1", rates.gamma1);
    r.quantities.emplace_back("gamma2", rates.gamma2);
    r.quantities.emplace_back("dephasing_rate", p.tau * p.delta * p.delta);
    add_diagnostics(r, exact);
    add_diagnostics(r, me);
    r.checks.push_back(check_at_most("orig_vs_me10.max_deviation", cmp.max_deviation(), kAgreementTol));
    r.comparisons.push_back(std::move(cmp));
    res.trajectories.push_back(std::move(exact));
    res.trajectories.push_back(std::move(me));
    return res;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
}

void write_reports(const fs::path& dir, ComparisonReport& r) {
    r.files.push_back("report.txt");
    r.files.push_back("report.kv");
    write_text(dir / "report.txt", r.text());
    write_text(dir / "report.kv", r.summary());
}

std::string sweep_file_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sweep_%03zu.csv", i);
    return buf;
}

ComparisonReport run_sweep(const ScenarioConfig& cfg) {
    const auto& axis = *cfg.sweep;
    const std::size_t n = axis.values.size();
    std::vector<ComparisonReport> reports(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                ScenarioConfig point = cfg;
                point.scenario = cfg.base_scenario;
                point.sweep.reset();
                apply_axis_value(point, axis.parameter, axis.values[i]);
                ScenarioResult res = evaluate_scenario(point);
                write_trajectory_csv(cfg.output_path / sweep_file_name(i), res.trajectories, cfg.csv_stride);
                reports[i] = std::move(res.report);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned width = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    width = static_cast<unsigned>(std::min<std::size_t>(width, n));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < width; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    ComparisonReport total;
    total.scenario = std::string(to_string(Scenario::sweep)) + ":" + to_string(cfg.base_scenario);
    std::ostringstream index;
    index << "point," << axis.parameter << ",csv,passed\n";
    for (std::size_t i = 0; i < n; ++i) {
        char prefix[32];
        std::snprintf(prefix, sizeof prefix, "point_%03zu.", i);
        total.quantities.emplace_back(std::string(prefix) + axis.parameter, axis.values[i]);
        for (const auto& [k, v] : reports[i].quantities) total.quantities.emplace_back(prefix + k, v);
        for (auto c : reports[i].checks) {
            c.name = prefix + c.name;
            total.checks.push_back(std::move(c));
        }
        index << i << ',' << format_number(axis.values[i]) << ',' << sweep_file_name(i) << ','
              << (reports[i].passed() ? 1 : 0) << '\n';
        total.files.push_back(sweep_file_name(i));
    }
    write_text(cfg.output_path / "sweep_index.csv", index.str());
    total.files.push_back("sweep_index.csv");
    return total;
}

}  // namespace

const char* to_string(Scenario s) noexcept {
    switch (s) {
        case Scenario::verify_elimination: return "verify-elimination";
        case Scenario::collision_vs_me: return "collision-vs-me";
        case Scenario::negative_temperature: return "negative-temperature";
        case Scenario::beyond_far_off: return "beyond-far-off";
        case Scenario::sweep: return "sweep";
    }
    return "unknown";
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

ModelParams ScenarioConfig::resolved_params() const {
    ModelParams p = params;
    if (alpha_tau) {
        if (p.delta == 0.0) throw config_error("key 'alpha_tau' needs a nonzero delta");
        p.tau = *alpha_tau / compute_alpha(p.g, p.g, p.delta, p.delta);
    }
    return p;
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    std::string initial_state = "ground_S";
    std::optional<std::array<double, 3>> populations;
    std::optional<std::string> sweep_parameter;
    std::optional<std::vector<double>> sweep_values;

    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
            throw config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (has(cfg, key)) throw config_error("key '" + key + "' given more than once");
        if (value.empty()) throw config_error("key '" + key + "' has no value");
        cfg.provided.push_back(key);

        if (key == "scenario") {
            cfg.scenario = parse_scenario(key, value);
        } else if (key == "base_scenario") {
            cfg.base_scenario = parse_scenario(key, value);
            if (cfg.base_scenario == Scenario::sweep) throw config_error("key 'base_scenario' cannot be 'sweep'");
        } else if (key == "g") {
            cfg.params.g = parse_double(key, value);
        } else if (key == "delta") {
            cfg.params.delta = parse_double(key, value);
        } else if (key == "x1") {
            cfg.params.x1 = parse_double(key, value);
        } else if (key == "x2") {
            cfg.params.x2 = parse_double(key, value);
        } else if (key == "omega_a1") {
            cfg.params.omega_a1 = parse_double(key, value);
        } else if (key == "omega_a2") {
            cfg.params.omega_a2 = parse_double(key, value);
        } else if (key == "tau") {
            cfg.params.tau = parse_double(key, value);
        } else if (key == "alpha_tau") {
            cfg.alpha_tau = parse_double(key, value);
        } else if (key == "n_steps") {
            cfg.params.n_steps = parse_integer(key, value);
        } else if (key == "propagator") {
            if (value == "spectral") {
                cfg.propagator.kind = PropagatorChoice::Kind::spectral;
            } else if (value == "runge_kutta") {
                cfg.propagator.kind = PropagatorChoice::Kind::runge_kutta;
            } else {
                throw config_error("key 'propagator': expected 'spectral' or 'runge_kutta', got '" + value + "'");
            }
        } else if (key == "substeps") {
            cfg.propagator.substeps = parse_integer(key, value);
            cfg.explicit_substeps = true;
        } else if (key == "initial_state") {
            if (value != "ground_S" && value != "populations") {
                throw config_error("key 'initial_state': expected 'ground_S' or 'populations', got '" + value + "'");
            }
            initial_state = value;
        } else if (key == "initial_populations") {
            const auto v = parse_list(key, value);
            if (v.size() != 3) throw config_error("key 'initial_populations' needs exactly three values");
            populations = std::array<double, 3>{v[0], v[1], v[2]};
        } else if (key == "expect") {
            if (value == "agreement") {
                cfg.expect = Expectation::agreement;
            } else if (value == "breakdown") {
                cfg.expect = Expectation::breakdown;
            } else {
                throw config_error("key 'expect': expected 'agreement' or 'breakdown', got '" + value + "'");
            }
        } else if (key == "alpha_t_end") {
            cfg.alpha_t_end = parse_double(key, value);
        } else if (key == "grid_points") {
            cfg.grid_points = parse_integer(key, value);
        } else if (key == "snapshot_stride") {
            cfg.snapshot_stride = parse_integer(key, value);
        } else if (key == "csv_stride") {
            cfg.csv_stride = parse_integer(key, value);
        } else if (key == "workers") {
            const long w = parse_integer(key, value);
            if (w < 0) throw config_error("key 'workers' must be >= 0");
            cfg.workers = static_cast<unsigned>(w);
        } else if (key == "output_path") {
            cfg.output_path = value;
        } else if (key == "sweep_parameter") {
            sweep_parameter = value;
        } else if (key == "sweep_values") {
            sweep_values = parse_list(key, value);
        }
    }

    if (initial_state == "populations") {
        if (!populations) throw config_error("key 'initial_populations' is required when initial_state = populations");
        cfg.initial_populations = populations;
    } else if (populations) {
        throw config_error("key 'initial_populations' requires initial_state = populations");
    }
    if (sweep_parameter || sweep_values) {
        cfg.sweep = SweepAxis{sweep_parameter.value_or(""), sweep_values.value_or(std::vector<double>{})};
    }
    if (!has(cfg, "scenario")) throw config_error("missing required key 'scenario'");
    return cfg;
}

ScenarioConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const ScenarioConfig& cfg) {
    const Scenario effective = cfg.scenario == Scenario::sweep ? cfg.base_scenario : cfg.scenario;
    for (const auto& key : required_keys(cfg.scenario)) {
        if (!has(cfg, key)) throw config_error("scenario '" + std::string(to_string(cfg.scenario)) + "' requires key '" + key + "'");
    }
    if (cfg.scenario != Scenario::sweep) {
        if (has(cfg, "base_scenario") || has(cfg, "sweep_parameter") || has(cfg, "sweep_values")) {
            throw config_error("keys 'base_scenario', 'sweep_parameter', 'sweep_values' are only valid for scenario 'sweep'");
        }
    }
    const std::string swept = cfg.sweep ? cfg.sweep->parameter : std::string();
    for (const auto& key : required_keys(effective)) {
        if (!has(cfg, key) && key != swept) {
            throw config_error("scenario '" + std::string(to_string(effective)) + "' requires key '" + key + "'");
        }
    }
    if (uses_collision_time(effective)) {
        const bool tau = has(cfg, "tau") || swept == "tau";
        const bool alpha_tau = has(cfg, "alpha_tau") || swept == "alpha_tau";
        if (tau == alpha_tau) throw config_error("exactly one of keys 'tau' and 'alpha_tau' is required");
    } else if (has(cfg, "tau") || has(cfg, "alpha_tau")) {
        throw config_error("keys 'tau'/'alpha_tau' are not used by scenario '" + std::string(to_string(effective)) + "'");
    }
    if (has(cfg, "expect") && effective != Scenario::collision_vs_me) {
        throw config_error("key 'expect' is only valid for scenario 'collision-vs-me'");
    }
    if (has(cfg, "substeps")) {
        if (cfg.propagator.kind != PropagatorChoice::Kind::runge_kutta) throw config_error("key 'substeps' requires propagator = runge_kutta");
        if (cfg.propagator.substeps < 1) throw config_error("key 'substeps' must be >= 1");
    }
    if (cfg.grid_points < 2) throw config_error("key 'grid_points' must be >= 2");
    if (!(cfg.alpha_t_end > 0.0)) throw config_error("key 'alpha_t_end' must be > 0");
    if (cfg.snapshot_stride < 0) throw config_error("key 'snapshot_stride' must be >= 0");
    if (cfg.csv_stride < 1) throw config_error("key 'csv_stride' must be >= 1");
    if (cfg.initial_populations) {
        const auto& q = *cfg.initial_populations;
        for (double v : q) {
            if (v < 0.0) throw config_error("key 'initial_populations': populations must be >= 0");
        }
        if (std::abs(q[0] + q[1] + q[2] - 1.0) > kTraceTol) throw config_error("key 'initial_populations' must sum to 1");
        if (uses_qubit_equation(effective) && q[2] != 0.0) {
            throw config_error("key 'initial_populations': the effective-qubit comparison needs p2 = 0");
        }
    }
    if (cfg.scenario == Scenario::sweep) {
        if (cfg.sweep->values.empty()) throw config_error("key 'sweep_values' needs at least one value");
        for (double v : cfg.sweep->values) {
            ScenarioConfig point = cfg;
            apply_axis_value(point, cfg.sweep->parameter, v);
            point.resolved_params().validate();
            if (effective != Scenario::beyond_far_off && point.params.delta == 0.0) {
                throw config_error("key 'delta': scenario '" + std::string(to_string(effective)) + "' needs delta != 0");
            }
        }
    } else {
        cfg.resolved_params().validate();
        if (effective != Scenario::beyond_far_off && cfg.params.delta == 0.0) {
            throw config_error("key 'delta': scenario '" + std::string(to_string(effective)) + "' needs delta != 0");
        }
    }
    check_writable(cfg.output_path);
}

double CurveComparison::max_deviation() const noexcept {
    return *std::max_element(max_abs_deviation.begin(), max_abs_deviation.end());
}

std::array<double, 3> final_window_mean(const Trajectory& t, double fraction) {
    std::array<double, 3> m{};
    if (t.entries.empty()) return m;
    const std::size_t n = t.entries.size();
    const std::size_t count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
    for (std::size_t i = n - count; i < n; ++i) {
        for (std::size_t k = 0; k < 3; ++k) m[k] += t.entries[i].populations[k];
    }
    for (auto& v : m) v /= static_cast<double>(count);
    return m;
}

CurveComparison metrics(const Trajectory& a, const Trajectory& b, bool allow_resample) {
    if (a.entries.empty() || b.entries.empty()) throw Error(ErrorKind::precondition, "cannot compare empty trajectories");
    auto same_time = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)); };
    bool aligned = a.size() == b.size();
    for (std::size_t i = 0; aligned && i < a.size(); ++i) aligned = same_time(a.entries[i].t, b.entries[i].t);
    if (!aligned && !allow_resample) {
        throw Error(ErrorKind::precondition, "trajectories '" + a.source + "' and '" + b.source + "' have different time grids");
    }

    CurveComparison c;
    c.a_source = a.source;
    c.b_source = b.source;
    c.trace_distance.reserve(a.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (aligned) {
            j = i;
        } else {
            // b's times are increasing, so the nearest index only moves forward.
            while (j + 1 < b.size() && std::abs(b.entries[j + 1].t - a.entries[i].t) <= std::abs(b.entries[j].t - a.entries[i].t)) ++j;
        }
        const auto& pa = a.entries[i].populations;
        const auto& pb = b.entries[j].populations;
        double td = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            const double d = std::abs(pa[k] - pb[k]);
            c.max_abs_deviation[k] = std::max(c.max_abs_deviation[k], d);
            c.mean_abs_deviation[k] += d;
            td += d;
        }
        c.trace_distance.push_back(0.5 * td);
    }
    for (auto& v : c.mean_abs_deviation) v /= static_cast<double>(a.size());
    c.final_window_a = final_window_mean(a, kFinalWindow);
    c.final_window_b = final_window_mean(b, kFinalWindow);
    return c;
}

Check check_at_most(std::string name, double value, double threshold) {
    return {std::move(name), value, "<=", threshold, value <= threshold};
}

Check check_at_least(std::string name, double value, double threshold) {
    return {std::move(name), value, ">=", threshold, value >= threshold};
}

Check check_greater(std::string name, double value, double threshold) {
    return {std::move(name), value, ">", threshold, value > threshold};
}

bool ComparisonReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string ComparisonReport::text() const {
    std::ostringstream out;
    out << "scenario: " << scenario << '\n';
    out << "status: " << (passed() ? "PASS" : "FAIL") << '\n';
    if (!quantities.empty()) {
        out << "\nquantities:\n";
        for (const auto& [k, v] : quantities) out << "  " << k << " = " << format_number(v) << '\n';
    }
    if (!comparisons.empty()) {
        out << "\ncomparisons:\n";
        for (const auto& c : comparisons) {
            out << "  " << c.a_source << " vs " << c.b_source << '\n';
            out << "    max |dp|     :";
            for (double v : c.max_abs_deviation) out << ' ' << format_number(v);
            out << "\n    mean |dp|    :";
            for (double v : c.mean_abs_deviation) out << ' ' << format_number(v);
            out << "\n    final window : " << c.a_source;
            for (double v : c.final_window_a) out << ' ' << format_number(v);
            out << " | " << c.b_source;
            for (double v : c.final_window_b) out << ' ' << format_number(v);
            const double td = c.trace_distance.empty() ? 0.0 : *std::max_element(c.trace_distance.begin(), c.trace_distance.end());
            out << "\n    max trace distance (populations): " << format_number(td) << '\n';
        }
    }
    out << "\nchecks:\n";
    for (const auto& c : checks) {
        out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << " = " << format_number(c.value) << ' '
            << c.relation << ' ' << format_number(c.threshold) << '\n';
    }
    if (!files.empty()) {
        out << "\nfiles:\n";
        for (const auto& f : files) out << "  " << f << '\n';
    }
    return out.str();
}

std::string ComparisonReport::summary() const {
    std::ostringstream out;
    out << "scenario=" << scenario << '\n';
    out << "status=" << (passed() ? "pass" : "fail") << '\n';
    for (const auto& [k, v] : quantities) out << "quantity." << k << '=' << format_number(v) << '\n';
    for (const auto& c : comparisons) {
        const std::string prefix = "comparison." + c.a_source + "_vs_" + c.b_source + '.';
        for (std::size_t k = 0; k < 3; ++k) {
            out << prefix << "max_dev_p" << k << '=' << format_number(c.max_abs_deviation[k]) << '\n';
        }
        for (std::size_t k = 0; k < 3; ++k) {
            out << prefix << "mean_dev_p" << k << '=' << format_number(c.mean_abs_deviation[k]) << '\n';
        }
        for (std::size_t k = 0; k < 3; ++k) {
            out << prefix << "final_" << c.a_source << "_p" << k << '=' << format_number(c.final_window_a[k]) << '\n';
        }
        for (std::size_t k = 0; k < 3; ++k) {
            out << prefix << "final_" << c.b_source << "_p" << k << '=' << format_number(c.final_window_b[k]) << '\n';
        }
    }
    for (const auto& c : checks) {
        out << "check." << c.name << ".value=" << format_number(c.value) << '\n';
        out << "check." << c.name << ".threshold=" << c.relation << format_number(c.threshold) << '\n';
        out << "check." << c.name << ".pass=" << (c.pass ? 1 : 0) << '\n';
    }
    return out.str();
}

void write_trajectory_csv(const fs::path& path, const std::vector<Trajectory>& trajectories, long stride) {
    if (stride < 1) throw Error(ErrorKind::precondition, "CSV stride must be >= 1");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << "step,t_in_inverse_g,p0,p1,p2,source\n";
    for (const auto& t : trajectories) {
        for (std::size_t i = 0; i < t.entries.size(); ++i) {
            if (i % static_cast<std::size_t>(stride) != 0 && i + 1 != t.entries.size()) continue;
            const auto& e = t.entries[i];
            out << e.step << ',' << format_number(e.t) << ',' << format_number(e.populations[0]) << ','
                << format_number(e.populations[1]) << ',' << format_number(e.populations[2]) << ',' << t.source << '\n';
        }
    }
    if (!out) throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
}

ScenarioResult evaluate_scenario(const ScenarioConfig& cfg_in) {
    ScenarioConfig cfg = cfg_in;
    if (cfg.propagator.kind == PropagatorChoice::Kind::runge_kutta && !cfg.explicit_substeps) {
        cfg.propagator.substeps = PropagatorChoice::default_substeps(cfg.resolved_params());
    }
    switch (cfg.scenario) {
        case Scenario::verify_elimination: return verify_elimination(cfg);
        case Scenario::collision_vs_me:
        case Scenario::negative_temperature: return qubit_equation_scenario(cfg, cfg.scenario);
        case Scenario::beyond_far_off: return beyond_far_off(cfg);
        case Scenario::sweep: break;
    }
    throw Error(ErrorKind::precondition, "evaluate_scenario does not run sweeps; use run_scenario");
}

ComparisonReport run_scenario(const ScenarioConfig& cfg) {
    validate_config(cfg);
    std::error_code ec;
    fs::create_directories(cfg.output_path, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + cfg.output_path.string() + "': " + ec.message());
    try {
        ComparisonReport report;
        if (cfg.scenario == Scenario::sweep) {
            report = run_sweep(cfg);
        } else {
            ScenarioResult res = evaluate_scenario(cfg);
            write_trajectory_csv(cfg.output_path / "trajectories.csv", res.trajectories, cfg.csv_stride);
            report = std::move(res.report);
            report.files.insert(report.files.begin(), "trajectories.csv");
        }
        write_reports(cfg.output_path, report);
        return report;
    } catch (const NumericError& e) {
        write_text(cfg.output_path / "report.kv", std::string("scenario=") + to_string(cfg.scenario) +
                                                      "\nstatus=numeric_error\npartial_outputs=true\nerror_step=" +
                                                      std::to_string(e.step()) + "\nerror=" + e.what() + '\n');
        throw;
    }
}

}  // namespace collisim
