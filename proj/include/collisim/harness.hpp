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

// Scenario runner: key-value configuration files, named experiments,
// trajectory comparison metrics, CSV and report output.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "collisim/collision.hpp"
#include "collisim/model.hpp"

namespace collisim {

enum class Scenario { verify_elimination, collision_vs_me, negative_temperature, beyond_far_off, sweep };

const char* to_string(Scenario s) noexcept;

// collision-vs-me only: whether the run is expected to agree with the
// effective-qubit master equation or to demonstrate its breakdown.
enum class Expectation { agreement, breakdown };

struct SweepAxis {
    std::string parameter;  // g, delta, x1, x2, tau, alpha_tau, n_steps
    std::vector<double> values;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::collision_vs_me;
    Scenario base_scenario = Scenario::collision_vs_me;  // sweep only
    ModelParams params;
    std::optional<double> alpha_tau;  // alternative to tau: tau = alpha_tau / alpha
    PropagatorChoice propagator = PropagatorChoice::spectral();
    bool explicit_substeps = false;
    std::optional<std::array<double, 3>> initial_populations;  // nullopt: ground_S
    Expectation expect = Expectation::agreement;
    double alpha_t_end = 5.0;
    long grid_points = 2000;
    long snapshot_stride = 10;
    long csv_stride = 1;
    unsigned workers = 0;  // 0: hardware concurrency
    std::filesystem::path output_path = "collisim-out";
    std::optional<SweepAxis> sweep;
    std::vector<std::string> provided;  // keys present in the parsed text

    // ModelParams with tau resolved from alpha_tau when given.
    ModelParams resolved_params() const;
};

// Parses the key-value text. Throws Error(config) naming the offending key.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Scenario-specific completeness and range checks plus writability of the
// output location. Nothing is created on disk.
void validate_config(const ScenarioConfig& cfg);

struct CurveComparison {
    std::string a_source;
    std::string b_source;
    std::array<double, 3> max_abs_deviation{};
    std::array<double, 3> mean_abs_deviation{};
    std::array<double, 3> final_window_a{};  // mean populations over the last 10 %
    std::array<double, 3> final_window_b{};
    std::vector<double> trace_distance;  // per matched entry

    double max_deviation() const noexcept;
};

// Compares two trajectories entry by entry. If the time grids differ, b is
// resampled by nearest time when allow_resample is set; otherwise throws
// precondition.
CurveComparison metrics(const Trajectory& a, const Trajectory& b, bool allow_resample = false);

// Mean populations over the last fraction of entries.
std::array<double, 3> final_window_mean(const Trajectory& t, double fraction = 0.1);

struct Check {
    std::string name;
    double value = 0.0;
    std::string relation;  // "<=", ">=" or ">"
    double threshold = 0.0;
    bool pass = false;
};

Check check_at_most(std::string name, double value, double threshold);
Check check_at_least(std::string name, double value, double threshold);
Check check_greater(std::string name, double value, double threshold);

struct ComparisonReport {
    std::string scenario;
    std::vector<CurveComparison> comparisons;
    std::vector<std::pair<std::string, double>> quantities;
    std::vector<Check> checks;
    std::vector<std::string> files;

    bool passed() const noexcept;
    std::string text() const;
    std::string summary() const;  // key=value lines
};

struct ScenarioResult {
    ComparisonReport report;
    std::vector<Trajectory> trajectories;
};

// Runs one non-sweep scenario in memory without writing files.
ScenarioResult evaluate_scenario(const ScenarioConfig& cfg);

// Runs the scenario (or sweep) and writes trajectories.csv / sweep_NNN.csv,
// sweep_index.csv, report.txt and report.kv under cfg.output_path.
ComparisonReport run_scenario(const ScenarioConfig& cfg);

// CSV with columns step,t_in_inverse_g,p0,p1,p2,source; 12 significant
// digits; every stride-th entry plus the last.
void write_trajectory_csv(const std::filesystem::path& path, const std::vector<Trajectory>& trajectories,
                          long stride = 1);

std::string format_number(double v);

}  // namespace collisim
