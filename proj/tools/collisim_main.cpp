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

// collisim command-line driver. Links only the C interface.
//
//   collisim run <config> [--output-dir DIR]
//   collisim sweep <config> [--output-dir DIR]
//   collisim validate <config>
//
// Exit codes: 0 pass, 1 tolerance failure, 2 usage/config error,
// 3 numeric error.

#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "collisim/collisim.h"

namespace {

enum ExitCode { kPass = 0, kToleranceFail = 1, kUsage = 2, kNumeric = 3 };

struct ConfigDeleter {
    void operator()(collisim_config* c) const { collisim_config_destroy(c); }
};
struct ReportDeleter {
    void operator()(collisim_report* r) const { collisim_report_destroy(r); }
};
using ConfigPtr = std::unique_ptr<collisim_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<collisim_report, ReportDeleter>;

int report_error(collisim_status status) {
    std::fprintf(stderr, "collisim: %s: %s\n", collisim_status_string(status), collisim_last_error());
    switch (status) {
        case COLLISIM_ERR_NUMERIC:
        case COLLISIM_ERR_INTERNAL: return kNumeric;
        default: return kUsage;
    }
}

int load(const std::string& path, const std::string& output_dir, ConfigPtr& cfg) {
    collisim_config* raw = nullptr;
    if (auto s = collisim_config_load(path.c_str(), &raw); s != COLLISIM_OK) return report_error(s);
    cfg.reset(raw);
    if (!output_dir.empty()) {
        if (auto s = collisim_config_set_output_dir(cfg.get(), output_dir.c_str()); s != COLLISIM_OK) {
            return report_error(s);
        }
    }
    return kPass;
}

int run(const std::string& path, const std::string& output_dir, bool sweep) {
    ConfigPtr cfg;
    if (int rc = load(path, output_dir, cfg); rc != kPass) return rc;
    if (collisim_config_is_sweep(cfg.get()) != (sweep ? 1 : 0)) {
        std::fprintf(stderr, "collisim: scenario '%s' must be run with 'collisim %s'\n",
                     collisim_config_scenario(cfg.get()), sweep ? "run" : "sweep");
        return kUsage;
    }
    collisim_report* raw = nullptr;
    if (auto s = collisim_run_scenario(cfg.get(), &raw); s != COLLISIM_OK) return report_error(s);
    ReportPtr report(raw);
    std::fputs(collisim_report_text(report.get()), stdout);
    return collisim_report_passed(report.get()) ? kPass : kToleranceFail;
}

int validate(const std::string& path, const std::string& output_dir) {
    ConfigPtr cfg;
    if (int rc = load(path, output_dir, cfg); rc != kPass) return rc;
    if (auto s = collisim_config_validate(cfg.get()); s != COLLISIM_OK) return report_error(s);
    std::printf("%s: valid %s configuration\n", path.c_str(), collisim_config_scenario(cfg.get()));
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"collisim: off-resonant quantum collision model simulator"};
    app.set_version_flag("--version", collisim_version());
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write trajectories and a report");
    run_cmd->add_option("config", config_path, "Scenario configuration file")->required();
    run_cmd->add_option("--output-dir", output_dir, "Override output_path from the configuration");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep_cmd->add_option("config", config_path, "Sweep configuration file")->required();
    sweep_cmd->add_option("--output-dir", output_dir, "Override output_path from the configuration");

    auto* validate_cmd = app.add_subcommand("validate", "Check a configuration without running it");
    validate_cmd->add_option("config", config_path, "Scenario configuration file")->required();
    validate_cmd->add_option("--output-dir", output_dir, "Override output_path from the configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }

    if (run_cmd->parsed()) return run(config_path, output_dir, false);
    if (sweep_cmd->parsed()) return run(config_path, output_dir, true);
    return validate(config_path, output_dir);
}
